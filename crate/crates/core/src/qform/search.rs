//! Bounded search for isotropic vectors, used to produce explicit
//! "not a division algebra" witnesses.

use num_traits::{ToPrimitive, Zero};
use std::collections::HashMap;

use super::DiagForm;
use crate::error::{Error, Result};
use crate::exactnum::{BaseField, GaussianRational};

type Zi = (i128, i128);

const TABLE_LIMIT: u128 = 4_000_000;

fn zi_mul(a: Zi, b: Zi) -> Option<Zi> {
    let re = a.0.checked_mul(b.0)?.checked_sub(a.1.checked_mul(b.1)?)?;
    let im = a.0.checked_mul(b.1)?.checked_add(a.1.checked_mul(b.0)?)?;
    Some((re, im))
}

fn zi_add(a: Zi, b: Zi) -> Option<Zi> {
    Some((a.0.checked_add(b.0)?, a.1.checked_add(b.1)?))
}

/// Searches for a nonzero `v` with `form(v) = 0` among vectors whose
/// denominator-cleared coordinates have real and imaginary parts bounded by
/// `bound` in absolute value (imaginary parts only over ℚ(i)).
///
/// Meet-in-the-middle over the two halves of the coordinates, so a
/// 6-dimensional form with `bound = 2` over ℚ(i) costs about 15k table
/// entries. Returns the first hit in a fixed enumeration order.
pub fn find_isotropic_vector(form: &DiagForm, bound: i64) -> Result<Option<Vec<GaussianRational>>> {
    // a = A/D  ⇒  a·D² = A·D, and a (D w)² = (A·D) w²
    let mut scaled = Vec::with_capacity(form.dim());
    let mut denoms = Vec::with_capacity(form.dim());
    for a in form.entries() {
        let (re, im, d) = a.integer_parts();
        let re = (re * &d).to_i128().ok_or(Error::Overflow)?;
        let im = (im * &d).to_i128().ok_or(Error::Overflow)?;
        scaled.push((re, im));
        denoms.push(d);
    }

    let b = bound as i128;
    let values: Vec<Zi> = match form.base() {
        BaseField::Rationals => (-b..=b).map(|x| (x, 0)).collect(),
        BaseField::GaussianRationals => (-b..=b)
            .flat_map(|x| (-b..=b).map(move |y| (x, y)))
            .collect(),
    };
    let squares: Vec<Zi> = values
        .iter()
        .map(|&w| zi_mul(w, w).ok_or(Error::Overflow))
        .collect::<Result<_>>()?;
    let zero_idx = values.iter().position(|&w| w == (0, 0)).expect("0 is a candidate");
    let m = values.len() as u128;

    let n = form.dim();
    let h = n / 2;
    let (left, right) = scaled.split_at(h);
    let size = |k: usize| m.checked_pow(k as u32).unwrap_or(u128::MAX);
    if size(h).max(size(n - h)) > TABLE_LIMIT {
        return Err(Error::BudgetExceeded {
            codewords: size(h).max(size(n - h)),
            limit: TABLE_LIMIT,
        });
    }

    let eval = |coeffs: &[Zi], idx: &[usize]| -> Result<Zi> {
        let mut acc = (0, 0);
        for (c, &k) in coeffs.iter().zip(idx) {
            acc = zi_add(acc, zi_mul(*c, squares[k]).ok_or(Error::Overflow)?).ok_or(Error::Overflow)?;
        }
        Ok(acc)
    };

    // value → half-vector, preferring a nonzero one for the value 0
    let mut table: HashMap<Zi, Vec<usize>> = HashMap::new();
    for idx in Odometer::new(h, values.len()) {
        let s = eval(left, &idx)?;
        let nonzero = idx.iter().any(|&k| k != zero_idx);
        match table.get_mut(&s) {
            None => {
                table.insert(s, idx);
            }
            Some(prev) if nonzero && prev.iter().all(|&k| k == zero_idx) => *prev = idx,
            _ => {}
        }
    }

    for idx in Odometer::new(n - h, values.len()) {
        let s = eval(right, &idx)?;
        let target = (-s.0, -s.1);
        if let Some(l) = table.get(&target) {
            let all_zero = l.iter().chain(&idx).all(|&k| k == zero_idx);
            if all_zero {
                continue;
            }
            let v = l
                .iter()
                .chain(&idx)
                .zip(&denoms)
                .map(|(&k, d)| {
                    let (x, y) = values[k];
                    let d = GaussianRational::from_bigints(d.clone(), Zero::zero());
                    &GaussianRational::from_ints(x as i64, y as i64) * &d
                })
                .collect::<Vec<_>>();
            debug_assert!(form.evaluate(&v).map(|z| z.is_zero()).unwrap_or(false));
            return Ok(Some(v));
        }
    }
    Ok(None)
}

/// All `k`-tuples over `0..m`, first coordinate fastest.
struct Odometer {
    idx: Vec<usize>,
    m: usize,
    done: bool,
}

impl Odometer {
    fn new(k: usize, m: usize) -> Self {
        Odometer {
            idx: vec![0; k],
            m,
            done: m == 0,
        }
    }
}

impl Iterator for Odometer {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let mut pos = 0;
        loop {
            if pos == self.idx.len() {
                self.done = true;
                break;
            }
            self.idx[pos] += 1;
            if self.idx[pos] < self.m {
                break;
            }
            self.idx[pos] = 0;
            pos += 1;
        }
        Some(out)
    }
}
