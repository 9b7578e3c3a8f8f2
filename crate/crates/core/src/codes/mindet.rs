//! Minimum determinants of 2×2 quaternionic codebooks and the NVD bound.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use super::quat::Codeword2;
use crate::algebras::QuaternionAlgebra;
use crate::error::{Error, Result};
use crate::exactnum::{GaussianRational, Rational};

type G = GaussianRational;

/// Whether to minimise over codewords built from the alphabet, or over
/// differences `X − X'` (symbols from `A − A`). For a box alphabet
/// containing 0 the two differ only in the box size.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MinDetMode {
    Codewords,
    Differences,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinDet {
    /// `min |det X|²` over nonzero `X`; `None` when every codeword is zero.
    #[serde(with = "crate::exactnum::rational_str::option")]
    pub value: Option<Rational>,
    /// Symbols `(α, β, γ, δ)` attaining the minimum.
    pub witness: Option<[G; 4]>,
    /// Distinct square-tuples evaluated.
    pub evaluated: u64,
    pub exact_fast_path: bool,
}

impl MinDet {
    pub fn as_f64(&self) -> Option<f64> {
        self.value.as_ref().map(crate::exactnum::rational_to_f64)
    }
}

/// Symmetric box `{x + yi : |x|, |y| ≤ bound}` (real box over ℚ).
pub fn box_alphabet(bound: i64, gaussian: bool) -> Vec<G> {
    let mut out = Vec::new();
    for x in -bound..=bound {
        if gaussian {
            for y in -bound..=bound {
                out.push(G::from_ints(x, y));
            }
        } else {
            out.push(G::from_int(x));
        }
    }
    out
}

/// All `s − t` for `s, t` in the alphabet, deduplicated.
pub fn difference_alphabet(alphabet: &[G]) -> Vec<G> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for s in alphabet {
        for t in alphabet {
            let d = s - t;
            if seen.insert(d.clone()) {
                out.push(d);
            }
        }
    }
    out
}

/// Minimum over an explicit list of codewords.
pub fn min_det_of<'c>(codewords: impl IntoIterator<Item = &'c Codeword2>) -> Option<Rational> {
    codewords
        .into_iter()
        .filter(|c| !c.is_zero())
        .map(Codeword2::det_abs2)
        .min()
}

/// Exhaustive `δ_min` for the codebook over `alphabet⁴`.
///
/// The determinant `α² − aβ² − b(γ² − aδ²)` depends only on the squares
/// of the symbols, so the search runs over distinct squares; a tuple is
/// nonzero iff one of its squares is. Gaussian-integer inputs go through
/// checked `i128` arithmetic, anything else through exact rationals.
pub fn min_det(alg: &QuaternionAlgebra, alphabet: &[G], mode: MinDetMode) -> Result<MinDet> {
    if alphabet.is_empty() {
        return Err(Error::InvalidConfig("empty alphabet".into()));
    }
    for s in alphabet {
        alg.base().check(s)?;
    }
    let symbols = match mode {
        MinDetMode::Codewords => alphabet.to_vec(),
        MinDetMode::Differences => difference_alphabet(alphabet),
    };
    // one representative per square
    let mut reps: Vec<(G, G)> = Vec::new();
    let mut seen = BTreeSet::new();
    for s in &symbols {
        let sq = s * s;
        if seen.insert(sq.to_string()) {
            reps.push((sq, s.clone()));
        }
    }
    if let Some(r) = fast_path(alg, &reps)? {
        return Ok(r);
    }
    Ok(slow_path(alg, &reps))
}

fn gi(z: &G) -> Option<(i128, i128)> {
    if !z.is_gaussian_integer() {
        return None;
    }
    let (a, b, _) = z.integer_parts();
    Some((a.to_i128()?, b.to_i128()?))
}

fn cmul(x: (i128, i128), y: (i128, i128)) -> Option<(i128, i128)> {
    Some((
        x.0.checked_mul(y.0)?.checked_sub(x.1.checked_mul(y.1)?)?,
        x.0.checked_mul(y.1)?.checked_add(x.1.checked_mul(y.0)?)?,
    ))
}

fn csub(x: (i128, i128), y: (i128, i128)) -> Option<(i128, i128)> {
    Some((x.0.checked_sub(y.0)?, x.1.checked_sub(y.1)?))
}

fn fast_path(alg: &QuaternionAlgebra, reps: &[(G, G)]) -> Result<Option<MinDet>> {
    let (Some(a), Some(b)) = (gi(alg.a()), gi(alg.b())) else {
        return Ok(None);
    };
    let Some(sq): Option<Vec<(i128, i128)>> = reps.iter().map(|(s, _)| gi(s)).collect() else {
        return Ok(None);
    };
    // precompute u = s² − a t² for all pairs, then det = u − b v
    let n = sq.len();
    let mut pair = Vec::with_capacity(n * n);
    for s in &sq {
        for t in &sq {
            let v = cmul(a, *t).and_then(|at| csub(*s, at)).ok_or(Error::Overflow)?;
            pair.push(v);
        }
    }
    let b_pair: Vec<(i128, i128)> = pair
        .iter()
        .map(|v| cmul(b, *v).ok_or(Error::Overflow))
        .collect::<Result<_>>()?;
    // index of the all-zero (α, β) or (γ, δ) pair, if 0 is in the alphabet
    let zz = sq.iter().position(|s| *s == (0, 0)).map(|z| z * n + z);
    let mut best: Option<(i128, usize, usize)> = None;
    for (k1, u) in pair.iter().enumerate() {
        for (k2, bv) in b_pair.iter().enumerate() {
            if zz == Some(k1) && zz == Some(k2) {
                continue;
            }
            let d = csub(*u, *bv).ok_or(Error::Overflow)?;
            let m = d
                .0
                .checked_mul(d.0)
                .and_then(|x| x.checked_add(d.1.checked_mul(d.1)?))
                .ok_or(Error::Overflow)?;
            if best.is_none_or(|(bm, _, _)| m < bm) {
                best = Some((m, k1, k2));
            }
        }
    }
    Ok(Some(finish(
        best.map(|(m, k1, k2)| (Rational::from_integer(BigInt::from(m)), k1, k2)),
        reps,
        n,
        (n * n) as u64 * (n * n) as u64,
        true,
    )))
}

fn finish(best: Option<(Rational, usize, usize)>, reps: &[(G, G)], n: usize, evaluated: u64, fast: bool) -> MinDet {
    let witness = best.as_ref().map(|(_, k1, k2)| {
        [
            reps[k1 / n].1.clone(),
            reps[k1 % n].1.clone(),
            reps[k2 / n].1.clone(),
            reps[k2 % n].1.clone(),
        ]
    });
    MinDet {
        value: best.map(|(m, _, _)| m),
        witness,
        evaluated,
        exact_fast_path: fast,
    }
}

fn slow_path(alg: &QuaternionAlgebra, reps: &[(G, G)]) -> MinDet {
    let n = reps.len();
    let pair: Vec<G> = reps
        .iter()
        .flat_map(|(s, _)| reps.iter().map(move |(t, _)| s - &(alg.a() * t)))
        .collect();
    let b_pair: Vec<G> = pair.iter().map(|v| alg.b() * v).collect();
    let is_zero_pair = |k: usize| reps[k / n].0.is_zero() && reps[k % n].0.is_zero();
    let mut best: Option<(Rational, usize, usize)> = None;
    for (k1, u) in pair.iter().enumerate() {
        for (k2, bv) in b_pair.iter().enumerate() {
            if is_zero_pair(k1) && is_zero_pair(k2) {
                continue;
            }
            let m = (u - bv).norm();
            if best.as_ref().is_none_or(|(bm, _, _)| &m < bm) {
                best = Some((m, k1, k2));
            }
        }
    }
    finish(best, reps, n, (n * n) as u64 * (n * n) as u64, false)
}

type GInt = (BigInt, BigInt);

fn gint_rem(x: &GInt, y: &GInt) -> GInt {
    // x − y·round(x / y)
    let n = &y.0 * &y.0 + &y.1 * &y.1;
    let re = &x.0 * &y.0 + &x.1 * &y.1;
    let im = &x.1 * &y.0 - &x.0 * &y.1;
    let round = |v: &BigInt| {
        let two = BigInt::from(2);
        (v * &two + &n).div_floor(&(&n * &two))
    };
    let q = (round(&re), round(&im));
    (
        &x.0 - (&y.0 * &q.0 - &y.1 * &q.1),
        &x.1 - (&y.0 * &q.1 + &y.1 * &q.0),
    )
}

/// A greatest common divisor in ℤ[i], up to units.
pub fn gaussian_gcd(x: &GInt, y: &GInt) -> GInt {
    let (mut a, mut b) = (x.clone(), y.clone());
    while !(b.0.is_zero() && b.1.is_zero()) {
        let r = gint_rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

/// `|b_d|²` where `b = b_n / b_d` in lowest terms over ℤ[i].
pub fn denominator_norm(b: &G) -> BigInt {
    let (re, im, d) = b.integer_parts();
    let g = gaussian_gcd(&(re, im), &(d.clone(), BigInt::zero()));
    let gn = &g.0 * &g.0 + &g.1 * &g.1;
    (&d * &d) / gn
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NvdReport {
    /// The analytic lower bound `1 / |b_d|²`.
    #[serde(with = "crate::exactnum::rational_str")]
    pub bound: Rational,
    pub min_det: MinDet,
    /// `min_det ≥ bound` (exact comparison).
    pub holds: bool,
}

/// Compares the analytic bound with an exhaustive `δ_min` over `alphabet`.
pub fn nvd_check(alg: &QuaternionAlgebra, alphabet: &[G], mode: MinDetMode) -> Result<NvdReport> {
    let bound = Rational::new(BigInt::one(), denominator_norm(alg.b()));
    let md = min_det(alg, alphabet, mode)?;
    let holds = md.value.as_ref().is_none_or(|v| v >= &bound && v.is_positive());
    Ok(NvdReport { bound, min_det: md, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::quat::gen_codebook_2x2;
    use crate::exactnum::{rational, BaseField};

    fn qi(a: G, b: G) -> QuaternionAlgebra {
        QuaternionAlgebra::new(BaseField::GaussianRationals, a, b).unwrap()
    }

    fn brute(alg: &QuaternionAlgebra, alphabet: &[G]) -> Option<Rational> {
        let words: Vec<Codeword2> = gen_codebook_2x2(alg, alphabet).unwrap().collect();
        min_det_of(&words)
    }

    #[test]
    fn identity_only() {
        let alg = qi(G::from_ints(1, 2), G::i());
        let one = Codeword2::from_symbols(&alg, [G::one(), G::zero(), G::zero(), G::zero()]).unwrap();
        assert_eq!(min_det_of([&one]), Some(Rational::one()));
    }

    #[test]
    fn agrees_with_brute_force() {
        let alphabets = [box_alphabet(1, true), vec![G::from_ints(1, 1), G::from_ints(-1, 1), G::from_ints(1, -1), G::from_ints(-1, -1)]];
        for (a, b) in [((1, 2), (0, 1)), ((2, 1), (0, 1)), ((1, 1), (0, 1)), ((3, 0), (-1, 0))] {
            let alg = qi(G::from_ints(a.0, a.1), G::from_ints(b.0, b.1));
            for alph in &alphabets {
                let fast = min_det(&alg, alph, MinDetMode::Codewords).unwrap();
                assert!(fast.exact_fast_path);
                assert_eq!(fast.value, brute(&alg, alph), "{alg}");
                let w = fast.witness.unwrap();
                let c = Codeword2::from_symbols(&alg, w).unwrap();
                assert_eq!(Some(c.det_abs2()), fast.value);
            }
        }
    }

    #[test]
    fn rational_parameters_take_the_slow_path() {
        let alg = qi(G::from_ints(1, 2), G::new(rational(0, 1), rational(1, 2)));
        let alph = box_alphabet(1, true);
        let r = min_det(&alg, &alph, MinDetMode::Codewords).unwrap();
        assert!(!r.exact_fast_path);
        assert_eq!(r.value, brute(&alg, &alph));
    }

    #[test]
    fn real_box_over_q() {
        let alg = QuaternionAlgebra::new(BaseField::Rationals, G::from_int(3), G::from_int(-1)).unwrap();
        let alph = box_alphabet(2, false);
        let r = min_det(&alg, &alph, MinDetMode::Codewords).unwrap();
        assert_eq!(r.value, brute(&alg, &alph));
        // (3,-1) is division over Q; the norm form is integral, so δ ≥ 1
        assert!(r.value.unwrap() >= Rational::one());
    }

    #[test]
    fn differences_match_pairwise_brute_force() {
        let alg = qi(G::from_ints(1, 2), G::i());
        let alph = vec![G::from_ints(1, 1), G::from_ints(-1, -1), G::from_ints(1, -1)];
        let words: Vec<Codeword2> = gen_codebook_2x2(&alg, &alph).unwrap().collect();
        let mut best: Option<Rational> = None;
        for x in &words {
            for y in &words {
                let s: Vec<G> = x.symbols().iter().zip(y.symbols()).map(|(p, q)| p - &q).collect();
                let d = Codeword2::from_symbols(&alg, s.try_into().unwrap()).unwrap();
                if !d.is_zero() {
                    let v = d.det_abs2();
                    best = Some(best.map_or(v.clone(), |b| b.min(v)));
                }
            }
        }
        assert_eq!(min_det(&alg, &alph, MinDetMode::Differences).unwrap().value, best);
    }

    #[test]
    fn nvd_bounds() {
        assert_eq!(denominator_norm(&G::i()), BigInt::from(1));
        assert_eq!(denominator_norm(&G::new(rational(0, 1), rational(1, 2))), BigInt::from(4));
        // (1+i)/2 = 1/(1−i): |b_d|² = 2
        assert_eq!(denominator_norm(&G::new(rational(1, 2), rational(1, 2))), BigInt::from(2));
        let alg = qi(G::from_ints(1, 2), G::i());
        let rep = nvd_check(&alg, &box_alphabet(1, true), MinDetMode::Codewords).unwrap();
        assert_eq!(rep.bound, Rational::one());
        assert!(rep.holds);
    }

    #[test]
    fn gcd_in_zi() {
        let g = gaussian_gcd(&(BigInt::from(5), BigInt::zero()), &(BigInt::from(3), BigInt::from(4)));
        // 3+4i = (2+i)², so the gcd with 5 = (2+i)(2−i) has norm 5
        assert_eq!(&g.0 * &g.0 + &g.1 * &g.1, BigInt::from(5));
    }
}
