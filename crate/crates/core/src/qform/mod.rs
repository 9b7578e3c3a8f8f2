//! Diagonal quadratic forms and their isotropy.
//!
//! Anisotropy over a complete discretely valued field is decided by splitting
//! a form `φ = φ₁ ⊥ ⟨π⟩φ₂` into unit parts and reducing both to the residue
//! field (Springer). Forms over the base number field only ever get a
//! one-sided answer from this: anisotropic over a completion implies
//! anisotropic over the field, not conversely.

mod formal;
mod search;

pub use formal::{springer_tower, Anisotropy, LaurentForm, Monomial, TowerStep};
pub use search::find_isotropic_vector;

use num_traits::{One, Zero};
use serde::Serialize;
use std::fmt;

use crate::error::{Error, Result};
use crate::exactnum::{BaseField, GaussianRational};
use crate::ffield::{FiniteField, FqElem};
use crate::valuation::{Level, Order, Prime, Valuation};

/// Descriptor of a finite residue field.
pub type FiniteFieldDesc = FiniteField;

/// A nonsingular diagonal form `⟨a₁,…,aₙ⟩` over ℚ or ℚ(i).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiagForm {
    base: BaseField,
    entries: Vec<GaussianRational>,
}

impl DiagForm {
    pub fn new(base: BaseField, entries: Vec<GaussianRational>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: 0,
            });
        }
        for e in &entries {
            base.check(e)?;
            if e.is_zero() {
                return Err(Error::ZeroEntry);
            }
        }
        Ok(DiagForm { base, entries })
    }

    pub fn from_ints(base: BaseField, entries: &[i64]) -> Result<Self> {
        Self::new(
            base,
            entries.iter().map(|&a| GaussianRational::from_int(a)).collect(),
        )
    }

    pub fn base(&self) -> BaseField {
        self.base
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[GaussianRational] {
        &self.entries
    }

    /// `a₁⋯aₙ`, a representative of the determinant's square class.
    pub fn det(&self) -> GaussianRational {
        self.entries
            .iter()
            .fold(GaussianRational::one(), |acc, a| &acc * a)
    }

    /// `Σ aᵢ vᵢ²`.
    pub fn evaluate(&self, v: &[GaussianRational]) -> Result<GaussianRational> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: v.len(),
            });
        }
        Ok(self
            .entries
            .iter()
            .zip(v)
            .map(|(a, x)| a * &(x * x))
            .sum())
    }

    pub fn orth_sum(&self, other: &DiagForm) -> Result<DiagForm> {
        if self.base != other.base {
            return Err(Error::InvalidConfig(format!(
                "orthogonal sum of forms over {} and {}",
                self.base, other.base
            )));
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(DiagForm {
            base: self.base,
            entries,
        })
    }

    pub fn scale(&self, c: &GaussianRational) -> Result<DiagForm> {
        if c.is_zero() {
            return Err(Error::ZeroScale);
        }
        self.base.check(c)?;
        Ok(DiagForm {
            base: self.base,
            entries: self.entries.iter().map(|a| c * a).collect(),
        })
    }

    pub fn permuted(&self, perm: &[usize]) -> Result<DiagForm> {
        let mut seen = vec![false; self.dim()];
        if perm.len() != self.dim() || perm.iter().any(|&k| k >= self.dim() || std::mem::replace(&mut seen[k], true)) {
            return Err(Error::InvalidConfig("not a permutation".into()));
        }
        Ok(DiagForm {
            base: self.base,
            entries: perm.iter().map(|&k| self.entries[k].clone()).collect(),
        })
    }
}

impl fmt::Display for DiagForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        write!(f, "⟨{}⟩", parts.join(","))
    }
}

impl Serialize for DiagForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A diagonal form over a finite residue field; may be empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteForm {
    field: FiniteField,
    entries: Vec<FqElem>,
}

impl FiniteForm {
    pub fn new(field: FiniteField, entries: Vec<FqElem>) -> Self {
        FiniteForm { field, entries }
    }

    pub fn field(&self) -> FiniteField {
        self.field
    }

    pub fn entries(&self) -> &[FqElem] {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn evaluate(&self, v: &[FqElem]) -> FqElem {
        let ff = &self.field;
        self.entries
            .iter()
            .zip(v)
            .fold(FqElem::ZERO, |acc, (a, x)| ff.add(acc, ff.mul(*a, ff.mul(*x, *x))))
    }
}

impl fmt::Display for FiniteForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|e| {
                if self.field.degree() == 2 && e.c1 != 0 {
                    format!("{}+{}t", e.c0, e.c1)
                } else {
                    e.c0.to_string()
                }
            })
            .collect();
        write!(f, "⟨{}⟩ over {}", parts.join(","), self.field)
    }
}

/// Exact isotropy over a finite field of odd characteristic.
///
/// Dimension ≤ 1 is anisotropic, `⟨u₁,u₂⟩` is isotropic iff `−u₁u₂` is a
/// square, and dimension ≥ 3 is always isotropic (Chevalley–Warning).
pub fn is_isotropic_finite(form: &FiniteForm) -> Result<bool> {
    if form.entries.iter().any(|e| e.is_zero()) {
        return Err(Error::ZeroEntry);
    }
    let ff = &form.field;
    Ok(match form.dim() {
        0 | 1 => false,
        2 => {
            let d = ff.neg(ff.mul(form.entries[0], form.entries[1]));
            ff.is_square(d)
        }
        _ => true,
    })
}

/// Brute-force isotropy over `F_q^n`; `None` when `q^n > 10⁶`.
pub fn is_isotropic_by_enumeration(form: &FiniteForm) -> Option<bool> {
    let q = form.field.order();
    let n = form.dim() as u32;
    let total = q.checked_pow(n).filter(|&t| t <= 1_000_000)?;
    let elems: Vec<FqElem> = form.field.elements().collect();
    let mut v = vec![FqElem::ZERO; form.dim()];
    // index 0 is the zero vector
    for idx in 1..total {
        let mut k = idx;
        for slot in v.iter_mut() {
            *slot = elems[(k % q) as usize];
            k /= q;
        }
        if form.evaluate(&v).is_zero() {
            return Some(true);
        }
    }
    Some(false)
}

/// `φ = φ₁ ⊥ ⟨π⟩φ₂` with both parts reduced to the residue field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueSplit {
    pub first: FiniteForm,
    pub second: FiniteForm,
    pub uniformizer: GaussianRational,
}

/// Splits by the canonical uniformizer of `prime`.
pub fn residue_decompose(form: &DiagForm, prime: &Prime) -> Result<ResidueSplit> {
    residue_decompose_with(form, prime, &prime.uniformizer())
}

/// Splits using a caller-chosen uniformizer (any `π` with `v(π) = 1`).
///
/// Each entry `a = π^v·u` contributes `ū` to the first residue form when `v`
/// is even and to the second when `v` is odd; the even part of `π^v` is a
/// square and drops out.
pub fn residue_decompose_with(
    form: &DiagForm,
    prime: &Prime,
    uniformizer: &GaussianRational,
) -> Result<ResidueSplit> {
    if prime.is_dyadic() {
        return Err(Error::Dyadic(prime.to_string()));
    }
    if prime.base_field() != form.base() {
        return Err(Error::InvalidConfig(format!(
            "prime {prime} does not live over {}",
            form.base()
        )));
    }
    if prime.valuation(uniformizer)? != Order::Finite(1) {
        return Err(Error::InvalidConfig(format!(
            "{uniformizer} is not a uniformizer at {prime}"
        )));
    }
    let field = prime.residue_field();
    let pi_inv = uniformizer.inv().expect("uniformizer is nonzero");
    let mut first = Vec::new();
    let mut second = Vec::new();
    for a in form.entries() {
        let v = prime.valuation(a)?.finite();
        let shift = if v >= 0 {
            pi_inv.pow(v as u32)
        } else {
            uniformizer.pow((-v) as u32)
        };
        let unit = a * &shift;
        let r = prime.reduce(&unit)?;
        debug_assert!(!r.is_zero());
        if v.rem_euclid(2) == 0 {
            first.push(r);
        } else {
            second.push(r);
        }
    }
    Ok(ResidueSplit {
        first: FiniteForm::new(field, first),
        second: FiniteForm::new(field, second),
        uniformizer: uniformizer.clone(),
    })
}

/// Springer's criterion at a single prime: `true` iff both residue forms are
/// anisotropic, i.e. iff `form` is anisotropic over the completion.
pub fn springer_anisotropic(form: &DiagForm, val: &Valuation) -> Result<bool> {
    let prime = match val.levels() {
        [Level::Prime(p)] => p,
        _ => {
            return Err(Error::Unsupported(
                "springer_anisotropic takes a single prime level; use springer_tower for formal towers"
                    .into(),
            ))
        }
    };
    let split = residue_decompose(form, prime)?;
    Ok(!is_isotropic_finite(&split.first)? && !is_isotropic_finite(&split.second)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn g(re: i64, im: i64) -> GaussianRational {
        GaussianRational::from_ints(re, im)
    }

    fn q(entries: &[i64]) -> DiagForm {
        DiagForm::from_ints(BaseField::Rationals, entries).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let ones = |n| vec![g(1, 0); n];
        assert_eq!(q(&[1, 1, 1, 1]).evaluate(&ones(4)).unwrap(), g(4, 0));
        let split = q(&[1, 1, -1, -1]);
        assert_eq!(
            split.evaluate(&[g(1, 0), g(0, 0), g(1, 0), g(0, 0)]).unwrap(),
            g(0, 0)
        );
        assert_eq!(split.evaluate(&vec![g(0, 0); 4]).unwrap(), g(0, 0));
        assert!(matches!(
            split.evaluate(&ones(3)),
            Err(Error::DimensionMismatch { expected: 4, got: 3 })
        ));
    }

    #[test]
    fn construction_and_sums() {
        assert_eq!(q(&[1]).orth_sum(&q(&[-1])).unwrap(), q(&[1, -1]));
        let f = DiagForm::new(BaseField::Rationals, vec![g(-1, 0), g(7, 0)]).unwrap();
        assert_eq!(f.scale(&g(3, 0)).unwrap(), q(&[-3, 21]));
        assert_eq!(f.scale(&g(1, 0)).unwrap(), f);
        assert!(matches!(f.scale(&g(0, 0)), Err(Error::ZeroScale)));
        assert!(matches!(
            DiagForm::from_ints(BaseField::Rationals, &[1, 0]),
            Err(Error::ZeroEntry)
        ));
        assert!(DiagForm::new(BaseField::Rationals, vec![g(0, 1)]).is_err());
        assert_eq!(q(&[1, -2, 3]).to_string(), "⟨1,-2,3⟩");
        assert_eq!(q(&[2, 3, 5]).det(), g(30, 0));
    }

    #[test]
    fn decompose_norm_form_at_uniformizer() {
        // ⟨1,−π,−b,πb⟩ with π = 3, b = −1
        let three = Prime::rational(3).unwrap();
        let form = q(&[1, -3, 1, -3]);
        let split = residue_decompose(&form, &three).unwrap();
        let ff = three.residue_field();
        // φ₁ = ⟨1, −b⟩ = ⟨1,1⟩, φ₂ = ⟨−1, b⟩ = ⟨2,2⟩
        assert_eq!(split.first.entries(), &[ff.from_u64(1), ff.from_u64(1)]);
        assert_eq!(split.second.entries(), &[ff.from_u64(2), ff.from_u64(2)]);
        assert!(springer_anisotropic(&form, &Valuation::at_prime(three)).unwrap());
    }

    #[test]
    fn decompose_trivial_cases() {
        let five = Prime::rational(5).unwrap();
        let split = residue_decompose(&q(&[2]), &five).unwrap();
        assert_eq!(split.first.dim(), 1);
        assert_eq!(split.second.dim(), 0);
        // π³ ≡ π mod squares
        let split = residue_decompose(&q(&[125]), &five).unwrap();
        assert_eq!(split.first.dim(), 0);
        assert_eq!(split.second.entries(), &[FqElem::ONE]);
        // negative valuations behave the same way
        let split = residue_decompose(
            &DiagForm::new(BaseField::Rationals, vec![GaussianRational::from_rational(rational(2, 25))]).unwrap(),
            &five,
        )
        .unwrap();
        assert_eq!(split.first.entries(), &[five.residue_field().from_u64(2)]);
    }

    #[test]
    fn dyadic_rejected() {
        let two = Prime::rational(2).unwrap();
        assert!(matches!(
            residue_decompose(&q(&[1, 1]), &two),
            Err(Error::Dyadic(_))
        ));
        let one_plus_i = Prime::gaussian(&g(1, 1)).unwrap();
        let f = DiagForm::from_ints(BaseField::GaussianRationals, &[1, 1]).unwrap();
        assert!(matches!(
            springer_anisotropic(&f, &Valuation::at_prime(one_plus_i)),
            Err(Error::Dyadic(_))
        ));
    }

    #[test]
    fn finite_isotropy_examples() {
        let f3 = FiniteField::prime_field(3).unwrap();
        let one = FqElem::ONE;
        assert!(!is_isotropic_finite(&FiniteForm::new(f3, vec![one, one])).unwrap());
        assert!(is_isotropic_finite(&FiniteForm::new(f3, vec![one, one, one])).unwrap());
        assert!(!is_isotropic_finite(&FiniteForm::new(f3, vec![])).unwrap());
        assert!(is_isotropic_finite(&FiniteForm::new(f3, vec![one, FqElem::ZERO])).is_err());
        // ⟨1, −ī⟩ over F_49: i maps to t, which is a non-square there
        let f49 = FiniteField::quadratic(7).unwrap();
        let minus_t = f49.neg(f49.t());
        let form = FiniteForm::new(f49, vec![one, minus_t]);
        assert_eq!(is_isotropic_finite(&form).unwrap(), f49.is_square(f49.t()));
    }

    #[test]
    fn finite_isotropy_matches_enumeration() {
        for field in [
            FiniteField::prime_field(3).unwrap(),
            FiniteField::prime_field(5).unwrap(),
            FiniteField::prime_field(7).unwrap(),
            FiniteField::quadratic(3).unwrap(),
        ] {
            let units: Vec<FqElem> = field.elements().filter(|x| !x.is_zero()).collect();
            for dim in 0..=3usize {
                let mut idx = vec![0usize; dim];
                loop {
                    let form = FiniteForm::new(field, idx.iter().map(|&k| units[k]).collect());
                    assert_eq!(
                        Some(is_isotropic_finite(&form).unwrap()),
                        is_isotropic_by_enumeration(&form),
                        "{form}"
                    );
                    // odometer
                    let mut pos = 0;
                    while pos < dim {
                        idx[pos] += 1;
                        if idx[pos] < units.len() {
                            break;
                        }
                        idx[pos] = 0;
                        pos += 1;
                    }
                    if pos == dim {
                        break;
                    }
                }
            }
        }
    }

    #[test]
    fn hyperbolic_plane_is_isotropic_everywhere() {
        for p in [3u64, 5, 7, 11, 13] {
            let prime = Prime::rational(p).unwrap();
            assert!(!springer_anisotropic(&q(&[1, -1]), &Valuation::at_prime(prime)).unwrap());
        }
    }

    #[test]
    fn square_residue_breaks_certification() {
        // b = 4 is a square mod 5, so ⟨1,−b⟩ reduces to an isotropic plane
        let five = Prime::rational(5).unwrap();
        let form = q(&[1, -4, -5, 20]);
        let split = residue_decompose(&form, &five).unwrap();
        assert_eq!(is_isotropic_by_enumeration(&split.first), Some(true));
        assert!(!springer_anisotropic(&form, &Valuation::at_prime(five)).unwrap());
    }

    #[test]
    fn square_classes_and_permutations_do_not_matter() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let primes: Vec<Prime> = [3u64, 5, 7, 11]
            .into_iter()
            .map(|p| Prime::rational(p).unwrap())
            .collect();
        for _ in 0..300 {
            let dim = rng.gen_range(1..=5);
            let entries: Vec<i64> = (0..dim)
                .map(|_| {
                    let x: i64 = rng.gen_range(1..60);
                    if rng.gen_bool(0.5) {
                        -x
                    } else {
                        x
                    }
                })
                .collect();
            let form = q(&entries);
            for prime in &primes {
                let val = Valuation::at_prime(prime.clone());
                let base = springer_anisotropic(&form, &val).unwrap();
                let mut e2 = form.entries().to_vec();
                let k = rng.gen_range(0..dim);
                let c = GaussianRational::from_rational(rational(rng.gen_range(1..9), rng.gen_range(1..9)));
                e2[k] = &e2[k] * &(&c * &c);
                let f2 = DiagForm::new(BaseField::Rationals, e2).unwrap();
                assert_eq!(springer_anisotropic(&f2, &val).unwrap(), base);
                let mut perm: Vec<usize> = (0..dim).collect();
                perm.reverse();
                perm.rotate_left(rng.gen_range(0..dim));
                assert_eq!(
                    springer_anisotropic(&form.permuted(&perm).unwrap(), &val).unwrap(),
                    base
                );
            }
        }
    }

    #[test]
    fn anisotropic_forms_have_no_small_zeros() {
        // ⟨1,−3,1,−3⟩ is anisotropic over Q_3 hence over Q
        let form = q(&[1, -3, 1, -3]);
        assert!(springer_anisotropic(&form, &Valuation::at_prime(Prime::rational(3).unwrap())).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            let v: Vec<GaussianRational> = (0..4)
                .map(|_| {
                    GaussianRational::from_rational(rational(rng.gen_range(-30..=30), rng.gen_range(1..=12)))
                })
                .collect();
            if v.iter().all(|x| x.is_zero()) {
                continue;
            }
            assert!(!form.evaluate(&v).unwrap().is_zero());
        }
    }
}
