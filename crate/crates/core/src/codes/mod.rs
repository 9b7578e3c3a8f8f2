//! Matrix representations, codebooks, determinant identities, minimum
//! determinants and power normalisation.

mod biquat;
mod mindet;
mod presets;
mod quat;

pub use biquat::{
    biquat_matrix, codeword4_at, det2, det2_formal, det4_ball, det_formal, entry_field, factor_kronecker,
    gen_codebook_4x4, kron_complex, kron_formal, numeric_params, BiPoly, Codeword4, FormalMatrix, KroneckerFactors,
    DEFAULT_STAND_INS,
};
pub use mindet::{
    box_alphabet, denominator_norm, difference_alphabet, gaussian_gcd, min_det, min_det_of, nvd_check, MinDet,
    MinDetMode, NvdReport,
};
pub use presets::{
    br_codebook, fig1_codes, gaussian_algebra, golden_codebook, quaternion_codebook, CodePreset, CodebookJson,
    CodewordJson, FloatCodebook, BRANCH_NOTE,
};
pub use quat::{codeword_at, det_exact, gen_codebook_2x2, mat2_mul, quat_matrix, Codeword2};

use serde::{Deserialize, Serialize};

use crate::algebras::Algebra;
use crate::error::{Error, Result};
use crate::exactnum::GaussianRational;

/// `P = (1 + |√a|²)(3 + |b|²)/4`.
pub fn power_factor(a: &GaussianRational, b: &GaussianRational) -> f64 {
    (1.0 + a.to_complex().norm()) * (3.0 + b.to_complex().norm_sqr()) / 4.0
}

#[derive(Clone, Debug, PartialEq)]
pub struct CodebookSpec {
    pub algebra: Algebra,
    pub alphabet: Vec<GaussianRational>,
    /// Per-symbol bound `|Re|, |Im| ≤ B`, when the alphabet is a box.
    pub bound: Option<i64>,
    pub power_factor: f64,
}

impl CodebookSpec {
    /// Quaternion algebras get the default `P`; biquaternion codebooks
    /// start unnormalised.
    pub fn new(algebra: Algebra, alphabet: Vec<GaussianRational>) -> Result<Self> {
        if alphabet.is_empty() {
            return Err(Error::InvalidConfig("alphabet must be nonempty".into()));
        }
        for s in &alphabet {
            algebra.base().check(s)?;
        }
        let power_factor = match &algebra {
            Algebra::Quaternion(q) => power_factor(q.a(), q.b()),
            Algebra::Biquaternion(_) => 1.0,
        };
        Ok(CodebookSpec {
            algebra,
            alphabet,
            bound: None,
            power_factor,
        })
    }

    pub fn with_bound(mut self, bound: i64) -> Self {
        self.bound = Some(bound);
        self
    }

    pub fn with_power_factor(mut self, p: f64) -> Result<Self> {
        if !(p > 0.0 && p.is_finite()) {
            return Err(Error::InvalidConfig(format!("power factor must be positive, got {p}")));
        }
        self.power_factor = p;
        Ok(self)
    }

    pub fn codebook_size(&self) -> u128 {
        let per = match self.algebra {
            Algebra::Quaternion(_) => 4,
            Algebra::Biquaternion(_) => 16,
        };
        (self.alphabet.len() as u128).saturating_pow(per)
    }
}

/// Outcome of checking that every nonzero 4×4 codeword is nonsingular
/// with a floating-point determinant and its error radius.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonsingularReport {
    pub checked: u64,
    /// Smallest `|det| − radius` seen; positive means certified nonzero.
    pub min_lower_bound: f64,
    /// Indices whose ball contains zero.
    pub undecided: Vec<u64>,
}

impl NonsingularReport {
    pub fn all_nonsingular(&self) -> bool {
        self.undecided.is_empty()
    }
}

/// Checks codewords `0..limit` of [`gen_codebook_4x4`] (all of them when
/// `limit` is `None`).
pub fn check_nonsingular_4x4(
    alg: &crate::algebras::BiquaternionAlgebra,
    alphabet: &[GaussianRational],
    limit: Option<u64>,
) -> Result<NonsingularReport> {
    let mut report = NonsingularReport {
        checked: 0,
        min_lower_bound: f64::INFINITY,
        undecided: Vec::new(),
    };
    let iter = gen_codebook_4x4(alg, alphabet)?;
    for (k, c) in iter.enumerate().take(limit.unwrap_or(u64::MAX) as usize) {
        if c.is_zero() {
            continue;
        }
        let (d, r) = c.det_ball();
        let lower = d.norm() - r;
        report.min_lower_bound = report.min_lower_bound.min(lower);
        if lower <= 0.0 {
            report.undecided.push(k as u64);
        }
        report.checked += 1;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebras::BiquaternionAlgebra;
    use crate::exactnum::BaseField;

    #[test]
    fn power_factors() {
        let g = GaussianRational::from_ints;
        let p = power_factor(&g(1, 2), &g(0, 1));
        assert!((p - (1.0 + 5f64.sqrt())).abs() < 1e-12);
        assert_eq!(power_factor(&g(0, 1), &g(0, 1)), 2.0);
        assert_eq!(power_factor(&g(-1, 0), &g(-1, 0)), 2.0);
        assert_eq!(power_factor(&g(5, 0), &g(0, 1)), 6.0);
    }

    #[test]
    fn spec_validation() {
        let alg: Algebra = "(1+2i,i)/Qi".parse().unwrap();
        assert!(CodebookSpec::new(alg.clone(), vec![]).is_err());
        let spec = CodebookSpec::new(alg.clone(), box_alphabet(1, true)).unwrap();
        assert_eq!(spec.codebook_size(), 9u128.pow(4));
        assert!(spec.clone().with_power_factor(0.0).is_err());
        let q: Algebra = "(3,-1)/Q".parse().unwrap();
        assert!(CodebookSpec::new(q, vec![GaussianRational::i()]).is_err());
    }

    #[test]
    fn nonzero_4x4_codewords_are_nonsingular() {
        let alg = BiquaternionAlgebra::transcendental(
            BaseField::GaussianRationals,
            GaussianRational::from_ints(1, 2),
            GaussianRational::from_int(7),
        )
        .unwrap();
        let alph = [GaussianRational::from_int(0), GaussianRational::from_int(1)];
        let r = check_nonsingular_4x4(&alg, &alph, Some(4096)).unwrap();
        assert_eq!(r.checked, 4095);
        assert!(r.all_nonsingular(), "{r:?}");
    }
}
