//! Exact arithmetic over ℚ and ℚ(i), and over the quadratic and biquadratic
//! extensions that house codeword entries.
//!
//! Everything here is a plain value type. Rationals are always stored in
//! lowest terms with a positive denominator, so structural equality is
//! numerical equality and values can be hashed.

mod extension;
mod gaussian;

pub use extension::{BiquadExtElem, BiquadField, Galois, QuadExtElem, QuadField};
pub use gaussian::{is_square_gaussian, sqrt_gaussian, GaussianRational};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Exact integer square root, `None` when `n` is negative or not a perfect square.
pub fn isqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Rational square root when one exists (the non-negative one).
pub fn sqrt_rational(r: &Rational) -> Option<Rational> {
    if r.is_zero() {
        return Some(Rational::zero());
    }
    let n = isqrt_exact(r.numer())?;
    let d = isqrt_exact(r.denom())?;
    Some(Rational::new(n, d))
}

pub fn is_square_rational(r: &Rational) -> bool {
    sqrt_rational(r).is_some()
}

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        // Numerator or denominator overflowed f64; scale through the ratio.
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// The two base fields the crate works over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BaseField {
    #[serde(rename = "Q")]
    Rationals,
    #[serde(rename = "Qi")]
    GaussianRationals,
}

impl BaseField {
    pub fn contains(&self, z: &GaussianRational) -> bool {
        match self {
            BaseField::Rationals => z.im.is_zero(),
            BaseField::GaussianRationals => true,
        }
    }

    pub fn check(&self, z: &GaussianRational) -> Result<()> {
        if self.contains(z) {
            Ok(())
        } else {
            Err(Error::NotInField {
                value: z.to_string(),
                field: *self,
            })
        }
    }

    /// A square root of `z` inside this field, if there is one.
    pub fn sqrt(&self, z: &GaussianRational) -> Option<GaussianRational> {
        match self {
            BaseField::Rationals => {
                if !z.im.is_zero() {
                    return None;
                }
                sqrt_rational(&z.re).map(GaussianRational::from_rational)
            }
            BaseField::GaussianRationals => sqrt_gaussian(z),
        }
    }

    pub fn is_square(&self, z: &GaussianRational) -> bool {
        self.sqrt(z).is_some()
    }
}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseField::Rationals => f.write_str("Q"),
            BaseField::GaussianRationals => f.write_str("Qi"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_squares() {
        assert!(is_square_rational(&rational(9, 4)));
        assert!(!is_square_rational(&rational(-1, 1)));
        assert!(!is_square_rational(&rational(5, 1)));
        assert!(is_square_rational(&rational(0, 1)));
        // 8/18 reduces to 4/9
        assert!(is_square_rational(&rational(8, 18)));
        assert_eq!(sqrt_rational(&rational(49, 25)), Some(rational(7, 5)));
    }

    #[test]
    fn field_membership() {
        let i = GaussianRational::i();
        assert!(!BaseField::Rationals.contains(&i));
        assert!(BaseField::GaussianRationals.contains(&i));
        // -1 is a square only once i is adjoined
        let m1 = GaussianRational::from_int(-1);
        assert!(!BaseField::Rationals.is_square(&m1));
        assert!(BaseField::GaussianRationals.is_square(&m1));
    }
}

/// Serde adapter writing a [`Rational`] as `"p/q"` (or `"p"`).
pub mod rational_str {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(r)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }

    pub mod option {
        use super::Rational;
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match r {
                Some(r) => s.collect_str(r),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|s| s.parse().map_err(serde::de::Error::custom))
                .transpose()
        }
    }
}
