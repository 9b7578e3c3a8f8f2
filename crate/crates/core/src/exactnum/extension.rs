use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{BaseField, GaussianRational};
use crate::error::{Error, Result};

/// `F(√a)` for a base field `F` and a non-square `a ∈ F`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadField {
    base: BaseField,
    radicand: GaussianRational,
}

impl QuadField {
    pub fn new(base: BaseField, radicand: GaussianRational) -> Result<Self> {
        base.check(&radicand)?;
        if radicand.is_zero() || base.is_square(&radicand) {
            return Err(Error::SquareRadicand {
                radicand: radicand.to_string(),
                field: base,
            });
        }
        Ok(QuadField { base, radicand })
    }

    pub fn base(&self) -> BaseField {
        self.base
    }

    pub fn radicand(&self) -> &GaussianRational {
        &self.radicand
    }

    pub fn elem(&self, x0: GaussianRational, x1: GaussianRational) -> QuadExtElem {
        QuadExtElem {
            radicand: self.radicand.clone(),
            x0,
            x1,
        }
    }

    pub fn from_base(&self, x0: GaussianRational) -> QuadExtElem {
        self.elem(x0, GaussianRational::zero())
    }

    pub fn sqrt_radicand(&self) -> QuadExtElem {
        self.elem(GaussianRational::zero(), GaussianRational::one())
    }
}

/// `x0 + x1·√a` in a quadratic extension.
///
/// Elements remember their radicand; mixing elements of different
/// extensions in one operation is a programming error and panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadExtElem {
    pub radicand: GaussianRational,
    pub x0: GaussianRational,
    pub x1: GaussianRational,
}

impl QuadExtElem {
    fn same_field(&self, other: &Self) {
        assert_eq!(
            self.radicand, other.radicand,
            "elements of different quadratic extensions"
        );
    }

    /// The non-trivial automorphism `√a ↦ −√a`.
    pub fn conj(&self) -> Self {
        QuadExtElem {
            radicand: self.radicand.clone(),
            x0: self.x0.clone(),
            x1: -&self.x1,
        }
    }

    /// Norm down to the base field: `x·σ(x) = x0² − a·x1²`.
    pub fn relative_norm(&self) -> GaussianRational {
        &(&self.x0 * &self.x0) - &(&self.radicand * &(&self.x1 * &self.x1))
    }

    pub fn is_zero(&self) -> bool {
        self.x0.is_zero() && self.x1.is_zero()
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        QuadExtElem {
            radicand: self.radicand.clone(),
            x0: c * &self.x0,
            x1: c * &self.x1,
        }
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.relative_norm();
        let ninv = n.inv()?;
        Some(self.conj().scale(&ninv))
    }

    /// Complex value using the supplied square root of the radicand.
    pub fn to_complex_with(&self, sqrt_a: Complex64) -> Complex64 {
        self.x0.to_complex() + self.x1.to_complex() * sqrt_a
    }

    /// Complex value using the principal branch of `√a`.
    pub fn to_complex(&self) -> Complex64 {
        self.to_complex_with(self.radicand.to_complex().sqrt())
    }
}

impl<'b> Add<&'b QuadExtElem> for &QuadExtElem {
    type Output = QuadExtElem;
    fn add(self, rhs: &'b QuadExtElem) -> QuadExtElem {
        self.same_field(rhs);
        QuadExtElem {
            radicand: self.radicand.clone(),
            x0: &self.x0 + &rhs.x0,
            x1: &self.x1 + &rhs.x1,
        }
    }
}

impl<'b> Sub<&'b QuadExtElem> for &QuadExtElem {
    type Output = QuadExtElem;
    fn sub(self, rhs: &'b QuadExtElem) -> QuadExtElem {
        self.same_field(rhs);
        QuadExtElem {
            radicand: self.radicand.clone(),
            x0: &self.x0 - &rhs.x0,
            x1: &self.x1 - &rhs.x1,
        }
    }
}

impl<'b> Mul<&'b QuadExtElem> for &QuadExtElem {
    type Output = QuadExtElem;
    fn mul(self, rhs: &'b QuadExtElem) -> QuadExtElem {
        self.same_field(rhs);
        let a = &self.radicand;
        QuadExtElem {
            radicand: a.clone(),
            x0: &(&self.x0 * &rhs.x0) + &(a * &(&self.x1 * &rhs.x1)),
            x1: &(&self.x0 * &rhs.x1) + &(&self.x1 * &rhs.x0),
        }
    }
}

impl Neg for &QuadExtElem {
    type Output = QuadExtElem;
    fn neg(self) -> QuadExtElem {
        QuadExtElem {
            radicand: self.radicand.clone(),
            x0: -&self.x0,
            x1: -&self.x1,
        }
    }
}

/// `c0 + (c1)*sqrt(r1) + …`, leaving out zero terms.
fn write_terms(f: &mut fmt::Formatter<'_>, terms: &[(&GaussianRational, Option<GaussianRational>)]) -> fmt::Result {
    let mut first = true;
    for (c, r) in terms {
        if c.is_zero() {
            continue;
        }
        if !first {
            f.write_str(" + ")?;
        }
        first = false;
        match r {
            None => write!(f, "{c}")?,
            Some(r) => write!(f, "({c})*sqrt({r})")?,
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

impl fmt::Display for QuadExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &[(&self.x0, None), (&self.x1, Some(self.radicand.clone()))])
    }
}

/// Elements of the Klein four-group `Gal(F(√a,√c)/F)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Galois {
    Id,
    /// negates √a
    Sigma,
    /// negates √c
    Tau,
    SigmaTau,
}

impl Galois {
    pub const ALL: [Galois; 4] = [Galois::Id, Galois::Sigma, Galois::Tau, Galois::SigmaTau];

    pub fn compose(self, other: Galois) -> Galois {
        let bits = |g: Galois| match g {
            Galois::Id => 0u8,
            Galois::Sigma => 1,
            Galois::Tau => 2,
            Galois::SigmaTau => 3,
        };
        match bits(self) ^ bits(other) {
            0 => Galois::Id,
            1 => Galois::Sigma,
            2 => Galois::Tau,
            _ => Galois::SigmaTau,
        }
    }

    /// Signs applied to the coordinates on `1, √a, √c, √(ac)`.
    fn signs(self) -> [bool; 4] {
        match self {
            Galois::Id => [false, false, false, false],
            Galois::Sigma => [false, true, false, true],
            Galois::Tau => [false, false, true, true],
            Galois::SigmaTau => [false, true, true, false],
        }
    }
}

/// `F(√a, √c)` with `a`, `c` and `ac` all non-squares in `F`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BiquadField {
    base: BaseField,
    a: GaussianRational,
    c: GaussianRational,
}

impl BiquadField {
    pub fn new(base: BaseField, a: GaussianRational, c: GaussianRational) -> Result<Self> {
        let ac = &a * &c;
        for r in [&a, &c, &ac] {
            base.check(r)?;
            if r.is_zero() || base.is_square(r) {
                return Err(Error::SquareRadicand {
                    radicand: r.to_string(),
                    field: base,
                });
            }
        }
        Ok(BiquadField { base, a, c })
    }

    pub fn base(&self) -> BaseField {
        self.base
    }

    pub fn a(&self) -> &GaussianRational {
        &self.a
    }

    pub fn c(&self) -> &GaussianRational {
        &self.c
    }

    pub fn elem(&self, z: [GaussianRational; 4]) -> BiquadExtElem {
        BiquadExtElem {
            a: self.a.clone(),
            c: self.c.clone(),
            z,
        }
    }

    pub fn zero(&self) -> BiquadExtElem {
        self.elem(Default::default())
    }

    pub fn from_base(&self, x: GaussianRational) -> BiquadExtElem {
        let mut z: [GaussianRational; 4] = Default::default();
        z[0] = x;
        self.elem(z)
    }

    /// Embeds `x0 + x1·√a`.
    pub fn embed_a(&self, x: &QuadExtElem) -> BiquadExtElem {
        assert_eq!(x.radicand, self.a, "element is not in F(√a)");
        self.elem([
            x.x0.clone(),
            x.x1.clone(),
            GaussianRational::zero(),
            GaussianRational::zero(),
        ])
    }

    /// Embeds `x0 + x1·√c`.
    pub fn embed_c(&self, x: &QuadExtElem) -> BiquadExtElem {
        assert_eq!(x.radicand, self.c, "element is not in F(√c)");
        self.elem([
            x.x0.clone(),
            GaussianRational::zero(),
            x.x1.clone(),
            GaussianRational::zero(),
        ])
    }
}

/// `z0 + z1·√a + z2·√c + z3·√(ac)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BiquadExtElem {
    pub a: GaussianRational,
    pub c: GaussianRational,
    pub z: [GaussianRational; 4],
}

impl BiquadExtElem {
    fn same_field(&self, other: &Self) {
        assert!(
            self.a == other.a && self.c == other.c,
            "elements of different biquadratic extensions"
        );
    }

    pub fn galois_apply(&self, g: Galois) -> Self {
        let signs = g.signs();
        let mut z = self.z.clone();
        for (zi, neg) in z.iter_mut().zip(signs) {
            if neg {
                *zi = -&*zi;
            }
        }
        BiquadExtElem {
            a: self.a.clone(),
            c: self.c.clone(),
            z,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.z.iter().all(|x| x.is_zero())
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        BiquadExtElem {
            a: self.a.clone(),
            c: self.c.clone(),
            z: [
                s * &self.z[0],
                s * &self.z[1],
                s * &self.z[2],
                s * &self.z[3],
            ],
        }
    }

    /// The product over the four conjugates, which lands in the base field.
    pub fn absolute_norm(&self) -> GaussianRational {
        let p = &(&self.galois_apply(Galois::Id) * &self.galois_apply(Galois::Sigma))
            * &(&self.galois_apply(Galois::Tau) * &self.galois_apply(Galois::SigmaTau));
        debug_assert!(p.z[1..].iter().all(|x| x.is_zero()));
        p.z[0].clone()
    }

    /// Complex value using the supplied roots `√a`, `√c`; `√(ac)` is taken
    /// as their product so the embedding is a ring homomorphism.
    pub fn to_complex_with(&self, sqrt_a: Complex64, sqrt_c: Complex64) -> Complex64 {
        self.z[0].to_complex()
            + self.z[1].to_complex() * sqrt_a
            + self.z[2].to_complex() * sqrt_c
            + self.z[3].to_complex() * sqrt_a * sqrt_c
    }

    pub fn to_complex(&self) -> Complex64 {
        self.to_complex_with(self.a.to_complex().sqrt(), self.c.to_complex().sqrt())
    }
}

impl<'b> Add<&'b BiquadExtElem> for &BiquadExtElem {
    type Output = BiquadExtElem;
    fn add(self, rhs: &'b BiquadExtElem) -> BiquadExtElem {
        self.same_field(rhs);
        BiquadExtElem {
            a: self.a.clone(),
            c: self.c.clone(),
            z: std::array::from_fn(|k| &self.z[k] + &rhs.z[k]),
        }
    }
}

impl<'b> Sub<&'b BiquadExtElem> for &BiquadExtElem {
    type Output = BiquadExtElem;
    fn sub(self, rhs: &'b BiquadExtElem) -> BiquadExtElem {
        self.same_field(rhs);
        BiquadExtElem {
            a: self.a.clone(),
            c: self.c.clone(),
            z: std::array::from_fn(|k| &self.z[k] - &rhs.z[k]),
        }
    }
}

impl Neg for &BiquadExtElem {
    type Output = BiquadExtElem;
    fn neg(self) -> BiquadExtElem {
        BiquadExtElem {
            a: self.a.clone(),
            c: self.c.clone(),
            z: std::array::from_fn(|k| -&self.z[k]),
        }
    }
}

impl<'b> Mul<&'b BiquadExtElem> for &BiquadExtElem {
    type Output = BiquadExtElem;
    fn mul(self, rhs: &'b BiquadExtElem) -> BiquadExtElem {
        self.same_field(rhs);
        let (a, c) = (&self.a, &self.c);
        let ac = a * c;
        let [p0, p1, p2, p3] = &self.z;
        let [q0, q1, q2, q3] = &rhs.z;
        // basis 1, √a, √c, √ac:
        // √a√a = a, √c√c = c, √ac√ac = ac, √a√c = √ac, √a√ac = a√c, √c√ac = c√a
        let z0 = &(&(p0 * q0) + &(a * &(p1 * q1))) + &(&(c * &(p2 * q2)) + &(&ac * &(p3 * q3)));
        let z1 = &(&(p0 * q1) + &(p1 * q0)) + &(c * &(&(p2 * q3) + &(p3 * q2)));
        let z2 = &(&(p0 * q2) + &(p2 * q0)) + &(a * &(&(p1 * q3) + &(p3 * q1)));
        let z3 = &(&(p0 * q3) + &(p3 * q0)) + &(&(p1 * q2) + &(p2 * q1));
        BiquadExtElem {
            a: a.clone(),
            c: c.clone(),
            z: [z0, z1, z2, z3],
        }
    }
}

impl fmt::Display for BiquadExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(
            f,
            &[
                (&self.z[0], None),
                (&self.z[1], Some(self.a.clone())),
                (&self.z[2], Some(self.c.clone())),
                (&self.z[3], Some(&self.a * &self.c)),
            ],
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational;
    use proptest::prelude::*;

    fn g(re: i64, im: i64) -> GaussianRational {
        GaussianRational::from_ints(re, im)
    }

    fn biquad() -> BiquadField {
        BiquadField::new(BaseField::GaussianRationals, g(1, 2), g(7, 0)).unwrap()
    }

    #[test]
    fn constructors_reject_squares() {
        assert!(QuadField::new(BaseField::GaussianRationals, g(-4, 0)).is_err());
        assert!(QuadField::new(BaseField::Rationals, g(-4, 0)).is_ok());
        assert!(QuadField::new(BaseField::Rationals, g(0, 1)).is_err());
        assert!(QuadField::new(BaseField::Rationals, g(0, 0)).is_err());
        assert!(BiquadField::new(BaseField::Rationals, g(2, 0), g(8, 0)).is_err());
        assert!(BiquadField::new(BaseField::Rationals, g(2, 0), g(3, 0)).is_ok());
    }

    #[test]
    fn galois_examples() {
        let k = biquad();
        let one_plus_sqrt_a = k.elem([g(1, 0), g(1, 0), g(0, 0), g(0, 0)]);
        assert_eq!(
            one_plus_sqrt_a.galois_apply(Galois::Sigma),
            k.elem([g(1, 0), g(-1, 0), g(0, 0), g(0, 0)])
        );
        let sqrt_a = k.elem([g(0, 0), g(1, 0), g(0, 0), g(0, 0)]);
        assert_eq!(sqrt_a.galois_apply(Galois::Tau), sqrt_a);
        let sqrt_ac = k.elem([g(0, 0), g(0, 0), g(0, 0), g(1, 0)]);
        assert_eq!(sqrt_ac.galois_apply(Galois::SigmaTau), sqrt_ac);
    }

    #[test]
    fn relative_norm_examples() {
        let k = QuadField::new(BaseField::Rationals, g(5, 0)).unwrap();
        assert_eq!(k.elem(g(1, 0), g(1, 0)).relative_norm(), g(-4, 0));
        assert_eq!(k.from_base(g(3, 0)).relative_norm(), g(9, 0));
        assert_eq!(k.sqrt_radicand().relative_norm(), g(-5, 0));
    }

    #[test]
    fn float_embedding_is_multiplicative() {
        let k = biquad();
        let x = k.elem([g(1, 1), g(0, 2), g(-1, 0), g(3, -1)]);
        let y = k.elem([g(2, 0), g(1, -1), g(0, 1), g(1, 1)]);
        let lhs = (&x * &y).to_complex();
        let rhs = x.to_complex() * y.to_complex();
        assert!((lhs - rhs).norm() < 1e-9 * rhs.norm());
    }

    fn arb_g() -> impl Strategy<Value = GaussianRational> {
        (-9i64..9, 1i64..5, -9i64..9, 1i64..5)
            .prop_map(|(a, b, c, d)| GaussianRational::new(rational(a, b), rational(c, d)))
    }

    fn arb_biquad() -> impl Strategy<Value = BiquadExtElem> {
        proptest::array::uniform4(arb_g()).prop_map(|z| biquad().elem(z))
    }

    fn arb_quad() -> impl Strategy<Value = QuadExtElem> {
        (arb_g(), arb_g()).prop_map(|(x0, x1)| {
            QuadField::new(BaseField::GaussianRationals, g(1, 2))
                .unwrap()
                .elem(x0, x1)
        })
    }

    proptest! {
        #[test]
        fn galois_actions_are_commuting_involutive_automorphisms(x in arb_biquad(), y in arb_biquad()) {
            for s in Galois::ALL {
                prop_assert_eq!(x.galois_apply(s).galois_apply(s), x.clone());
                prop_assert_eq!((&x + &y).galois_apply(s), &x.galois_apply(s) + &y.galois_apply(s));
                prop_assert_eq!((&x * &y).galois_apply(s), &x.galois_apply(s) * &y.galois_apply(s));
            }
            prop_assert_eq!(
                x.galois_apply(Galois::Sigma).galois_apply(Galois::Tau),
                x.galois_apply(Galois::Tau).galois_apply(Galois::Sigma)
            );
            prop_assert_eq!(
                x.galois_apply(Galois::Sigma).galois_apply(Galois::Tau),
                x.galois_apply(Galois::SigmaTau)
            );
        }

        #[test]
        fn biquad_mul_is_associative(x in arb_biquad(), y in arb_biquad(), z in arb_biquad()) {
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        }

        #[test]
        fn relative_norm_is_multiplicative(x in arb_quad(), y in arb_quad()) {
            prop_assert_eq!((&x * &y).relative_norm(), &x.relative_norm() * &y.relative_norm());
            if !x.is_zero() {
                let one = &x * &x.inv().unwrap();
                prop_assert_eq!(one.x0, GaussianRational::one());
                prop_assert!(one.x1.is_zero());
            }
        }
    }
}
