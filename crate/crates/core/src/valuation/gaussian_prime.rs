use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

use super::{is_prime, v_integer, Order};
use crate::error::{Error, Result};
use crate::exactnum::GaussianRational;
use crate::ffield::{FiniteField, FqElem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrimeKind {
    /// `p ≡ 1 mod 4`, `p = π·π̄`
    Split,
    /// `p ≡ 3 mod 4` stays prime
    Inert,
    /// `2 = −i(1+i)²`
    Ramified,
}

/// A prime ideal of ℤ[i], with a normalized generator.
///
/// Split generators `x + iy` are kept in the open first quadrant; the one
/// with odd real part is listed first by [`factor_prime_in_zi`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussianPrime {
    kind: PrimeKind,
    gen: (i64, i64),
    p: u64,
    residue: FiniteField,
    /// image of `i` in the residue field
    i_image: FqElem,
}

impl GaussianPrime {
    fn split(x: i64, y: i64, p: u64) -> Self {
        let residue = FiniteField::prime_field(p).expect("p prime");
        // x + iy ≡ 0 forces i ≡ −x·y⁻¹
        let yinv = residue.inv(residue.from_u64(y as u64)).expect("y is a unit");
        let i_image = residue.neg(residue.mul(residue.from_u64(x as u64), yinv));
        GaussianPrime {
            kind: PrimeKind::Split,
            gen: (x, y),
            p,
            residue,
            i_image,
        }
    }

    fn inert(p: u64) -> Self {
        let residue = FiniteField::quadratic(p).expect("p = 3 mod 4");
        GaussianPrime {
            kind: PrimeKind::Inert,
            gen: (p as i64, 0),
            p,
            residue,
            i_image: residue.t(),
        }
    }

    fn ramified() -> Self {
        let residue = FiniteField::prime_field(2).expect("2 is prime");
        GaussianPrime {
            kind: PrimeKind::Ramified,
            gen: (1, 1),
            p: 2,
            residue,
            i_image: FqElem::ONE,
        }
    }

    /// The prime ideal generated by a Gaussian integer, if it is prime.
    pub fn from_generator(z: &GaussianRational) -> Result<Self> {
        let not_prime = || Error::Parse(format!("{z} does not generate a prime ideal of Z[i]"));
        if !z.is_gaussian_integer() || z.is_zero() {
            return Err(not_prime());
        }
        let a = z.re.to_integer().to_i64().ok_or_else(not_prime)?;
        let b = z.im.to_integer().to_i64().ok_or_else(not_prime)?;
        let n = (a as i128 * a as i128 + b as i128 * b as i128) as u64;
        if is_prime(n) {
            if n == 2 {
                return Ok(Self::ramified());
            }
            let (x, y) = first_quadrant(a, b);
            return Ok(Self::split(x, y, n));
        }
        // inert primes are associates of a rational prime p ≡ 3 mod 4
        let p = (a.abs() + b.abs()) as u64;
        if (a == 0 || b == 0) && p % 4 == 3 && is_prime(p) {
            return Ok(Self::inert(p));
        }
        Err(not_prime())
    }

    pub fn kind(&self) -> PrimeKind {
        self.kind
    }

    pub fn generator(&self) -> GaussianRational {
        GaussianRational::from_ints(self.gen.0, self.gen.1)
    }

    /// The rational prime below.
    pub fn rational_prime(&self) -> u64 {
        self.p
    }

    /// Absolute norm `|ℤ[i]/𝔭|`.
    pub fn norm(&self) -> u64 {
        self.residue.order()
    }

    pub fn ramification(&self) -> u32 {
        match self.kind {
            PrimeKind::Ramified => 2,
            _ => 1,
        }
    }

    pub fn inertial_degree(&self) -> u32 {
        self.residue.degree() as u32
    }

    pub fn residue_field(&self) -> FiniteField {
        self.residue
    }

    pub fn is_dyadic(&self) -> bool {
        self.kind == PrimeKind::Ramified
    }

    /// Image of `i` under reduction.
    pub fn i_image(&self) -> FqElem {
        self.i_image
    }

    /// Valuation of the Gaussian integer `a + b·i`.
    fn v_gaussian_integer(&self, a: &BigInt, b: &BigInt) -> Order {
        if a.is_zero() && b.is_zero() {
            return Order::Infinite;
        }
        match self.kind {
            PrimeKind::Inert => {
                let p = BigInt::from(self.p);
                let va = v_integer(a, &p);
                let vb = v_integer(b, &p);
                va.min(vb)
            }
            PrimeKind::Split => {
                let (mut a, mut b) = (a.clone(), b.clone());
                let mut k = 0;
                while let Some((q0, q1)) = self.divide_once(&a, &b) {
                    a = q0;
                    b = q1;
                    k += 1;
                }
                Order::Finite(k)
            }
            PrimeKind::Ramified => {
                let (mut a, mut b) = (a.clone(), b.clone());
                let mut k = 0;
                // (a+bi)/(1+i) = ((a+b) + (b−a)i)/2
                while (&a + &b).is_even() {
                    let na = (&a + &b) / 2;
                    let nb = (&b - &a) / 2;
                    a = na;
                    b = nb;
                    k += 1;
                }
                Order::Finite(k)
            }
        }
    }

    /// Divides `a + b·i` by the generator when the quotient is integral.
    fn divide_once(&self, a: &BigInt, b: &BigInt) -> Option<(BigInt, BigInt)> {
        let (x, y) = (BigInt::from(self.gen.0), BigInt::from(self.gen.1));
        let n = &x * &x + &y * &y;
        // (a+bi)(x−iy) = (ax+by) + (bx−ay)i
        let re = a * &x + b * &y;
        let im = b * &x - a * &y;
        if re.is_multiple_of(&n) && im.is_multiple_of(&n) {
            Some((re / &n, im / n))
        } else {
            None
        }
    }

    /// `v_𝔭` on ℚ(i), via `v(x/y) = v(x) − v(y)`.
    pub fn valuation(&self, z: &GaussianRational) -> Order {
        if z.is_zero() {
            return Order::Infinite;
        }
        let (a, b, d) = z.integer_parts();
        let num = self.v_gaussian_integer(&a, &b).finite();
        let den = v_integer(&d, &BigInt::from(self.p)).finite() * self.ramification() as i64;
        Order::Finite(num - den)
    }

    fn reduce_gaussian_integer(&self, a: &BigInt, b: &BigInt) -> FqElem {
        let ff = &self.residue;
        let ra = ff.from_bigint(a);
        let rb = ff.from_bigint(b);
        ff.add(ra, ff.mul(rb, self.i_image))
    }

    /// Reduction of a 𝔭-adic integer of ℚ(i) into `ℤ[i]/𝔭`.
    pub fn reduce(&self, z: &GaussianRational) -> Result<FqElem> {
        match self.valuation(z) {
            Order::Infinite => return Ok(FqElem::ZERO),
            Order::Finite(v) if v < 0 => {
                return Err(Error::NegativeValuation {
                    value: z.to_string(),
                    prime: self.to_string(),
                })
            }
            _ => {}
        }
        let ff = self.residue;
        let (mut a, mut b, d) = z.integer_parts();
        let pb = BigInt::from(self.p);
        let k = v_integer(&d, &pb).finite() as u32;
        let d_rest = &d / pb.pow(k);
        let d_rest_inv = ff.inv(ff.from_bigint(&d_rest)).expect("unit");
        match self.kind {
            PrimeKind::Inert => {
                let pk = pb.pow(k);
                a /= &pk;
                b /= &pk;
                Ok(ff.mul(self.reduce_gaussian_integer(&a, &b), d_rest_inv))
            }
            PrimeKind::Split => {
                // p^k = π^k·π̄^k; π^k divides the numerator, π̄ is a unit mod 𝔭
                for _ in 0..k {
                    let (q0, q1) = self.divide_once(&a, &b).expect("valuation is non-negative");
                    a = q0;
                    b = q1;
                }
                let conj = self.reduce_gaussian_integer(
                    &BigInt::from(self.gen.0),
                    &BigInt::from(-self.gen.1),
                );
                let conj_inv = ff.inv(ff.pow(conj, k as u64)).expect("conjugate prime is a unit");
                let num = self.reduce_gaussian_integer(&a, &b);
                Ok(ff.mul(ff.mul(num, conj_inv), d_rest_inv))
            }
            PrimeKind::Ramified => {
                // 2^k = (−i)^k (1+i)^{2k}; every unit reduces to 1 mod (1+i)
                for _ in 0..2 * k {
                    let na = (&a + &b) / 2;
                    let nb = (&b - &a) / 2;
                    a = na;
                    b = nb;
                }
                Ok(self.reduce_gaussian_integer(&a, &b))
            }
        }
    }
}

impl fmt::Display for GaussianPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            PrimeKind::Ramified => write!(f, "({})[dyadic]", self.generator()),
            _ => write!(f, "({})", self.generator()),
        }
    }
}

/// The associate of `a + b·i` with positive real part and non-negative
/// imaginary part.
fn first_quadrant(a: i64, b: i64) -> (i64, i64) {
    let (mut x, mut y) = (a, b);
    for _ in 0..4 {
        if x > 0 && y >= 0 {
            return (x, y);
        }
        // multiply by i
        let nx = -y;
        y = x;
        x = nx;
    }
    unreachable!("nonzero Gaussian integer has a first-quadrant associate")
}

/// Writes a prime `p ≡ 1 mod 4` as `x² + y²` with `x` odd, by direct search.
pub fn sum_of_two_squares(p: u64) -> Option<(u64, u64)> {
    let mut x = 1u64;
    while x * x < p {
        let rest = p - x * x;
        let y = rest.isqrt();
        if y * y == rest && y > 0 {
            return Some(if x % 2 == 1 { (x, y) } else { (y, x) });
        }
        x += 1;
    }
    None
}

/// Prime ideals of ℤ[i] above the rational prime `p`.
///
/// `p ≡ 1 mod 4` gives the two split primes `(x+iy)` and `(y+ix)` (the
/// first-quadrant associate of `x − iy`); `p ≡ 3 mod 4` gives the inert
/// prime `(p)`; `p = 2` gives the ramified prime `(1+i)`, which is dyadic.
pub fn factor_prime_in_zi(p: u64) -> Result<Vec<GaussianPrime>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return Ok(vec![GaussianPrime::ramified()]);
    }
    if p % 4 == 3 {
        return Ok(vec![GaussianPrime::inert(p)]);
    }
    let (x, y) = sum_of_two_squares(p).expect("p = 1 mod 4 is a sum of two squares");
    Ok(vec![
        GaussianPrime::split(x as i64, y as i64, p),
        GaussianPrime::split(y as i64, x as i64, p),
    ])
}

/// Whether `z` is a Gaussian integer of norm exactly `n`.
pub fn has_norm(z: &GaussianRational, n: u64) -> bool {
    z.is_gaussian_integer() && z.norm() == num_rational::BigRational::from_integer(n.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re: i64, im: i64) -> GaussianRational {
        GaussianRational::from_ints(re, im)
    }

    #[test]
    fn factorization_examples() {
        let five = factor_prime_in_zi(5).unwrap();
        assert_eq!(five.len(), 2);
        assert_eq!(five[0].generator(), g(1, 2));
        // 2 + i = i(1 − 2i)
        assert_eq!(five[1].generator(), g(2, 1));
        let seven = factor_prime_in_zi(7).unwrap();
        assert_eq!(seven.len(), 1);
        assert_eq!(seven[0].kind(), PrimeKind::Inert);
        assert_eq!(seven[0].norm(), 49);
        let thirteen = factor_prime_in_zi(13).unwrap();
        assert_eq!(thirteen[0].generator(), g(3, 2));
        assert_eq!(thirteen[1].generator(), g(2, 3));
        let two = factor_prime_in_zi(2).unwrap();
        assert!(two[0].is_dyadic());
        assert_eq!(two[0].to_string(), "(1+i)[dyadic]");
        assert!(matches!(factor_prime_in_zi(15), Err(Error::NotPrime(15))));
    }

    #[test]
    fn valuation_examples() {
        let p = GaussianPrime::from_generator(&g(1, 2)).unwrap();
        assert_eq!(p.valuation(&g(5, 0)), Order::Finite(1));
        assert_eq!(p.valuation(&g(1, -2)), Order::Finite(0));
        let seven = GaussianPrime::from_generator(&g(7, 0)).unwrap();
        assert_eq!(seven.valuation(&g(0, 7)), Order::Finite(1));
        assert_eq!(seven.valuation(&g(0, 0)), Order::Infinite);
        let two = GaussianPrime::from_generator(&g(1, 1)).unwrap();
        assert_eq!(two.valuation(&g(2, 0)), Order::Finite(2));
        assert_eq!(
            two.valuation(&GaussianRational::from_rational(crate::exactnum::rational(1, 2))),
            Order::Finite(-2)
        );
    }

    #[test]
    fn generators_normalize_to_the_same_prime() {
        for z in [g(1, 2), g(-2, 1), g(-1, -2), g(2, -1)] {
            assert_eq!(GaussianPrime::from_generator(&z).unwrap().generator(), g(1, 2));
        }
        assert_eq!(
            GaussianPrime::from_generator(&g(0, -7)).unwrap().kind(),
            PrimeKind::Inert
        );
        assert!(GaussianPrime::from_generator(&g(5, 0)).is_err());
        assert!(GaussianPrime::from_generator(&g(3, 3)).is_err());
    }

    #[test]
    fn reduction_examples() {
        let p = GaussianPrime::from_generator(&g(1, 2)).unwrap();
        let ff = p.residue_field();
        // 1 + 2i ≡ 0 gives i ≡ −2⁻¹ = −3 ≡ 2 mod 5
        let i_img = p.reduce(&GaussianRational::i()).unwrap();
        assert_eq!(i_img, ff.from_u64(2));
        assert_eq!(ff.mul(i_img, i_img), ff.neg(FqElem::ONE));
        assert_eq!(p.reduce(&g(1, 2)).unwrap(), FqElem::ZERO);
        assert_eq!(p.reduce(&g(-1, 0)).unwrap(), ff.from_u64(4));

        let seven = GaussianPrime::from_generator(&g(7, 0)).unwrap();
        let ff7 = seven.residue_field();
        assert_eq!(seven.reduce(&g(7, 1)).unwrap(), ff7.t());
        assert!(seven.reduce(&GaussianRational::from_rational(crate::exactnum::rational(1, 7))).is_err());
    }

    #[test]
    fn reduction_through_denominators() {
        // (1+2i)/5 = 1/(1−2i): a unit at (1+2i) with p in the denominator
        let p = GaussianPrime::from_generator(&g(1, 2)).unwrap();
        let ff = p.residue_field();
        let z = &g(1, 0) / &g(1, -2);
        let r = p.reduce(&z).unwrap();
        let back = p.reduce(&g(1, -2)).unwrap();
        assert_eq!(ff.mul(r, back), FqElem::ONE);
    }
}
