//! Discrete valuations on ℚ and ℚ(i), reduction to residue fields, and the
//! formal `x`/`y` levels used when an iterated Laurent-series valuation is
//! applied symbolically.

mod gaussian_prime;

pub use gaussian_prime::{factor_prime_in_zi, has_norm, sum_of_two_squares, GaussianPrime, PrimeKind};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};
use crate::exactnum::{BaseField, GaussianRational, Rational};
use crate::ffield::{FiniteField, FqElem};

/// A value of a discrete valuation: an integer, or `∞` for zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(i64),
    Infinite,
}

impl Order {
    /// Panics on `∞`; callers use it after ruling out zero.
    pub fn finite(self) -> i64 {
        match self {
            Order::Finite(v) => v,
            Order::Infinite => panic!("valuation of zero is infinite"),
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Order::Infinite
    }
}

impl std::ops::Add for Order {
    type Output = Order;
    fn add(self, rhs: Order) -> Order {
        match (self, rhs) {
            (Order::Finite(a), Order::Finite(b)) => Order::Finite(a + b),
            _ => Order::Infinite,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(v) => write!(f, "{v}"),
            Order::Infinite => f.write_str("inf"),
        }
    }
}

/// Deterministic Miller–Rabin for `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in SMALL {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// `v_p` of an integer (no primality check).
pub(crate) fn v_integer(n: &BigInt, p: &BigInt) -> Order {
    if n.is_zero() {
        return Order::Infinite;
    }
    let mut n = n.clone();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return Order::Finite(k);
        }
        n = q;
        k += 1;
    }
}

/// The `p`-adic valuation on ℚ.
pub fn vp(x: &Rational, p: u64) -> Result<Order> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if x.is_zero() {
        return Ok(Order::Infinite);
    }
    let pb = BigInt::from(p);
    Ok(Order::Finite(
        v_integer(x.numer(), &pb).finite() - v_integer(x.denom(), &pb).finite(),
    ))
}

/// A prime of ℤ (valuation on ℚ) or of ℤ[i] (valuation on ℚ(i)).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Prime {
    Rational(u64),
    Gaussian(GaussianPrime),
}

impl Prime {
    pub fn rational(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Prime::Rational(p))
    }

    pub fn gaussian(generator: &GaussianRational) -> Result<Self> {
        GaussianPrime::from_generator(generator).map(Prime::Gaussian)
    }

    /// Parses `3`, `(3)` over ℚ, or a Gaussian generator like `1+2i`, `(7)` over ℚ(i).
    pub fn parse(s: &str, base: BaseField) -> Result<Self> {
        let t = s.trim().trim_start_matches('(');
        let t = t.split(')').next().unwrap_or("").trim();
        let z: GaussianRational = t.parse()?;
        match base {
            BaseField::Rationals => {
                if !z.is_real() || !z.re.is_integer() {
                    return Err(Error::Parse(format!("{s:?} is not a rational prime")));
                }
                let p = u64::try_from(z.re.to_integer().magnitude().clone())
                    .map_err(|_| Error::Parse(format!("{s:?} is too large")))?;
                Prime::rational(p)
            }
            BaseField::GaussianRationals => Prime::gaussian(&z),
        }
    }

    pub fn base_field(&self) -> BaseField {
        match self {
            Prime::Rational(_) => BaseField::Rationals,
            Prime::Gaussian(_) => BaseField::GaussianRationals,
        }
    }

    pub fn residue_field(&self) -> FiniteField {
        match self {
            Prime::Rational(p) => FiniteField::prime_field(*p).expect("validated prime"),
            Prime::Gaussian(g) => g.residue_field(),
        }
    }

    pub fn is_dyadic(&self) -> bool {
        self.residue_field().is_dyadic()
    }

    /// The canonical uniformizer: `p`, or the normalized Gaussian generator.
    pub fn uniformizer(&self) -> GaussianRational {
        match self {
            Prime::Rational(p) => GaussianRational::from_int(*p as i64),
            Prime::Gaussian(g) => g.generator(),
        }
    }

    pub fn valuation(&self, z: &GaussianRational) -> Result<Order> {
        match self {
            Prime::Rational(p) => {
                self.base_field().check(z)?;
                vp(&z.re, *p)
            }
            Prime::Gaussian(g) => Ok(g.valuation(z)),
        }
    }

    pub fn reduce(&self, z: &GaussianRational) -> Result<FqElem> {
        match self {
            Prime::Rational(p) => {
                self.base_field().check(z)?;
                match vp(&z.re, *p)? {
                    Order::Infinite => Ok(FqElem::ZERO),
                    Order::Finite(v) if v < 0 => Err(Error::NegativeValuation {
                        value: z.to_string(),
                        prime: self.to_string(),
                    }),
                    _ => {
                        let ff = self.residue_field();
                        let pb = BigInt::from(*p);
                        let k = v_integer(z.re.denom(), &pb).finite() as u32;
                        let num = z.re.numer() / pb.pow(k);
                        let den = z.re.denom() / pb.pow(k);
                        let dinv = ff.inv(ff.from_bigint(&den)).expect("unit denominator");
                        Ok(ff.mul(ff.from_bigint(&num), dinv))
                    }
                }
            }
            Prime::Gaussian(g) => g.reduce(z),
        }
    }

    /// Whether a unit `b` at this prime reduces to a non-square.
    pub fn is_nonsquare_mod(&self, b: &GaussianRational) -> Result<bool> {
        if self.valuation(b)? != Order::Finite(0) {
            return Err(Error::NotAUnit {
                value: b.to_string(),
                prime: self.to_string(),
            });
        }
        let r = self.reduce(b)?;
        Ok(!self.residue_field().is_square(r))
    }

    /// `(q − 1)/2` non-square classes in the residue field's unit group.
    pub fn count_nonsquare_classes(&self) -> Result<u64> {
        if self.is_dyadic() {
            return Err(Error::Dyadic(self.to_string()));
        }
        Ok((self.residue_field().order() - 1) / 2)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prime::Rational(2) => f.write_str("(2)[dyadic]"),
            Prime::Rational(p) => write!(f, "({p})"),
            Prime::Gaussian(g) => g.fmt(f),
        }
    }
}

/// A formal transcendental used as a valuation level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    X,
    Y,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Var::X => "x",
            Var::Y => "y",
        })
    }
}

/// One level of a valuation tower.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Level {
    /// `v_var` on `L(var)`: the valuation of an entry is its degree in `var`
    /// and the residue field is `L`.
    Formal(Var),
    /// A prime of the number-field base.
    Prime(Prime),
}

/// An ordered tower of valuations, outermost first.
///
/// `[Formal(Y), Formal(X)]` models `F(x,y) ⊂ F((x))((y))`: first `v_y`,
/// whose residue field is `F((x))`, then `v_x` on that, with residue `F`.
/// A final prime level continues down to a finite field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Valuation {
    base: BaseField,
    tower: Vec<Level>,
}

impl Valuation {
    pub fn new(base: BaseField, tower: Vec<Level>) -> Result<Self> {
        let mut seen_prime = false;
        let mut vars = Vec::new();
        for level in &tower {
            match level {
                Level::Formal(v) => {
                    if seen_prime {
                        return Err(Error::InvalidConfig(
                            "formal levels must sit above the number-field level".into(),
                        ));
                    }
                    if vars.contains(v) {
                        return Err(Error::InvalidConfig(format!("variable {v} repeated")));
                    }
                    vars.push(*v);
                }
                Level::Prime(p) => {
                    if seen_prime {
                        return Err(Error::InvalidConfig("at most one prime level".into()));
                    }
                    if p.base_field() != base {
                        return Err(Error::InvalidConfig(format!(
                            "prime {p} does not live over {base}"
                        )));
                    }
                    seen_prime = true;
                }
            }
        }
        Ok(Valuation { base, tower })
    }

    pub fn at_prime(p: Prime) -> Self {
        Valuation {
            base: p.base_field(),
            tower: vec![Level::Prime(p)],
        }
    }

    pub fn base(&self) -> BaseField {
        self.base
    }

    pub fn levels(&self) -> &[Level] {
        &self.tower
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .tower
            .iter()
            .map(|l| match l {
                Level::Formal(v) => format!("v_{v}"),
                Level::Prime(p) => format!("v_{p}"),
            })
            .collect();
        f.write_str(&parts.join(" > "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational;

    #[test]
    fn vp_examples() {
        assert_eq!(vp(&rational(18, 1), 3).unwrap(), Order::Finite(2));
        assert_eq!(vp(&rational(1, 3), 3).unwrap(), Order::Finite(-1));
        assert_eq!(vp(&rational(0, 1), 3).unwrap(), Order::Infinite);
        assert!(matches!(vp(&rational(5, 1), 9), Err(Error::NotPrime(9))));
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            small,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to 2,3,5,7
    }

    #[test]
    fn nonsquare_examples() {
        let three = Prime::rational(3).unwrap();
        assert!(three.is_nonsquare_mod(&GaussianRational::from_int(-1)).unwrap());
        assert_eq!(three.count_nonsquare_classes().unwrap(), 1);

        let p = Prime::gaussian(&GaussianRational::from_ints(1, 2)).unwrap();
        assert!(p.is_nonsquare_mod(&GaussianRational::i()).unwrap());
        assert!(!p.is_nonsquare_mod(&GaussianRational::from_int(-1)).unwrap());
        assert_eq!(p.count_nonsquare_classes().unwrap(), 2);
        let q = Prime::gaussian(&GaussianRational::from_ints(1, -2)).unwrap();
        assert!(q.is_nonsquare_mod(&GaussianRational::i()).unwrap());

        let seven = Prime::gaussian(&GaussianRational::from_int(7)).unwrap();
        assert_eq!(seven.count_nonsquare_classes().unwrap(), 24);
        assert!(matches!(
            three.is_nonsquare_mod(&GaussianRational::from_int(6)),
            Err(Error::NotAUnit { .. })
        ));
        let two = Prime::gaussian(&GaussianRational::from_ints(1, 1)).unwrap();
        assert!(matches!(two.count_nonsquare_classes(), Err(Error::Dyadic(_))));
    }

    #[test]
    fn rational_reduction() {
        let five = Prime::rational(5).unwrap();
        let ff = five.residue_field();
        assert_eq!(five.reduce(&GaussianRational::from_int(-1)).unwrap(), ff.from_u64(4));
        // 10/15 = 2/3 ≡ 2·2 = 4 mod 5
        let z = GaussianRational::from_rational(rational(10, 15));
        assert_eq!(five.reduce(&z).unwrap(), ff.from_u64(4));
        assert!(five.reduce(&GaussianRational::i()).is_err());
    }

    #[test]
    fn prime_parsing() {
        assert_eq!(Prime::parse("3", BaseField::Rationals).unwrap(), Prime::Rational(3));
        assert_eq!(
            Prime::parse("(1+2i)", BaseField::GaussianRationals).unwrap().to_string(),
            "(1+2i)"
        );
        assert_eq!(
            Prime::parse("(7)", BaseField::GaussianRationals).unwrap().to_string(),
            "(7)"
        );
        assert!(Prime::parse("4", BaseField::Rationals).is_err());
    }

    #[test]
    fn towers_validate_order() {
        let p = Prime::rational(3).unwrap();
        assert!(Valuation::new(
            BaseField::Rationals,
            vec![Level::Formal(Var::Y), Level::Formal(Var::X), Level::Prime(p.clone())]
        )
        .is_ok());
        assert!(Valuation::new(
            BaseField::Rationals,
            vec![Level::Prime(p.clone()), Level::Formal(Var::X)]
        )
        .is_err());
        assert!(Valuation::new(BaseField::GaussianRationals, vec![Level::Prime(p)]).is_err());
    }
}
