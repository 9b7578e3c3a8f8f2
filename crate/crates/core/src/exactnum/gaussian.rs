use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use super::{rational_to_f64, sqrt_rational, Rational};
use crate::error::Error;

/// An exact element `re + im·i` of ℚ(i).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_rational(re: Rational) -> Self {
        GaussianRational {
            re,
            im: Rational::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_ints(n, 0)
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussianRational {
            re: Rational::from_integer(re.into()),
            im: Rational::from_integer(im.into()),
        }
    }

    pub fn from_bigints(re: BigInt, im: BigInt) -> Self {
        GaussianRational {
            re: Rational::from_integer(re),
            im: Rational::from_integer(im),
        }
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_gaussian_integer(&self) -> bool {
        self.re.is_integer() && self.im.is_integer()
    }

    pub fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    /// Field norm to ℚ: `re² + im²`.
    pub fn norm(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(GaussianRational {
            re: &self.re / &n,
            im: -&self.im / &n,
        })
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Writes `self = (a + b·i) / d` with integers `a, b` and `d > 0` minimal.
    pub fn integer_parts(&self) -> (BigInt, BigInt, BigInt) {
        let d = self.re.denom().lcm(self.im.denom());
        let a = self.re.numer() * (&d / self.re.denom());
        let b = self.im.numer() * (&d / self.im.denom());
        (a, b, d)
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    /// The unit of ℤ[i] given by `i^k`.
    pub fn unit(k: u32) -> Self {
        match k % 4 {
            0 => Self::from_int(1),
            1 => Self::from_ints(0, 1),
            2 => Self::from_int(-1),
            _ => Self::from_ints(0, -1),
        }
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self::default()
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::from_int(1)
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<Rational> for GaussianRational {
    fn from(r: Rational) -> Self {
        Self::from_rational(r)
    }
}

/// Square root in ℚ(i), if one exists.
///
/// For `z = u + v·i` with a root `x + y·i` we need `x² − y² = u`, `2xy = v`
/// and `x² + y² = n` where `n² = u² + v²`. So `N(z)` must be a rational
/// square and `x² = (u + n)/2` must be one too.
pub fn sqrt_gaussian(z: &GaussianRational) -> Option<GaussianRational> {
    if z.is_zero() {
        return Some(GaussianRational::zero());
    }
    if z.im.is_zero() {
        if let Some(s) = sqrt_rational(&z.re) {
            return Some(GaussianRational::from_rational(s));
        }
        // negative reals: z = (s·i)² with s² = −u
        return sqrt_rational(&-&z.re).map(|s| GaussianRational::new(Rational::zero(), s));
    }
    let n = sqrt_rational(&z.norm())?;
    let two = Rational::from_integer(2.into());
    let x = sqrt_rational(&((&z.re + &n) / &two))?;
    // v ≠ 0 forces x ≠ 0
    let y = &z.im / (&two * &x);
    let w = GaussianRational::new(x, y);
    debug_assert_eq!(&(&w * &w), z);
    Some(w)
}

pub fn is_square_gaussian(z: &GaussianRational) -> bool {
    sqrt_gaussian(z).is_some()
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, rhs: &'a GaussianRational) -> GaussianRational {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<GaussianRational> for &'a GaussianRational {
            type Output = GaussianRational;
            fn $m(self, rhs: GaussianRational) -> GaussianRational {
                self.$m(&rhs)
            }
        }
    };
}

impl<'b> Add<&'b GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &'b GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'b> Sub<&'b GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &'b GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'b> Mul<&'b GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &'b GaussianRational) -> GaussianRational {
        GaussianRational::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl<'b> Div<&'b GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    /// Panics on division by zero, like the rational division it wraps.
    fn div(self, rhs: &'b GaussianRational) -> GaussianRational {
        self * &rhs.inv().expect("division by zero in Q(i)")
    }
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re, -self.im)
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-&self.re, -&self.im)
    }
}

impl<'a> std::iter::Sum<&'a GaussianRational> for GaussianRational {
    fn sum<I: Iterator<Item = &'a GaussianRational>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, x| &acc + x)
    }
}

impl std::iter::Sum for GaussianRational {
    fn sum<I: Iterator<Item = GaussianRational>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, x| &acc + &x)
    }
}

fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Compact rendering: `3`, `-i`, `1+2i`, `1/2-(3/4)i`.
impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return f.write_str(&fmt_rational(&self.re));
        }
        let mut out = String::new();
        if !self.re.is_zero() {
            out.push_str(&fmt_rational(&self.re));
            if self.im.is_positive() {
                out.push('+');
            }
        }
        let mag = self.im.abs();
        if self.im.is_negative() {
            out.push('-');
        }
        if mag.is_one() {
            out.push('i');
        } else if mag.is_integer() {
            out.push_str(&format!("{}i", mag.numer()));
        } else {
            out.push_str(&format!("({})i", fmt_rational(&mag)));
        }
        f.write_str(&out)
    }
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        std::str::from_utf8(&self.s[start..self.pos]).ok()?.parse().ok()
    }

    fn rational(&mut self) -> Option<Rational> {
        let n = self.integer()?;
        if self.eat(b'/') {
            let d = self.integer()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        } else {
            Some(Rational::from_integer(n))
        }
    }
}

impl FromStr for GaussianRational {
    type Err = Error;

    /// Accepts sums of terms like `1`, `-3/4`, `2i`, `2*i`, `(3/4)i`, `i`;
    /// whitespace is ignored.
    fn from_str(s: &str) -> Result<Self, Error> {
        let err = || Error::Parse(format!("not an element of Q(i): {s:?}"));
        // whitespace may separate terms but never split a number
        let split_number = s
            .split_whitespace()
            .collect::<Vec<_>>()
            .windows(2)
            .any(|w| w[0].ends_with(|c: char| c.is_ascii_alphanumeric()) && w[1].starts_with(|c: char| c.is_ascii_alphanumeric()));
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() || split_number {
            return Err(err());
        }
        let mut cur = Cursor {
            s: cleaned.as_bytes(),
            pos: 0,
        };
        let mut acc = GaussianRational::zero();
        let mut first = true;
        while cur.peek().is_some() {
            let negative = if cur.eat(b'-') {
                true
            } else {
                if !cur.eat(b'+') && !first {
                    return Err(err());
                }
                false
            };
            first = false;
            let (coeff, imaginary) = if cur.eat(b'(') {
                let r = cur.rational().ok_or_else(err)?;
                if !cur.eat(b')') {
                    return Err(err());
                }
                cur.eat(b'*');
                if !cur.eat(b'i') {
                    return Err(err());
                }
                (r, true)
            } else if cur.eat(b'i') {
                (Rational::one(), true)
            } else {
                let r = cur.rational().ok_or_else(err)?;
                let imag = if cur.eat(b'*') {
                    if !cur.eat(b'i') {
                        return Err(err());
                    }
                    true
                } else {
                    cur.eat(b'i')
                };
                (r, imag)
            };
            let coeff = if negative { -coeff } else { coeff };
            if imaginary {
                acc.im += coeff;
            } else {
                acc.re += coeff;
            }
        }
        Ok(acc)
    }
}

impl serde::Serialize for GaussianRational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for GaussianRational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
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

    #[test]
    fn square_examples() {
        // N(i) = 1 is a square but (0+1)/2 is not
        assert!(!is_square_gaussian(&GaussianRational::i()));
        assert_eq!(sqrt_gaussian(&g(-4, 0)).map(|w| &w * &w), Some(g(-4, 0)));
        assert!(is_square_gaussian(&g(0, 2)));
        assert!(!is_square_gaussian(&g(1, 2)));
        assert!(!is_square_gaussian(&g(7, 0)));
        assert!(!is_square_gaussian(&(&g(7, 0) * &g(1, 2))));
        assert!(is_square_gaussian(&g(-3, 4))); // (1+2i)²
    }

    #[test]
    fn display_and_parse() {
        for (z, s) in [
            (g(1, 2), "1+2i"),
            (g(0, -1), "-i"),
            (g(3, 0), "3"),
            (g(2, -3), "2-3i"),
            (
                GaussianRational::new(rational(1, 2), rational(-3, 4)),
                "1/2-(3/4)i",
            ),
        ] {
            assert_eq!(z.to_string(), s);
            assert_eq!(s.parse::<GaussianRational>().unwrap(), z);
        }
        assert_eq!("2*i + 1".parse::<GaussianRational>().unwrap(), g(1, 2));
        assert_eq!("-1".parse::<GaussianRational>().unwrap(), g(-1, 0));
        assert!("".parse::<GaussianRational>().is_err());
        assert!("1/0".parse::<GaussianRational>().is_err());
        assert!("x".parse::<GaussianRational>().is_err());
        assert!("1 2".parse::<GaussianRational>().is_err());
    }

    #[test]
    fn integer_parts_clears_denominators() {
        let z = GaussianRational::new(rational(1, 2), rational(1, 3));
        let (a, b, d) = z.integer_parts();
        assert_eq!((a, b, d), (3.into(), 2.into(), 6.into()));
    }

    fn arb_gr() -> impl Strategy<Value = GaussianRational> {
        (-40i64..40, 1i64..12, -40i64..40, 1i64..12)
            .prop_map(|(a, b, c, d)| GaussianRational::new(rational(a, b), rational(c, d)))
    }

    proptest! {
        #[test]
        fn field_axioms(x in arb_gr(), y in arb_gr()) {
            prop_assert_eq!(&(&x + &y) - &y, x.clone());
            if !y.is_zero() {
                prop_assert_eq!(&(&x * &y) / &y, x.clone());
            }
            prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
        }

        #[test]
        fn squares_are_recognised(w in arb_gr()) {
            let z = &w * &w;
            let r = sqrt_gaussian(&z).expect("square");
            prop_assert_eq!(&r * &r, z);
        }

        #[test]
        fn display_round_trips(x in arb_gr()) {
            prop_assert_eq!(x.to_string().parse::<GaussianRational>().unwrap(), x);
        }
    }
}
