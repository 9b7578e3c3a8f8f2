//! Residue fields: `F_p`, and `F_{p²} = F_p[t]/(t² + 1)` for `p ≡ 3 mod 4`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};
use crate::valuation::is_prime;

/// Element `c0 + c1·t` of a residue field; `c1` is always 0 in degree 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FqElem {
    pub c0: u64,
    pub c1: u64,
}

impl FqElem {
    pub const ZERO: FqElem = FqElem { c0: 0, c1: 0 };
    pub const ONE: FqElem = FqElem { c0: 1, c1: 0 };

    pub fn is_zero(&self) -> bool {
        self.c0 == 0 && self.c1 == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteField {
    p: u64,
    degree: u8,
}

impl FiniteField {
    pub fn prime_field(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FiniteField { p, degree: 1 })
    }

    /// `F_p[t]/(t² + 1)`; the modulus is irreducible exactly when `p ≡ 3 mod 4`.
    pub fn quadratic(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p % 4 != 3 {
            return Err(Error::InvalidConfig(format!(
                "t^2+1 is reducible mod {p}; F_{{p^2}} needs p = 3 mod 4"
            )));
        }
        Ok(FiniteField { p, degree: 2 })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.degree as u32)
    }

    pub fn is_dyadic(&self) -> bool {
        self.p == 2
    }

    fn mulmod(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn from_u64(&self, n: u64) -> FqElem {
        FqElem {
            c0: n % self.p,
            c1: 0,
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> FqElem {
        let r = n.mod_floor(&BigInt::from(self.p));
        FqElem {
            c0: r.to_u64().expect("residue fits in u64"),
            c1: 0,
        }
    }

    /// `c0 + c1·t`; only valid in degree 2 when `c1 ≠ 0`.
    pub fn elem(&self, c0: u64, c1: u64) -> FqElem {
        assert!(self.degree == 2 || c1.is_multiple_of(self.p), "t is not in F_p");
        FqElem {
            c0: c0 % self.p,
            c1: c1 % self.p,
        }
    }

    /// The generator `t` of a degree-2 field.
    pub fn t(&self) -> FqElem {
        self.elem(0, 1)
    }

    pub fn add(&self, x: FqElem, y: FqElem) -> FqElem {
        FqElem {
            c0: (x.c0 + y.c0) % self.p,
            c1: (x.c1 + y.c1) % self.p,
        }
    }

    pub fn neg(&self, x: FqElem) -> FqElem {
        FqElem {
            c0: (self.p - x.c0) % self.p,
            c1: (self.p - x.c1) % self.p,
        }
    }

    pub fn sub(&self, x: FqElem, y: FqElem) -> FqElem {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: FqElem, y: FqElem) -> FqElem {
        // t² = −1
        let re = (self.mulmod(x.c0, y.c0) + self.p - self.mulmod(x.c1, y.c1)) % self.p;
        let im = (self.mulmod(x.c0, y.c1) + self.mulmod(x.c1, y.c0)) % self.p;
        FqElem { c0: re, c1: im }
    }

    pub fn pow(&self, x: FqElem, mut e: u64) -> FqElem {
        let mut base = x;
        let mut acc = FqElem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, x: FqElem) -> Option<FqElem> {
        (!x.is_zero()).then(|| self.pow(x, self.order() - 2))
    }

    /// Euler's criterion; zero counts as a square.
    pub fn is_square(&self, x: FqElem) -> bool {
        if x.is_zero() || self.p == 2 {
            return true;
        }
        self.pow(x, (self.order() - 1) / 2) == FqElem::ONE
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        let p = self.p;
        let hi = if self.degree == 2 { p } else { 1 };
        (0..hi).flat_map(move |c1| (0..p).map(move |c0| FqElem { c0, c1 }))
    }

    /// Some fixed non-square, the smallest in enumeration order.
    pub fn nonsquare(&self) -> Option<FqElem> {
        self.elements().find(|x| !self.is_square(*x))
    }
}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.order())
    }
}
