use num_traits::{One, Zero};
use std::fmt;

use crate::error::{Error, Result};
use crate::exactnum::{BaseField, GaussianRational};
use crate::qform::DiagForm;

type G = GaussianRational;

/// `(a, b)_F`: basis `1, i, j, k` with `i² = a`, `j² = b`, `ij = −ji = k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuaternionAlgebra {
    base: BaseField,
    a: G,
    b: G,
}

impl QuaternionAlgebra {
    pub fn new(base: BaseField, a: G, b: G) -> Result<Self> {
        base.check(&a)?;
        base.check(&b)?;
        if a.is_zero() || b.is_zero() {
            return Err(Error::InvalidConfig("quaternion algebra needs a, b ≠ 0".into()));
        }
        Ok(QuaternionAlgebra { base, a, b })
    }

    pub fn base(&self) -> BaseField {
        self.base
    }

    pub fn a(&self) -> &G {
        &self.a
    }

    pub fn b(&self) -> &G {
        &self.b
    }

    /// `(b, a)`, isomorphic to `(a, b)` via `i ↔ j`.
    pub fn swapped(&self) -> QuaternionAlgebra {
        QuaternionAlgebra {
            base: self.base,
            a: self.b.clone(),
            b: self.a.clone(),
        }
    }

    pub fn quaternion(&self, coords: [G; 4]) -> Result<Quaternion> {
        for c in &coords {
            self.base.check(c)?;
        }
        Ok(Quaternion {
            algebra: self.clone(),
            coords,
        })
    }

    pub fn from_ints(&self, q: [i64; 4]) -> Quaternion {
        Quaternion {
            algebra: self.clone(),
            coords: q.map(G::from_int),
        }
    }

    pub fn one(&self) -> Quaternion {
        self.from_ints([1, 0, 0, 0])
    }

    pub fn zero(&self) -> Quaternion {
        self.from_ints([0; 4])
    }

    /// The basis element `1, i, j, k` for `n = 0..4`.
    pub fn basis(&self, n: usize) -> Quaternion {
        let mut q = [0; 4];
        q[n] = 1;
        self.from_ints(q)
    }

    /// `⟨1, −a, −b, ab⟩`.
    pub fn norm_form(&self) -> DiagForm {
        DiagForm::new(
            self.base,
            vec![G::one(), -&self.a, -&self.b, &self.a * &self.b],
        )
        .expect("a, b are nonzero members of the base")
    }
}

impl fmt::Display for QuaternionAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})/{}", self.a, self.b, self.base)
    }
}

/// `q₀ + q₁i + q₂j + q₃k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quaternion {
    algebra: QuaternionAlgebra,
    coords: [G; 4],
}

impl Quaternion {
    pub fn algebra(&self) -> &QuaternionAlgebra {
        &self.algebra
    }

    pub fn coords(&self) -> &[G; 4] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    fn same_algebra(&self, other: &Quaternion) -> Result<()> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Quaternion) -> Result<Quaternion> {
        self.same_algebra(other)?;
        Ok(Quaternion {
            algebra: self.algebra.clone(),
            coords: std::array::from_fn(|n| &self.coords[n] + &other.coords[n]),
        })
    }

    pub fn sub(&self, other: &Quaternion) -> Result<Quaternion> {
        self.same_algebra(other)?;
        Ok(Quaternion {
            algebra: self.algebra.clone(),
            coords: std::array::from_fn(|n| &self.coords[n] - &other.coords[n]),
        })
    }

    pub fn scale(&self, c: &G) -> Quaternion {
        Quaternion {
            algebra: self.algebra.clone(),
            coords: std::array::from_fn(|n| c * &self.coords[n]),
        }
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [q0, q1, q2, q3] = &self.coords;
        write!(f, "({q0}) + ({q1})i + ({q2})j + ({q3})k")
    }
}

/// `e_s · e_t = c · e_u` for basis indices `1, i, j, k = 0..4`.
pub(crate) fn basis_product(a: &G, b: &G, s: usize, t: usize) -> (G, usize) {
    let one = G::one;
    match (s, t) {
        (0, t) => (one(), t),
        (s, 0) => (one(), s),
        (1, 1) => (a.clone(), 0),
        (2, 2) => (b.clone(), 0),
        (3, 3) => (-(a * b), 0),
        (1, 2) => (one(), 3),
        (2, 1) => (-one(), 3),
        (1, 3) => (a.clone(), 2),
        (3, 1) => (-a, 2),
        (2, 3) => (-b, 1),
        (3, 2) => (b.clone(), 1),
        _ => unreachable!("basis index out of range"),
    }
}

pub fn quat_mul(p: &Quaternion, q: &Quaternion) -> Result<Quaternion> {
    p.same_algebra(q)?;
    let (a, b) = (&p.algebra.a, &p.algebra.b);
    let ab = a * b;
    let [p0, p1, p2, p3] = &p.coords;
    let [q0, q1, q2, q3] = &q.coords;
    // ik = aj, ki = −aj, jk = −bi, kj = bi, k² = −ab
    let r0 = p0 * q0 + a * &(p1 * q1) + b * &(p2 * q2) - &ab * &(p3 * q3);
    let r1 = p0 * q1 + p1 * q0 + b * &(p3 * q2 - p2 * q3);
    let r2 = p0 * q2 + p2 * q0 + a * &(p1 * q3 - p3 * q1);
    let r3 = p0 * q3 + p3 * q0 + p1 * q2 - p2 * q1;
    Ok(Quaternion {
        algebra: p.algebra.clone(),
        coords: [r0, r1, r2, r3],
    })
}

pub fn conjugate(q: &Quaternion) -> Quaternion {
    let [q0, q1, q2, q3] = &q.coords;
    Quaternion {
        algebra: q.algebra.clone(),
        coords: [q0.clone(), -q1, -q2, -q3],
    }
}

/// `N(q) = q₀² − a q₁² − b q₂² + ab q₃²`.
pub fn quat_norm(q: &Quaternion) -> G {
    q.algebra
        .norm_form()
        .evaluate(&q.coords)
        .expect("four coordinates")
}

/// `q̄ / N(q)`.
pub fn quat_inverse(q: &Quaternion) -> Result<Quaternion> {
    let n = quat_norm(q);
    let inv = n.inv().ok_or_else(|| Error::ZeroDivisor(q.to_string()))?;
    Ok(conjugate(q).scale(&inv))
}
