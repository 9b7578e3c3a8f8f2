//! 2×2 codewords from the left regular representation of `(a, b)`.

use num_complex::Complex64;

use crate::algebras::{Quaternion, QuaternionAlgebra};
use crate::error::{Error, Result};
use crate::exactnum::{GaussianRational, QuadExtElem, QuadField};

type G = GaussianRational;

/// `X = [[x₀, bσ(x₁)], [x₁, σ(x₀)]]` over `K = F(√a)`.
///
/// With `transposed` set, entries are reported as `Xᵀ`, which is the
/// `[[α+β√a, γ+δ√a], [b(γ−δ√a), α−β√a]]` layout used for codebooks. The
/// determinant is the same either way.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Codeword2 {
    algebra: QuaternionAlgebra,
    x0: QuadExtElem,
    x1: QuadExtElem,
    transposed: bool,
}

fn field_of(alg: &QuaternionAlgebra) -> Result<QuadField> {
    QuadField::new(alg.base(), alg.a().clone())
}

pub fn quat_matrix(x0: QuadExtElem, x1: QuadExtElem, alg: &QuaternionAlgebra) -> Result<Codeword2> {
    let k = field_of(alg)?;
    for x in [&x0, &x1] {
        if &x.radicand != k.radicand() {
            return Err(Error::InvalidConfig(format!(
                "entries must lie in F(√{}), got F(√{})",
                k.radicand(),
                x.radicand
            )));
        }
        alg.base().check(&x.x0)?;
        alg.base().check(&x.x1)?;
    }
    Ok(Codeword2 {
        algebra: alg.clone(),
        x0,
        x1,
        transposed: false,
    })
}

impl Codeword2 {
    /// `q = x₀ + j·x₁` with `x₀ = q₀ + q₁√a`, `x₁ = q₂ − q₃√a`.
    pub fn from_quaternion(q: &Quaternion) -> Result<Self> {
        let k = field_of(q.algebra())?;
        let [q0, q1, q2, q3] = q.coords().clone();
        quat_matrix(k.elem(q0, q1), k.elem(q2, -q3), q.algebra())
    }

    /// The codebook layout for information symbols `α, β, γ, δ`.
    pub fn from_symbols(alg: &QuaternionAlgebra, s: [G; 4]) -> Result<Self> {
        let k = field_of(alg)?;
        let [al, be, ga, de] = s;
        let mut c = quat_matrix(k.elem(al, be), k.elem(ga, de), alg)?;
        c.transposed = true;
        Ok(c)
    }

    pub fn algebra(&self) -> &QuaternionAlgebra {
        &self.algebra
    }

    pub fn x0(&self) -> &QuadExtElem {
        &self.x0
    }

    pub fn x1(&self) -> &QuadExtElem {
        &self.x1
    }

    pub fn is_transposed(&self) -> bool {
        self.transposed
    }

    pub fn with_transpose(mut self, t: bool) -> Self {
        self.transposed = t;
        self
    }

    /// The quaternion this codeword represents.
    pub fn quaternion(&self) -> Quaternion {
        let coords = [
            self.x0.x0.clone(),
            self.x0.x1.clone(),
            self.x1.x0.clone(),
            -&self.x1.x1,
        ];
        self.algebra.quaternion(coords).expect("entries were validated")
    }

    /// Symbols `(α, β, γ, δ)` of the codebook layout.
    pub fn symbols(&self) -> [G; 4] {
        [
            self.x0.x0.clone(),
            self.x0.x1.clone(),
            self.x1.x0.clone(),
            self.x1.x1.clone(),
        ]
    }

    pub fn is_zero(&self) -> bool {
        self.x0.is_zero() && self.x1.is_zero()
    }

    pub fn matrix(&self) -> [[QuadExtElem; 2]; 2] {
        let b = self.algebra.b();
        let m = [
            [self.x0.clone(), self.x1.conj().scale(b)],
            [self.x1.clone(), self.x0.conj()],
        ];
        if self.transposed {
            transpose2(m)
        } else {
            m
        }
    }

    /// `x₀σ(x₀) − b·x₁σ(x₁)`.
    pub fn det_exact(&self) -> G {
        &self.x0.relative_norm() - &(self.algebra.b() * &self.x1.relative_norm())
    }

    /// `|det|²` as an exact rational.
    pub fn det_abs2(&self) -> crate::exactnum::Rational {
        self.det_exact().norm()
    }

    /// Entries as complex numbers with the principal branch of `√a`.
    pub fn to_complex(&self) -> [[Complex64; 2]; 2] {
        self.to_complex_with(self.algebra.a().to_complex().sqrt())
    }

    pub fn to_complex_with(&self, sqrt_a: Complex64) -> [[Complex64; 2]; 2] {
        self.matrix().map(|row| row.map(|e| e.to_complex_with(sqrt_a)))
    }
}

pub fn det_exact(c: &Codeword2) -> G {
    c.det_exact()
}

fn transpose2<T: Clone>(m: [[T; 2]; 2]) -> [[T; 2]; 2] {
    [
        [m[0][0].clone(), m[1][0].clone()],
        [m[0][1].clone(), m[1][1].clone()],
    ]
}

/// Exact 2×2 matrix product over `K`.
pub fn mat2_mul(x: &[[QuadExtElem; 2]; 2], y: &[[QuadExtElem; 2]; 2]) -> [[QuadExtElem; 2]; 2] {
    std::array::from_fn(|r| std::array::from_fn(|c| &(&x[r][0] * &y[0][c]) + &(&x[r][1] * &y[1][c])))
}

/// Codewords for every symbol tuple in `alphabet⁴`, `α` varying slowest.
pub fn gen_codebook_2x2(alg: &QuaternionAlgebra, alphabet: &[G]) -> Result<impl Iterator<Item = Codeword2>> {
    if alphabet.is_empty() {
        return Err(Error::InvalidConfig("empty alphabet".into()));
    }
    for s in alphabet {
        alg.base().check(s)?;
    }
    field_of(alg)?;
    let alg = alg.clone();
    let alphabet = alphabet.to_vec();
    let m = alphabet.len();
    let total = m.pow(4);
    Ok((0..total).map(move |idx| codeword_at(&alg, &alphabet, idx)))
}

/// The codeword at position `idx` of [`gen_codebook_2x2`], for partitioning
/// the enumeration across workers.
pub fn codeword_at(alg: &QuaternionAlgebra, alphabet: &[G], idx: usize) -> Codeword2 {
    let m = alphabet.len();
    let digit = |k: u32| alphabet[(idx / m.pow(3 - k)) % m].clone();
    Codeword2::from_symbols(alg, [digit(0), digit(1), digit(2), digit(3)]).expect("validated")
}

impl std::fmt::Display for Codeword2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let m = self.matrix();
        write!(f, "[[{}, {}], [{}, {}]]", m[0][0], m[0][1], m[1][0], m[1][1])
    }
}
