use num_complex::Complex64;
use num_traits::{One, Zero};
use std::fmt;

use super::quaternion::{basis_product, QuaternionAlgebra};
use crate::error::{Error, Result};
use crate::exactnum::{BaseField, GaussianRational};
use crate::qform::{DiagForm, LaurentForm, Monomial};
use crate::valuation::Var;

type G = GaussianRational;

fn var_char(v: Var) -> char {
    match v {
        Var::X => 'x',
        Var::Y => 'y',
    }
}

/// The `b` or `d` parameter of a biquaternion algebra.
#[derive(Clone, Debug, PartialEq)]
pub enum Slot {
    Exact(G),
    /// A transcendental over the base, optionally paired with an angle `θ`
    /// so that `e^{iθ}` can stand in for it in floating-point views.
    Formal { var: Var, stand_in: Option<f64> },
}

impl Slot {
    pub fn formal(var: Var) -> Self {
        Slot::Formal { var, stand_in: None }
    }

    pub fn exact(&self) -> Option<&G> {
        match self {
            Slot::Exact(g) => Some(g),
            Slot::Formal { .. } => None,
        }
    }

    pub fn var(&self) -> Option<Var> {
        match self {
            Slot::Formal { var, .. } => Some(*var),
            Slot::Exact(_) => None,
        }
    }

    fn monomial(&self) -> Monomial {
        match self {
            Slot::Exact(g) => Monomial::constant(g.clone()),
            Slot::Formal { var, .. } => Monomial::var(*var),
        }
    }

    /// Numeric value: the exact element, or `e^{iθ}` for a formal slot.
    pub fn numeric(&self) -> Result<Complex64> {
        match self {
            Slot::Exact(g) => Ok(g.to_complex()),
            Slot::Formal {
                stand_in: Some(theta),
                ..
            } => Ok(Complex64::from_polar(1.0, *theta)),
            Slot::Formal { var, stand_in: None } => Err(Error::FormalSlot(var_char(*var))),
        }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::Exact(g) => write!(f, "{g}"),
            Slot::Formal { var, stand_in: None } => write!(f, "{var}"),
            Slot::Formal {
                var,
                stand_in: Some(t),
            } => write!(f, "{var}@{t:?}"),
        }
    }
}

/// `(a, b)_F ⊗ (c, d)_F`, where `b` and `d` may be formal transcendentals.
#[derive(Clone, Debug, PartialEq)]
pub struct BiquaternionAlgebra {
    base: BaseField,
    a: G,
    b: Slot,
    c: G,
    d: Slot,
}

impl BiquaternionAlgebra {
    pub fn new(base: BaseField, a: G, b: Slot, c: G, d: Slot) -> Result<Self> {
        let exacts = [Some(&a), b.exact(), Some(&c), d.exact()];
        for e in exacts.into_iter().flatten() {
            base.check(e)?;
            if e.is_zero() {
                return Err(Error::InvalidConfig(
                    "biquaternion parameters must be nonzero".into(),
                ));
            }
        }
        if let (Some(u), Some(v)) = (b.var(), d.var()) {
            if u == v {
                return Err(Error::InvalidConfig(format!(
                    "formal slots must be distinct, got {u} twice"
                )));
            }
        }
        Ok(BiquaternionAlgebra { base, a, b, c, d })
    }

    /// `(a, x) ⊗ (b, y)` over `F(x, y)`.
    pub fn transcendental(base: BaseField, a: G, b: G) -> Result<Self> {
        Self::new(base, a, Slot::formal(Var::X), b, Slot::formal(Var::Y))
    }

    pub fn exact(base: BaseField, a: G, b: G, c: G, d: G) -> Result<Self> {
        Self::new(base, a, Slot::Exact(b), c, Slot::Exact(d))
    }

    /// Sets `e^{iθ}` stand-ins for whichever slots are formal.
    pub fn with_stand_ins(mut self, theta_x: f64, theta_y: f64) -> Self {
        for slot in [&mut self.b, &mut self.d] {
            if let Slot::Formal { var, stand_in } = slot {
                *stand_in = Some(match var {
                    Var::X => theta_x,
                    Var::Y => theta_y,
                });
            }
        }
        self
    }

    pub fn base(&self) -> BaseField {
        self.base
    }

    pub fn a(&self) -> &G {
        &self.a
    }

    pub fn b(&self) -> &Slot {
        &self.b
    }

    pub fn c(&self) -> &G {
        &self.c
    }

    pub fn d(&self) -> &Slot {
        &self.d
    }

    pub fn has_formal_slots(&self) -> bool {
        self.b.var().is_some() || self.d.var().is_some()
    }

    /// The two quaternion factors, when every slot is exact.
    pub fn factors(&self) -> Result<(QuaternionAlgebra, QuaternionAlgebra)> {
        let b = self.exact_slot(&self.b)?;
        let d = self.exact_slot(&self.d)?;
        Ok((
            QuaternionAlgebra::new(self.base, self.a.clone(), b.clone())?,
            QuaternionAlgebra::new(self.base, self.c.clone(), d.clone())?,
        ))
    }

    fn exact_slot<'s>(&self, s: &'s Slot) -> Result<&'s G> {
        match s {
            Slot::Exact(g) => Ok(g),
            Slot::Formal { var, .. } => Err(Error::FormalSlot(var_char(*var))),
        }
    }

    /// `⟨a, b, −ab, −c, −d, cd⟩`, keeping formal slots as monomials.
    pub fn albert_form(&self) -> LaurentForm {
        let a = Monomial::constant(self.a.clone());
        let c = Monomial::constant(self.c.clone());
        let b = self.b.monomial();
        let d = self.d.monomial();
        LaurentForm::new(
            self.base,
            vec![
                a.clone(),
                b.clone(),
                a.mul(&b).neg(),
                c.neg(),
                d.neg(),
                c.mul(&d),
            ],
        )
        .expect("parameters were validated")
    }

    /// The Albert form as an ordinary form over `F`; needs exact slots.
    pub fn albert_form_exact(&self) -> Result<DiagForm> {
        let f = self.albert_form();
        f.to_constant()
            .ok_or_else(|| Error::Unsupported("Albert form has formal entries".into()))
    }

    pub fn biquaternion(&self, coords: [G; 16]) -> Result<Biquaternion> {
        for c in &coords {
            self.base.check(c)?;
        }
        Ok(Biquaternion {
            algebra: self.clone(),
            coords,
        })
    }

    /// `ξ ⊗ η` for basis indices `1, i, j, k = 0..4` in each factor.
    pub fn basis(&self, xi: usize, eta: usize) -> Biquaternion {
        let mut coords: [G; 16] = Default::default();
        coords[4 * xi + eta] = G::one();
        Biquaternion {
            algebra: self.clone(),
            coords,
        }
    }
}

impl fmt::Display for BiquaternionAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let suffix = if self.has_formal_slots() {
            format!("{}(x,y)", self.base)
        } else {
            self.base.to_string()
        };
        let shorthand = matches!(self.b.var(), Some(Var::X)) && matches!(self.d.var(), Some(Var::Y));
        if shorthand {
            write!(f, "({},{};{},{})/{}", self.a, self.c, self.b, self.d, suffix)
        } else {
            write!(f, "({},{})*({},{})/{}", self.a, self.b, self.c, self.d, suffix)
        }
    }
}

/// `Σ x_{ξ,η} ξ⊗η`, stored at index `4ξ + η`.
#[derive(Clone, Debug, PartialEq)]
pub struct Biquaternion {
    algebra: BiquaternionAlgebra,
    coords: [G; 16],
}

impl Biquaternion {
    pub fn algebra(&self) -> &BiquaternionAlgebra {
        &self.algebra
    }

    pub fn coords(&self) -> &[G; 16] {
        &self.coords
    }

    pub fn scale(&self, c: &G) -> Biquaternion {
        Biquaternion {
            algebra: self.algebra.clone(),
            coords: std::array::from_fn(|n| c * &self.coords[n]),
        }
    }

    pub fn add(&self, other: &Biquaternion) -> Result<Biquaternion> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch);
        }
        Ok(Biquaternion {
            algebra: self.algebra.clone(),
            coords: std::array::from_fn(|n| &self.coords[n] + &other.coords[n]),
        })
    }
}

/// `(ξ⊗η)(ξ'⊗η') = ξξ' ⊗ ηη'`, extended bilinearly.
pub fn biquat_mul(u: &Biquaternion, v: &Biquaternion) -> Result<Biquaternion> {
    if u.algebra != v.algebra {
        return Err(Error::AlgebraMismatch);
    }
    let alg = &u.algebra;
    let (first, second) = alg.factors()?;
    let mut out: [G; 16] = Default::default();
    for (s, x) in u.coords.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (t, y) in v.coords.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
            let (c1, k1) = basis_product(first.a(), first.b(), s / 4, t / 4);
            let (c2, k2) = basis_product(second.a(), second.b(), s % 4, t % 4);
            let term = &(x * y) * &(&c1 * &c2);
            out[4 * k1 + k2] = &out[4 * k1 + k2] + &term;
        }
    }
    Ok(Biquaternion {
        algebra: alg.clone(),
        coords: out,
    })
}
