//! Forms with monomial entries `c·xⁱyʲ` over `F(x, y)`, and Springer's
//! theorem iterated down a tower of valuations.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

use super::{is_isotropic_finite, residue_decompose, DiagForm};
use crate::error::{Error, Result};
use crate::exactnum::{BaseField, GaussianRational};
use crate::valuation::{Level, Valuation, Var};

/// `coeff · x^x · y^y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub coeff: GaussianRational,
    pub x: i32,
    pub y: i32,
}

impl Monomial {
    pub fn constant(c: GaussianRational) -> Self {
        Monomial { coeff: c, x: 0, y: 0 }
    }

    pub fn var(v: Var) -> Self {
        let mut m = Monomial::constant(GaussianRational::one());
        *m.degree_mut(v) = 1;
        m
    }

    pub fn degree(&self, v: Var) -> i32 {
        match v {
            Var::X => self.x,
            Var::Y => self.y,
        }
    }

    fn degree_mut(&mut self, v: Var) -> &mut i32 {
        match v {
            Var::X => &mut self.x,
            Var::Y => &mut self.y,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.x == 0 && self.y == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            coeff: &self.coeff * &other.coeff,
            x: self.x + other.x,
            y: self.y + other.y,
        }
    }

    pub fn neg(&self) -> Monomial {
        Monomial {
            coeff: -self.coeff.clone(),
            ..self.clone()
        }
    }
}

impl From<GaussianRational> for Monomial {
    fn from(c: GaussianRational) -> Self {
        Monomial::constant(c)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut vars = String::new();
        for (name, d) in [("x", self.x), ("y", self.y)] {
            match d {
                0 => {}
                1 => vars.push_str(name),
                d => vars.push_str(&format!("{name}^{d}")),
            }
        }
        if vars.is_empty() {
            return write!(f, "{}", self.coeff);
        }
        let c = self.coeff.to_string();
        if self.coeff.is_one() {
            write!(f, "{vars}")
        } else if c == "-1" {
            write!(f, "-{vars}")
        } else if c.trim_start_matches('-').contains(['+', '-', '/']) {
            write!(f, "({c}){vars}")
        } else {
            write!(f, "{c}{vars}")
        }
    }
}

/// A diagonal form whose entries are monomials over ℚ or ℚ(i).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentForm {
    base: BaseField,
    entries: Vec<Monomial>,
}

impl LaurentForm {
    pub fn new(base: BaseField, entries: Vec<Monomial>) -> Result<Self> {
        for m in &entries {
            base.check(&m.coeff)?;
            if m.coeff.is_zero() {
                return Err(Error::ZeroEntry);
            }
        }
        Ok(LaurentForm { base, entries })
    }

    pub fn base(&self) -> BaseField {
        self.base
    }

    pub fn entries(&self) -> &[Monomial] {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// The underlying constant form, if no entry involves a variable.
    pub fn to_constant(&self) -> Option<DiagForm> {
        if self.entries.iter().all(Monomial::is_constant) && !self.entries.is_empty() {
            DiagForm::new(self.base, self.entries.iter().map(|m| m.coeff.clone()).collect()).ok()
        } else {
            None
        }
    }
}

impl From<&DiagForm> for LaurentForm {
    fn from(f: &DiagForm) -> Self {
        LaurentForm {
            base: f.base(),
            entries: f.entries().iter().cloned().map(Monomial::constant).collect(),
        }
    }
}

impl fmt::Display for LaurentForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        write!(f, "⟨{}⟩", parts.join(","))
    }
}

/// Outcome of a tower descent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Anisotropy {
    /// Anisotropic over the completion, hence over the field itself.
    Anisotropic,
    /// Isotropic over the completion; says nothing about the field itself
    /// unless the tower is empty.
    Isotropic,
    /// Some residue form could not be decided.
    Undetermined,
}

impl Anisotropy {
    fn both(self, other: Anisotropy) -> Anisotropy {
        use Anisotropy::*;
        match (self, other) {
            (Isotropic, _) | (_, Isotropic) => Isotropic,
            (Undetermined, _) | (_, Undetermined) => Undetermined,
            _ => Anisotropic,
        }
    }
}

/// One residue split performed during a descent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerStep {
    /// Which residue branch this split happened in, e.g. `"φ1/φ2"`.
    pub path: String,
    pub level: String,
    pub form: String,
    pub first: String,
    pub second: String,
    pub verdict: Anisotropy,
}

/// Decides anisotropy by splitting at each level of `val` in turn.
///
/// Formal levels split by parity of the degree in their variable. A final
/// prime level reduces to a finite field where the answer is exact. Without
/// a prime level the leftover constant forms are decided over the base field
/// only in dimension ≤ 2; larger ones come back `Undetermined`.
pub fn springer_tower(form: &LaurentForm, val: &Valuation) -> Result<(Anisotropy, Vec<TowerStep>)> {
    if form.base() != val.base() {
        return Err(Error::InvalidConfig(format!(
            "form over {} but valuation over {}",
            form.base(),
            val.base()
        )));
    }
    let mut trail = Vec::new();
    let verdict = descend(form.base(), form.entries().to_vec(), val.levels(), "", &mut trail)?;
    Ok((verdict, trail))
}

fn descend(
    base: BaseField,
    entries: Vec<Monomial>,
    levels: &[Level],
    path: &str,
    trail: &mut Vec<TowerStep>,
) -> Result<Anisotropy> {
    let Some((level, rest)) = levels.split_first() else {
        return decide_over_base(base, &entries);
    };
    match level {
        Level::Formal(v) => {
            let (mut first, mut second) = (Vec::new(), Vec::new());
            for m in &entries {
                let d = m.degree(*v);
                let mut unit = m.clone();
                *unit.degree_mut(*v) = 0;
                if d.rem_euclid(2) == 0 {
                    first.push(unit);
                } else {
                    second.push(unit);
                }
            }
            let show = |es: &[Monomial]| LaurentForm { base, entries: es.to_vec() }.to_string();
            let step = trail.len();
            trail.push(TowerStep {
                path: path.to_string(),
                level: format!("v_{v}"),
                form: show(&entries),
                first: show(&first),
                second: show(&second),
                verdict: Anisotropy::Undetermined,
            });
            let sub = |tag: &str| {
                if path.is_empty() {
                    tag.to_string()
                } else {
                    format!("{path}/{tag}")
                }
            };
            let v1 = descend(base, first, rest, &sub("φ1"), trail)?;
            let v2 = descend(base, second, rest, &sub("φ2"), trail)?;
            let verdict = v1.both(v2);
            trail[step].verdict = verdict;
            Ok(verdict)
        }
        Level::Prime(p) => {
            if let Some(m) = entries.iter().find(|m| !m.is_constant()) {
                return Err(Error::Unsupported(format!(
                    "entry {m} still involves a variable at the prime level"
                )));
            }
            if entries.is_empty() {
                return Ok(Anisotropy::Anisotropic);
            }
            let form = DiagForm::new(base, entries.into_iter().map(|m| m.coeff).collect())?;
            let split = residue_decompose(&form, p)?;
            let iso = is_isotropic_finite(&split.first)? || is_isotropic_finite(&split.second)?;
            let verdict = if iso {
                Anisotropy::Isotropic
            } else {
                Anisotropy::Anisotropic
            };
            trail.push(TowerStep {
                path: path.to_string(),
                level: format!("v_{p}"),
                form: form.to_string(),
                first: split.first.to_string(),
                second: split.second.to_string(),
                verdict,
            });
            Ok(verdict)
        }
    }
}

fn decide_over_base(base: BaseField, entries: &[Monomial]) -> Result<Anisotropy> {
    if let Some(m) = entries.iter().find(|m| !m.is_constant()) {
        return Err(Error::Unsupported(format!(
            "entry {m} involves a variable that is not in the valuation tower"
        )));
    }
    Ok(match entries {
        [] | [_] => Anisotropy::Anisotropic,
        [u, w] => {
            let d = -(&u.coeff * &w.coeff);
            if base.is_square(&d) {
                Anisotropy::Isotropic
            } else {
                Anisotropy::Anisotropic
            }
        }
        _ => Anisotropy::Undetermined,
    })
}
