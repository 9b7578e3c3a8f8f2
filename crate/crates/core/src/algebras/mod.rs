//! Quaternion and biquaternion algebras, their norm and Albert forms, and
//! division certificates.
//!
//! Algebras are written in a small grammar:
//!
//! ```text
//! (3,-1)/Q                  quaternion algebra (a,b) over Q
//! (1+2i,i)/Qi               over Q(i)
//! (a=1+2i,b=7;x,y)/Qi(x,y)  (a,x) ⊗ (b,y) with x, y transcendental
//! (2,3)*(5,7)/Q             (a,b) ⊗ (c,d) with exact parameters
//! (2,x@0.5)*(3,y@1.3)/Q(x,y) formal slots with e^{iθ} stand-ins
//! ```

mod biquaternion;
mod certify;
mod quaternion;

pub use biquaternion::{biquat_mul, Biquaternion, BiquaternionAlgebra, Slot};
pub use certify::{
    candidate_primes, certify_biquaternion_division, certify_quaternion_auto,
    certify_quaternion_division, nonsquare_unit_classes, replay_certificate, DivisionCertificate,
    Verdict, Witness,
};
pub use quaternion::{conjugate, quat_inverse, quat_mul, quat_norm, Quaternion, QuaternionAlgebra};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exactnum::{BaseField, GaussianRational};
use crate::valuation::Var;

#[derive(Clone, Debug, PartialEq)]
pub enum Algebra {
    Quaternion(QuaternionAlgebra),
    Biquaternion(BiquaternionAlgebra),
}

impl Algebra {
    pub fn base(&self) -> BaseField {
        match self {
            Algebra::Quaternion(q) => q.base(),
            Algebra::Biquaternion(b) => b.base(),
        }
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algebra::Quaternion(q) => q.fmt(f),
            Algebra::Biquaternion(b) => b.fmt(f),
        }
    }
}

fn parse_err(s: &str, why: &str) -> Error {
    Error::Parse(format!("algebra {s:?}: {why}"))
}

/// Top-level parenthesised groups, and the separators between them.
fn groups(body: &str) -> Option<(Vec<&str>, Vec<&str>)> {
    let mut out = Vec::new();
    let mut seps = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    let mut last_end = 0;
    for (k, ch) in body.char_indices() {
        match ch {
            '(' => {
                if depth == 0 {
                    seps.push(&body[last_end..k]);
                    start = k + 1;
                }
                depth += 1;
            }
            ')' => {
                depth = depth.checked_sub(1)?;
                if depth == 0 {
                    out.push(&body[start..k]);
                    last_end = k + 1;
                }
            }
            _ => {}
        }
    }
    if depth != 0 || !body[last_end..].is_empty() {
        return None;
    }
    Some((out, seps))
}

/// Splits on top-level `,` and `;`, returning the pieces and separators.
fn fields(group: &str) -> (Vec<&str>, Vec<char>) {
    let mut out = Vec::new();
    let mut seps = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    for (k, ch) in group.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' | ';' if depth == 0 => {
                out.push(&group[start..k]);
                seps.push(ch);
                start = k + 1;
            }
            _ => {}
        }
    }
    out.push(&group[start..]);
    (out, seps)
}

fn parse_slot(s: &str) -> Result<Slot> {
    let (name, theta) = match s.split_once('@') {
        Some((n, t)) => (
            n,
            Some(
                t.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad stand-in angle {t:?}")))?,
            ),
        ),
        None => (s, None),
    };
    let var = match name {
        "x" => Some(Var::X),
        "y" => Some(Var::Y),
        _ => None,
    };
    match (var, theta) {
        (Some(var), stand_in) => Ok(Slot::Formal { var, stand_in }),
        (None, None) => Ok(Slot::Exact(name.parse()?)),
        (None, Some(_)) => Err(Error::Parse(format!("only x and y take stand-ins, got {s:?}"))),
    }
}

fn strip_label<'s>(s: &'s str, label: &str) -> &'s str {
    s.strip_prefix(label).and_then(|r| r.strip_prefix('=')).unwrap_or(s)
}

impl FromStr for Algebra {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let compact = compact.replace('⊗', "*");
        let (body, field) = compact
            .rsplit_once('/')
            .filter(|(_, f)| !f.contains(')') || f.ends_with("(x,y)"))
            .ok_or_else(|| parse_err(s, "expected \"(...)/F\""))?;
        let (field, formal_field) = match field.strip_suffix("(x,y)") {
            Some(f) => (f, true),
            None => (field, false),
        };
        let base = match field {
            "Q" => BaseField::Rationals,
            "Qi" | "Q(i)" => BaseField::GaussianRationals,
            _ => return Err(parse_err(s, "field must be Q or Qi")),
        };
        let (gs, seps) = groups(body).ok_or_else(|| parse_err(s, "unbalanced parentheses"))?;
        let algebra = match gs.as_slice() {
            [g] if seps == [""] => {
                let (parts, kinds) = fields(g);
                match (parts.as_slice(), kinds.as_slice()) {
                    ([a, b], [',']) => {
                        let a = strip_label(a, "a").parse()?;
                        let b = strip_label(b, "b").parse()?;
                        Algebra::Quaternion(QuaternionAlgebra::new(base, a, b)?)
                    }
                    ([a, c, b, d], [',', ';', ',']) => {
                        let a: GaussianRational = strip_label(a, "a").parse()?;
                        let c: GaussianRational = strip_label(c, "b").parse()?;
                        Algebra::Biquaternion(BiquaternionAlgebra::new(base, a, parse_slot(b)?, c, parse_slot(d)?)?)
                    }
                    _ => return Err(parse_err(s, "expected (a,b) or (a,b;x,y)")),
                }
            }
            [g1, g2] if seps == ["", "*"] => {
                let (p1, k1) = fields(g1);
                let (p2, k2) = fields(g2);
                if k1 != [','] || k2 != [','] {
                    return Err(parse_err(s, "each factor must be (a,b)"));
                }
                Algebra::Biquaternion(BiquaternionAlgebra::new(
                    base,
                    p1[0].parse()?,
                    parse_slot(p1[1])?,
                    p2[0].parse()?,
                    parse_slot(p2[1])?,
                )?)
            }
            _ => return Err(parse_err(s, "expected one or two parenthesised factors")),
        };
        let has_formal = matches!(&algebra, Algebra::Biquaternion(b) if b.has_formal_slots());
        if has_formal != formal_field {
            return Err(parse_err(
                s,
                "formal slots x, y need the field written as F(x,y), and only then",
            ));
        }
        Ok(algebra)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_examples() {
        for (src, canon) in [
            ("(3,-1)/Q", "(3,-1)/Q"),
            ("(1+2i, i)/Qi", "(1+2i,i)/Qi"),
            ("(a=1+2i,b=7;x,y)/Qi(x,y)", "(1+2i,7;x,y)/Qi(x,y)"),
            ("(2,8;x,y)/Q(x,y)", "(2,8;x,y)/Q(x,y)"),
            ("(2,3)⊗(5,7)/Q", "(2,3)*(5,7)/Q"),
            ("(2,y)*(3,x)/Q(x,y)", "(2,y)*(3,x)/Q(x,y)"),
            ("(2,x@0.5)*(3,y@1.3)/Q(x,y)", "(2,3;x@0.5,y@1.3)/Q(x,y)"),
            ("(1/2-(3/4)i,i)/Qi", "(1/2-(3/4)i,i)/Qi"),
        ] {
            let alg: Algebra = src.parse().unwrap_or_else(|e| panic!("{src}: {e}"));
            assert_eq!(alg.to_string(), canon);
        }
    }

    #[test]
    fn rejects_malformed() {
        for bad in [
            "(3,-1)",
            "(3,-1)/R",
            "(i,1)/Q",
            "(0,1)/Q",
            "(2,x)*(3,x)/Q(x,y)",
            "(2,8;x,y)/Q",
            "(2,8)/Q(x,y)",
            "((2,8)/Q",
            "(2,8,9)/Q",
            "(2,3)+(5,7)/Q",
            "(2,z@1)*(3,4)/Q",
        ] {
            assert!(matches!(bad.parse::<Algebra>(), Err(Error::Parse(_)) | Err(Error::NotInField { .. }) | Err(Error::InvalidConfig(_))), "{bad}");
        }
    }

    fn arb_g() -> impl Strategy<Value = GaussianRational> {
        (-20i64..=20, -20i64..=20, 1i64..=6, 1i64..=6)
            .prop_filter("nonzero", |(a, b, _, _)| *a != 0 || *b != 0)
            .prop_map(|(a, b, c, d)| {
                GaussianRational::new(crate::exactnum::rational(a, c), crate::exactnum::rational(b, d))
            })
    }

    fn arb_slot() -> impl Strategy<Value = Slot> {
        prop_oneof![
            arb_g().prop_map(Slot::Exact),
            Just(Slot::formal(Var::X)),
            (0.0f64..6.3).prop_map(|t| Slot::Formal { var: Var::X, stand_in: Some(t) }),
        ]
    }

    fn arb_algebra() -> impl Strategy<Value = Algebra> {
        prop_oneof![
            (arb_g(), arb_g()).prop_map(|(a, b)| Algebra::Quaternion(
                QuaternionAlgebra::new(BaseField::GaussianRationals, a, b).unwrap()
            )),
            (arb_g(), arb_slot(), arb_g(), any::<bool>()).prop_map(|(a, b, c, exact_d)| {
                let d = if exact_d {
                    Slot::Exact(GaussianRational::from_int(7))
                } else {
                    Slot::formal(Var::Y)
                };
                Algebra::Biquaternion(BiquaternionAlgebra::new(BaseField::GaussianRationals, a, b, c, d).unwrap())
            }),
        ]
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(alg in arb_algebra()) {
            let printed = alg.to_string();
            let back: Algebra = printed.parse().unwrap();
            prop_assert_eq!(&back, &alg);
            prop_assert_eq!(back.to_string(), printed);
        }
    }
}
