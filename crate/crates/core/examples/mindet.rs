//! Exact minimum determinant of a 2×2 code and its non-vanishing bound.
//!
//! `cargo run --release --example mindet -- "(1+2i,i)/Qi" 2`

use quatstbc::algebras::Algebra;
use quatstbc::codes::{box_alphabet, nvd_check, MinDetMode};

fn main() -> quatstbc::Result<()> {
    let mut args = std::env::args().skip(1);
    let src = args.next().unwrap_or_else(|| "(1+2i,i)/Qi".into());
    let bound: i64 = args.next().and_then(|b| b.parse().ok()).unwrap_or(1);
    let Algebra::Quaternion(alg) = src.parse()? else {
        return Err(quatstbc::Error::Unsupported("expected a quaternion algebra".into()));
    };
    let alphabet = box_alphabet(bound, true);
    for mode in [MinDetMode::Codewords, MinDetMode::Differences] {
        let r = nvd_check(&alg, &alphabet, mode)?;
        let m = &r.min_det;
        println!(
            "{mode:?}: min |det|² = {} over {} evaluations (witness {:?}); bound {} holds: {}",
            m.value.as_ref().map_or("-".into(), |v| v.to_string()),
            m.evaluated,
            m.witness.as_ref().map(|w| w.iter().map(|s| s.to_string()).collect::<Vec<_>>()),
            r.bound,
            r.holds
        );
    }
    Ok(())
}
