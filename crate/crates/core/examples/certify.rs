//! Division certificates for a few quaternion and biquaternion algebras.
//!
//! `cargo run --example certify -- "(2+3i,i)/Qi"` certifies one algebra;
//! with no argument a fixed list is run.

use quatstbc::algebras::{certify_biquaternion_division, certify_quaternion_auto, Algebra};

fn main() -> quatstbc::Result<()> {
    let inputs: Vec<String> = match std::env::args().nth(1) {
        Some(a) => vec![a],
        None => ["(3,-1)/Q", "(-1,1)/Q", "(1+2i,i)/Qi", "(2-i,i)/Qi", "(1+i,i)/Qi", "(1+2i,7;x,y)/Qi(x,y)"]
            .map(String::from)
            .to_vec(),
    };
    for src in inputs {
        let cert = match src.parse::<Algebra>()? {
            Algebra::Quaternion(q) => certify_quaternion_auto(&q, 3)?,
            Algebra::Biquaternion(b) => certify_biquaternion_division(&b)?,
        };
        println!("{src:>22}  {}", cert.verdict);
        println!("{:>22}  {}", "", serde_json::to_string(&cert.witness)?);
    }
    Ok(())
}
