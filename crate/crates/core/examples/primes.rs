//! How rational primes split in ℤ[i], and the valuations and residues they
//! give.

use quatstbc::exactnum::GaussianRational as G;
use quatstbc::valuation::{factor_prime_in_zi, Prime};

fn main() -> quatstbc::Result<()> {
    for p in [2u64, 3, 5, 7, 13, 17, 29] {
        let parts: Vec<String> = factor_prime_in_zi(p)?
            .iter()
            .map(|q| format!("({}) e={} f={}", q.generator(), q.ramification(), q.inertial_degree()))
            .collect();
        println!("{p:>3} = {}", parts.join(" · "));
    }
    let pi = Prime::gaussian(&G::from_ints(1, 2))?;
    for z in [G::from_ints(5, 0), G::from_ints(3, 4), G::i(), G::from_ints(2, -1)] {
        let residue = pi.reduce(&z).map_or("-".into(), |r| r.c0.to_string());
        println!("v_(1+2i)({z}) = {:?}, residue {residue} in F_5", pi.valuation(&z)?);
    }
    Ok(())
}
