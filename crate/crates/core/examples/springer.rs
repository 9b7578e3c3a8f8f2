//! Springer's theorem against brute force: anisotropy of ⟨u₁,…⟩ ⊥ π⟨…⟩ over
//! ℚ₅ from the two residue forms over 𝔽₅.

use quatstbc::ffield::FiniteField;
use quatstbc::qform::{is_isotropic_by_enumeration, residue_decompose, springer_anisotropic, DiagForm, FiniteForm};
use quatstbc::exactnum::BaseField;
use quatstbc::valuation::{Prime, Valuation};

fn main() -> quatstbc::Result<()> {
    let p = Prime::rational(5)?;
    let val = Valuation::at_prime(p.clone());
    let f5 = FiniteField::prime_field(5)?;
    for entries in [vec![1, 2], vec![1, -2, 5], vec![1, -2, -5, 10], vec![1, 1, 1], vec![2, 10, 3]] {
        let form = DiagForm::from_ints(BaseField::Rationals, &entries)?;
        let split = residue_decompose(&form, &p)?;
        let aniso = springer_anisotropic(&form, &val)?;
        let brute = |e: &[i64]| {
            let ff = FiniteForm::new(f5, e.iter().map(|&x| f5.from_u64(x.rem_euclid(5) as u64)).collect());
            !e.is_empty() && is_isotropic_by_enumeration(&ff).unwrap_or(false)
        };
        let units: Vec<i64> = entries.iter().copied().filter(|x| x % 5 != 0).collect();
        let pi_part: Vec<i64> = entries.iter().copied().filter(|x| x % 5 == 0).map(|x| x / 5).collect();
        let show = |f: &FiniteForm| f.entries().iter().map(|e| e.c0.to_string()).collect::<Vec<_>>().join(",");
        println!(
            "{form:<16} residue forms ⟨{}⟩, ⟨{}⟩  anisotropic: {aniso} (brute force: {})",
            show(&split.first),
            show(&split.second),
            !brute(&units) && !brute(&pi_part)
        );
    }
    Ok(())
}
