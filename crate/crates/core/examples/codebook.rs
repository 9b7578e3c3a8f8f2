//! Build, normalise and export codebooks: JSON for inspection and a flat
//! little-endian f64 file for other tools.
//!
//! `cargo run --example codebook -- out-dir`

use quatstbc::codes::{fig1_codes, FloatCodebook};
use quatstbc::sim::qam_alphabet;

fn main() -> quatstbc::Result<()> {
    let dir = std::path::PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "codebooks".into()));
    std::fs::create_dir_all(&dir)?;
    let alphabet = qam_alphabet(4)?;
    for preset in fig1_codes() {
        let cb = preset.build(&alphabet, true)?;
        let stem: String = cb.name.chars().filter(|c| c.is_ascii_alphanumeric()).collect();
        std::fs::write(dir.join(format!("{stem}.json")), serde_json::to_string(&cb.to_json())?)?;
        let mut flat = Vec::new();
        cb.write_flat(&mut flat)?;
        std::fs::write(dir.join(format!("{stem}.bin")), &flat)?;
        let back = FloatCodebook::read_flat(&cb.name, cb.dim, flat.as_slice())?;
        println!(
            "{:>14}: {} codewords, P = {:.4}, mean |entry|² = {:.4}, flat round-trip {}",
            cb.name,
            cb.len(),
            cb.power_factor,
            cb.mean_energy(),
            if back.codewords == cb.codewords { "ok" } else { "MISMATCH" }
        );
    }
    println!("written to {}", dir.display());
    Ok(())
}
