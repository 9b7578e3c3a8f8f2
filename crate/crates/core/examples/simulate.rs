//! SER of the 2×2 comparison codes at 4-QAM over 2×2 Rayleigh fading.
//!
//! `cargo run --release --example simulate -- [trials] [snr-grid]`

use quatstbc::codes::fig1_codes;
use quatstbc::sim::{qam_alphabet, parse_snr_grid, run_sim, ChannelConfig};

fn main() -> quatstbc::Result<()> {
    let mut args = std::env::args().skip(1);
    let trials: u64 = args.next().and_then(|t| t.parse::<f64>().ok()).map_or(20_000, |t| t as u64);
    let grid = parse_snr_grid(&args.next().unwrap_or_else(|| "10:2:18".into()))?;
    let cfg = ChannelConfig::new(2, grid, trials, 42)?;
    let alphabet = qam_alphabet(4)?;
    for code in fig1_codes() {
        let r = run_sim(&code.build(&alphabet, true)?, &cfg)?;
        print!("{:>14}", r.code);
        for p in &r.points {
            print!("  {:>4} dB: {:.3e} ± {:.1e}", p.snr_db, p.ser, p.ci);
        }
        println!();
    }
    Ok(())
}
