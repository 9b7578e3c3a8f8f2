//! Monte Carlo symbol-error simulation over quasi-static Rayleigh fading
//! with exhaustive maximum-likelihood decoding.
//!
//! Every trial draws from its own ChaCha stream keyed by `(seed, SNR
//! index)` with the trial index as stream id, and error counts are
//! integers, so results are bit-identical for any number of workers.

mod plot;

pub use plot::render_svg;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::FloatCodebook;
use crate::error::{Error, Result};
use crate::exactnum::GaussianRational;

/// Largest codebook the exhaustive decoder accepts.
pub const ML_BUDGET: usize = 1_000_000;

/// `{±1 ± i}` or the `{±1, ±3}²` grid, unnormalised.
pub fn qam_alphabet(m: u32) -> Result<Vec<GaussianRational>> {
    let levels: &[i64] = match m {
        4 => &[-1, 1],
        16 => &[-3, -1, 1, 3],
        _ => return Err(Error::InvalidConfig(format!("QAM order must be 4 or 16, got {m}"))),
    };
    Ok(levels
        .iter()
        .flat_map(|&re| levels.iter().map(move |&im| GaussianRational::from_ints(re, im)))
        .collect())
}

/// How the signal energy in the SNR is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum SnrMode {
    /// Mean received energy per receive antenna per channel use, measured
    /// on the codebook: `E‖X‖_F² / T` for unit-variance fading.
    #[default]
    Measured,
    /// Assume unit transmit power per antenna: `E_s = n_tx`.
    Nominal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SnrMeta {
    pub mode: SnrMode,
    pub formula: String,
    pub signal_energy: f64,
}

pub const SNR_FORMULA: &str = "noise_var = E_s / 10^(snr_db/10); E_s = mean received energy per receive antenna per channel use; noise_var per complex dimension";

impl SnrMeta {
    pub fn for_codebook(cb: &FloatCodebook, mode: SnrMode) -> Self {
        let signal_energy = match mode {
            SnrMode::Measured => cb.mean_energy() * cb.dim as f64,
            SnrMode::Nominal => cb.dim as f64,
        };
        SnrMeta {
            mode,
            formula: SNR_FORMULA.into(),
            signal_energy,
        }
    }
}

/// Noise variance per complex dimension for a given SNR and signal energy;
/// `+∞` dB gives zero noise.
pub fn snr_scale(snr_db: f64, signal_energy: f64) -> f64 {
    if snr_db == f64::INFINITY {
        0.0
    } else {
        signal_energy / 10f64.powf(snr_db / 10.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelConfig {
    pub n_rx: usize,
    pub snr_db: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    #[serde(default)]
    pub snr_mode: SnrMode,
}

impl ChannelConfig {
    pub fn new(n_rx: usize, snr_db: Vec<f64>, trials: u64, seed: u64) -> Result<Self> {
        let cfg = ChannelConfig {
            n_rx,
            snr_db,
            trials,
            seed,
            snr_mode: SnrMode::Measured,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if self.n_rx == 0 {
            return Err(Error::InvalidConfig("need at least one receive antenna".into()));
        }
        if self.snr_db.iter().any(|s| s.is_nan() || *s == f64::NEG_INFINITY) {
            return Err(Error::InvalidConfig("SNR grid must be finite or +inf".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimPoint {
    pub snr_db: f64,
    pub noise_var: f64,
    pub ser: f64,
    pub bler: f64,
    /// 95% half-width for the SER, from per-trial error fractions.
    pub ci: f64,
    pub bler_ci: f64,
    pub trials: u64,
    pub symbol_errors: u64,
    pub block_errors: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub code: String,
    pub n_tx: usize,
    pub n_rx: usize,
    pub codewords: usize,
    pub symbols_per_codeword: usize,
    pub seed: u64,
    pub snr: SnrMeta,
    pub points: Vec<SimPoint>,
}

impl SimResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("snr_db,ser,bler,ci,trials\n");
        for p in &self.points {
            out.push_str(&format!("{},{:e},{:e},{:e},{}\n", p.snr_db, p.ser, p.bler, p.ci, p.trials));
        }
        out
    }

    pub fn point(&self, snr_db: f64) -> Option<&SimPoint> {
        self.points.iter().find(|p| p.snr_db == snr_db)
    }
}

/// Integer tallies, summed in any order.
#[derive(Clone, Copy, Default, Debug)]
struct Tally {
    sym: u64,
    sym_sq: u64,
    blocks: u64,
}

impl std::ops::Add for Tally {
    type Output = Tally;
    fn add(self, o: Tally) -> Tally {
        Tally {
            sym: self.sym + o.sym,
            sym_sq: self.sym_sq + o.sym_sq,
            blocks: self.blocks + o.blocks,
        }
    }
}

fn trial_rng(seed: u64, point: usize, trial: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(point as u64).to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(trial);
    rng
}

fn cgauss(rng: &mut ChaCha8Rng, var: f64) -> Complex64 {
    let s = (var / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * s, im * s)
}

/// Symbols per codeword for SER; codebooks without symbols count blocks.
fn symbol_count(cb: &FloatCodebook) -> usize {
    cb.symbols.first().map_or(1, Vec::len).max(1)
}

fn symbol_errors(cb: &FloatCodebook, sent: usize, got: usize) -> u64 {
    if sent == got {
        return 0;
    }
    match (cb.symbols.get(sent), cb.symbols.get(got)) {
        (Some(a), Some(b)) => a.iter().zip(b).filter(|(x, y)| x != y).count() as u64,
        _ => 1,
    }
}

/// One transmission: returns `(sent, decoded)`.
fn one_trial(cb: &FloatCodebook, n_rx: usize, noise_var: f64, rng: &mut ChaCha8Rng) -> (usize, usize) {
    let n = cb.dim;
    let sent = rng.gen_range(0..cb.len());
    let h: Vec<Complex64> = (0..n_rx * n).map(|_| cgauss(rng, 1.0)).collect();
    let x = &cb.codewords[sent];
    // Y = H X + N, n_rx × T with T = n
    let mut y = vec![Complex64::default(); n_rx * n];
    for r in 0..n_rx {
        for t in 0..n {
            let mut acc = Complex64::default();
            for k in 0..n {
                acc += h[r * n + k] * x[k * n + t];
            }
            y[r * n + t] = acc;
        }
    }
    if noise_var > 0.0 {
        for v in y.iter_mut() {
            *v += cgauss(rng, noise_var);
        }
    }
    let mut best = (f64::INFINITY, 0);
    for (idx, c) in cb.codewords.iter().enumerate() {
        let mut dist = 0.0;
        for r in 0..n_rx {
            for t in 0..n {
                let mut acc = Complex64::default();
                for k in 0..n {
                    acc += h[r * n + k] * c[k * n + t];
                }
                dist += (y[r * n + t] - acc).norm_sqr();
            }
        }
        // strict comparison keeps the lowest index on ties
        if dist < best.0 {
            best = (dist, idx);
        }
    }
    (sent, best.1)
}

pub fn run_sim(cb: &FloatCodebook, cfg: &ChannelConfig) -> Result<SimResult> {
    cfg.validate()?;
    if cb.is_empty() {
        return Err(Error::InvalidConfig("empty codebook".into()));
    }
    if cb.len() > ML_BUDGET {
        return Err(Error::BudgetExceeded {
            codewords: cb.len() as u128,
            limit: ML_BUDGET as u128,
        });
    }
    let snr = SnrMeta::for_codebook(cb, cfg.snr_mode);
    let per = symbol_count(cb) as u64;
    let mut points = Vec::with_capacity(cfg.snr_db.len());
    for (pi, &snr_db) in cfg.snr_db.iter().enumerate() {
        let noise_var = snr_scale(snr_db, snr.signal_energy);
        let tally = (0..cfg.trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = trial_rng(cfg.seed, pi, t);
                let (sent, got) = one_trial(cb, cfg.n_rx, noise_var, &mut rng);
                let e = symbol_errors(cb, sent, got);
                Tally {
                    sym: e,
                    sym_sq: e * e,
                    blocks: u64::from(sent != got),
                }
            })
            .reduce(Tally::default, |a, b| a + b);
        let n = cfg.trials as f64;
        let ser = tally.sym as f64 / (n * per as f64);
        let bler = tally.blocks as f64 / n;
        // per-trial fraction f = e / per: var = E f² − (E f)²
        let mean_sq = tally.sym_sq as f64 / (n * (per * per) as f64);
        let var = if cfg.trials > 1 {
            ((mean_sq - ser * ser) * n / (n - 1.0)).max(0.0)
        } else {
            0.0
        };
        let bvar = if cfg.trials > 1 {
            (bler * (1.0 - bler) * n / (n - 1.0)).max(0.0)
        } else {
            0.0
        };
        points.push(SimPoint {
            snr_db,
            noise_var,
            ser,
            bler,
            ci: 1.96 * (var / n).sqrt(),
            bler_ci: 1.96 * (bvar / n).sqrt(),
            trials: cfg.trials,
            symbol_errors: tally.sym,
            block_errors: tally.blocks,
        });
    }
    Ok(SimResult {
        code: cb.name.clone(),
        n_tx: cb.dim,
        n_rx: cfg.n_rx,
        codewords: cb.len(),
        symbols_per_codeword: per as usize,
        seed: cfg.seed,
        snr,
        points,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ordering {
    /// Strictly increasing SER with non-overlapping intervals.
    Holds,
    /// Some adjacent pair is reversed with non-overlapping intervals.
    Violated,
    /// Neither: overlapping intervals somewhere.
    Inconclusive,
}

/// Checks `SER(results[0]) < SER(results[1]) < …` at `snr_db`.
pub fn check_ordering(results: &[&SimResult], snr_db: f64) -> Result<Ordering> {
    let pts: Vec<&SimPoint> = results
        .iter()
        .map(|r| {
            r.point(snr_db)
                .ok_or_else(|| Error::InvalidConfig(format!("{} has no point at {snr_db} dB", r.code)))
        })
        .collect::<Result<_>>()?;
    let mut verdict = Ordering::Holds;
    for w in pts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if lo.ser + lo.ci < hi.ser - hi.ci {
            continue;
        }
        if hi.ser + hi.ci < lo.ser - lo.ci {
            return Ok(Ordering::Violated);
        }
        verdict = Ordering::Inconclusive;
    }
    Ok(verdict)
}

/// Parses `start:step:stop` (inclusive) or a comma-separated list.
pub fn parse_snr_grid(s: &str) -> Result<Vec<f64>> {
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| Error::Parse(format!("bad SNR value {t:?}")))
    };
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [a, step, b] => {
            let (a, step, b) = (num(a)?, num(step)?, num(b)?);
            if !(step > 0.0) || b < a {
                return Err(Error::Parse(format!("SNR range {s:?} must have step > 0 and start ≤ stop")));
            }
            let n = ((b - a) / step + 1e-9).floor() as usize;
            Ok((0..=n).map(|k| a + step * k as f64).collect())
        }
        [_] => s.split(',').map(num).collect(),
        _ => Err(Error::Parse(format!("SNR grid {s:?} must be start:step:stop or a list"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{fig1_codes, gaussian_algebra, quaternion_codebook, CodePreset};

    fn qam4_code() -> FloatCodebook {
        quaternion_codebook(&gaussian_algebra((1, 2), (0, 1)), &qam_alphabet(4).unwrap(), true).unwrap()
    }

    #[test]
    fn alphabets() {
        let q4 = qam_alphabet(4).unwrap();
        assert_eq!(q4.len(), 4);
        let e: f64 = q4.iter().map(|z| z.to_complex().norm_sqr()).sum::<f64>() / 4.0;
        assert_eq!(e, 2.0);
        assert_eq!(qam_alphabet(16).unwrap().len(), 16);
        assert!(qam_alphabet(8).is_err());
    }

    #[test]
    fn snr_scaling() {
        assert_eq!(snr_scale(0.0, 3.5), 3.5);
        assert!((snr_scale(10.0, 3.5) - 0.35).abs() < 1e-15);
        assert_eq!(snr_scale(f64::INFINITY, 3.5), 0.0);
        let meta = SnrMeta::for_codebook(&qam4_code(), SnrMode::Measured);
        let back: SnrMeta = serde_json::from_str(&serde_json::to_string(&meta).unwrap()).unwrap();
        assert_eq!(back, meta);
        // normalised 4-QAM codebooks carry energy 2 per entry, 2 antennas
        assert!((meta.signal_energy - 4.0).abs() < 1e-9);
    }

    #[test]
    fn zero_trials_rejected() {
        assert!(ChannelConfig::new(2, vec![10.0], 0, 1).is_err());
    }

    #[test]
    fn noiseless_decoding_is_perfect() {
        for code in fig1_codes() {
            let cb = code.build(&qam_alphabet(4).unwrap(), true).unwrap();
            let cfg = ChannelConfig::new(2, vec![f64::INFINITY], 300, 7).unwrap();
            let r = run_sim(&cb, &cfg).unwrap();
            assert_eq!(r.points[0].block_errors, 0, "{}", code.name());
        }
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let cb = qam4_code();
        let cfg = ChannelConfig::new(2, vec![6.0, 10.0], 400, 42).unwrap();
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| run_sim(&cb, &cfg)).unwrap();
        let b = four.install(|| run_sim(&cb, &cfg)).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert!(a.points.iter().all(|p| (0.0..=1.0).contains(&p.ser) && p.ci >= 0.0));
        assert!(a.points[0].ser >= a.points[1].ser);
    }

    #[test]
    fn budget_refusal() {
        let cb = FloatCodebook {
            name: "big".into(),
            dim: 1,
            codewords: vec![vec![Complex64::default()]; ML_BUDGET + 1],
            power_factor: 1.0,
            symbols: vec![],
            notes: vec![],
        };
        let cfg = ChannelConfig::new(1, vec![0.0], 1, 0).unwrap();
        assert!(matches!(run_sim(&cb, &cfg), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn ordering_verdicts() {
        let mk = |ser: f64, ci: f64| SimResult {
            code: String::new(),
            n_tx: 2,
            n_rx: 2,
            codewords: 1,
            symbols_per_codeword: 1,
            seed: 0,
            snr: SnrMeta { mode: SnrMode::Measured, formula: String::new(), signal_energy: 1.0 },
            points: vec![SimPoint { snr_db: 1.0, noise_var: 1.0, ser, bler: ser, ci, bler_ci: ci, trials: 1, symbol_errors: 0, block_errors: 0 }],
        };
        let (a, b, c) = (mk(0.1, 0.01), mk(0.2, 0.01), mk(0.205, 0.01));
        assert_eq!(check_ordering(&[&a, &b], 1.0).unwrap(), Ordering::Holds);
        assert_eq!(check_ordering(&[&b, &a], 1.0).unwrap(), Ordering::Violated);
        assert_eq!(check_ordering(&[&b, &c], 1.0).unwrap(), Ordering::Inconclusive);
        assert!(check_ordering(&[&a], 2.0).is_err());
    }

    #[test]
    fn snr_grids() {
        assert_eq!(parse_snr_grid("6:2:12").unwrap(), vec![6.0, 8.0, 10.0, 12.0]);
        assert_eq!(parse_snr_grid("14,16").unwrap(), vec![14.0, 16.0]);
        assert!(parse_snr_grid("6:0:12").is_err());
        assert!(parse_snr_grid("a").is_err());
    }

    #[test]
    fn csv_header() {
        let cb = CodePreset::Golden.build(&qam_alphabet(4).unwrap(), true).unwrap();
        let r = run_sim(&cb, &ChannelConfig::new(2, vec![20.0], 10, 1).unwrap()).unwrap();
        let csv = r.to_csv();
        assert!(csv.starts_with("snr_db,ser,bler,ci,trials\n20,"));
    }
}
