//! The `quatstbc` command line.
//!
//! Subcommands: `certify`, `codebook` (also `codes gen`), `mindet`, `sim`
//! (also `sim run`), `verify`, `presets`. Each run writes its outputs and a
//! `manifest.json` into the output directory (`--out`, else
//! `$QUATSTBC_OUT_DIR`, else `./quatstbc-out`). `--replay manifest.json`
//! reruns a manifest and compares output digests.
//!
//! Exit codes: 0 ok, 1 other error, 2 parse error, 3 certification (or
//! verification) failure, 4 budget exceeded.

mod manifest;

pub use manifest::{digest_mismatches, sha256_hex, Outputs, RunManifest};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::PathBuf;

use crate::algebras::{
    certify_biquaternion_division, certify_quaternion_auto, certify_quaternion_division, nonsquare_unit_classes,
    replay_certificate, Algebra, DivisionCertificate, QuaternionAlgebra,
};
use crate::codes::{
    box_alphabet, check_nonsingular_4x4, fig1_codes, gen_codebook_4x4, nvd_check, CodePreset,
    FloatCodebook, MinDetMode, DEFAULT_STAND_INS,
};
use crate::error::{Error, Result};
use crate::exactnum::{BaseField, GaussianRational};
use crate::sim::{check_ordering, parse_snr_grid, qam_alphabet, render_svg, run_sim, ChannelConfig, SnrMode};
use crate::valuation::Prime;

pub const OUT_DIR_ENV: &str = "QUATSTBC_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "quatstbc-out";

pub mod exit {
    pub const OK: i32 = 0;
    pub const ERROR: i32 = 1;
    pub const PARSE: i32 = 2;
    pub const CERTIFICATION: i32 = 3;
    pub const BUDGET: i32 = 4;
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::NotInField { .. } | Error::Json(_) => exit::PARSE,
        Error::Uncertified(_) => exit::CERTIFICATION,
        Error::BudgetExceeded { .. } => exit::BUDGET,
        _ => exit::ERROR,
    }
}

#[derive(Parser, Debug)]
#[command(name = "quatstbc", version, about = "Certify division (bi)quaternion algebras and build space-time block codes from them")]
pub struct Cli {
    /// Output directory (overrides $QUATSTBC_OUT_DIR).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Rerun the command recorded in a manifest and compare output digests.
    #[arg(long, value_name = "MANIFEST")]
    pub replay: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Subcommand, Debug, Serialize)]
pub enum Command {
    /// Decide whether an algebra is division; prints and saves a certificate.
    Certify(CertifyArgs),
    /// Generate a codebook (also `codes gen`).
    Codebook(CodebookArgs),
    /// Exhaustive minimum determinant and the NVD bound.
    Mindet(MindetArgs),
    /// Monte Carlo SER over Rayleigh fading (also `sim run`).
    Sim(SimArgs),
    /// Replay a certificate from its own data.
    Verify(VerifyArgs),
    /// List named codes and simulation presets.
    Presets,
}

#[derive(Args, Debug, Serialize)]
pub struct CertifyArgs {
    /// e.g. "(3,-1)/Q", "(1+2i,i)/Qi", "(a=1+2i,b=7;x,y)/Qi(x,y)", or "(7,b)/Qi" with --enumerate-b.
    pub algebra: String,
    /// Prime for Springer's theorem; without it candidate primes are tried.
    #[arg(long)]
    pub prime: Option<String>,
    /// Search box for an isotropic vector when no prime certifies.
    #[arg(long, default_value_t = 3)]
    pub search_bound: i64,
    /// List the non-square unit classes b modulo the prime.
    #[arg(long)]
    pub enumerate_b: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Format {
    Json,
    Flat,
}

#[derive(Args, Debug, Serialize)]
pub struct CodebookArgs {
    /// Algebra, or a named code: golden, br.
    #[arg(long)]
    pub algebra: String,
    /// qam4, qam16, box:B, or list:s1,s2,...
    #[arg(long, default_value = "qam4")]
    pub alphabet: String,
    /// Scale codewords by 1/sqrt(P).
    #[arg(long)]
    pub normalize: bool,
    /// Generate even if the algebra is not certified division.
    #[arg(long)]
    pub force: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_codewords: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
pub enum ModeArg {
    Codewords,
    Differences,
}

#[derive(Args, Debug, Serialize)]
pub struct MindetArgs {
    #[arg(long)]
    pub algebra: String,
    /// Box alphabet |Re|, |Im| ≤ B.
    #[arg(long, conflicts_with = "alphabet")]
    pub bound: Option<i64>,
    #[arg(long)]
    pub alphabet: Option<String>,
    #[arg(long, value_enum, default_value_t = ModeArg::Codewords)]
    pub mode: ModeArg,
    /// Refuse when more than this many square-tuples would be evaluated.
    #[arg(long, default_value_t = 1e10)]
    pub max_evaluations: f64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
pub enum SnrModeArg {
    Measured,
    Nominal,
}

#[derive(Args, Debug, Serialize)]
pub struct SimArgs {
    /// Codes to simulate: golden, br, or a quaternion algebra. Repeatable.
    #[arg(long)]
    pub code: Vec<String>,
    /// fig1-4qam or fig1-16qam: the six comparison codes.
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long, default_value = "qam4")]
    pub alphabet: String,
    /// start:step:stop or a comma list, in dB.
    #[arg(long, default_value = "6:2:20")]
    pub snr: String,
    /// Trials per SNR point (accepts 1e5).
    #[arg(long, default_value = "1e4")]
    pub trials: String,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 2)]
    pub n_rx: usize,
    #[arg(long, value_enum, default_value_t = SnrModeArg::Measured)]
    pub snr_mode: SnrModeArg,
    /// Skip the 1/sqrt(P) scaling.
    #[arg(long)]
    pub no_normalize: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    pub certificate: PathBuf,
}

/// Turns `codes gen …` into `codebook …` and `sim run …` into `sim …`.
pub fn normalize_aliases(mut args: Vec<String>) -> Vec<String> {
    // first positional, skipping the values of global options
    let mut pos = None;
    let mut k = 1;
    while k < args.len() {
        match args[k].as_str() {
            "--out" | "--replay" => k += 2,
            a if a.starts_with('-') => k += 1,
            _ => {
                pos = Some(k);
                break;
            }
        }
    }
    if let Some(p) = pos {
        match (args.get(p).map(String::as_str), args.get(p + 1).map(String::as_str)) {
            (Some("codes"), Some("gen")) => {
                args.splice(p..p + 2, ["codebook".to_string()]);
            }
            (Some("sim"), Some("run")) => {
                args.remove(p + 1);
            }
            _ => {}
        }
    }
    args
}

pub fn parse_alphabet(s: &str, base: BaseField) -> Result<Vec<GaussianRational>> {
    let s = s.trim();
    if let Some(m) = s.strip_prefix("qam") {
        let m = m.parse().map_err(|_| Error::Parse(format!("bad alphabet {s:?}")))?;
        return qam_alphabet(m).map_err(|e| Error::Parse(e.to_string()));
    }
    if let Some(b) = s.strip_prefix("box:") {
        let b: i64 = b.parse().map_err(|_| Error::Parse(format!("bad box bound {b:?}")))?;
        return Ok(box_alphabet(b, base == BaseField::GaussianRationals));
    }
    if let Some(list) = s.strip_prefix("list:") {
        let v = list.split(',').map(str::parse).collect::<Result<Vec<GaussianRational>>>()?;
        if v.is_empty() {
            return Err(Error::Parse("empty alphabet list".into()));
        }
        return Ok(v);
    }
    Err(Error::Parse(format!("alphabet {s:?}: expected qam4, qam16, box:B or list:...")))
}

fn parse_count(s: &str) -> Result<u64> {
    let v: f64 = s.parse().map_err(|_| Error::Parse(format!("bad count {s:?}")))?;
    if !(v >= 0.0 && v.fract() == 0.0 && v <= u64::MAX as f64) {
        return Err(Error::Parse(format!("count {s:?} must be a nonnegative integer")));
    }
    Ok(v as u64)
}

fn slug(s: &str) -> String {
    let mut out: String = s.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect();
    while out.contains("__") {
        out = out.replace("__", "_");
    }
    out.trim_matches('_').to_string()
}

/// State threaded through a command.
struct Run {
    out: Outputs,
    warnings: Vec<String>,
    seed: Option<u64>,
    exit: i32,
}

impl Run {
    fn say(&self, line: impl AsRef<str>) {
        println!("{}", line.as_ref());
    }
}

fn certify_algebra(alg: &Algebra, prime: Option<&str>, search_bound: i64) -> Result<DivisionCertificate> {
    match alg {
        Algebra::Quaternion(q) => match prime {
            Some(p) => certify_quaternion_division(q, &Prime::parse(p, q.base())?),
            None => certify_quaternion_auto(q, search_bound),
        },
        Algebra::Biquaternion(b) => certify_biquaternion_division(b),
    }
}

fn cmd_certify(a: &CertifyArgs, run: &mut Run) -> Result<()> {
    if a.enumerate_b {
        return cmd_enumerate_b(a, run);
    }
    let alg: Algebra = a.algebra.parse()?;
    let cert = certify_algebra(&alg, a.prime.as_deref(), a.search_bound)?;
    run.say(serde_json::to_string_pretty(&cert)?);
    run.out.write_json("certificate.json", &cert)?;
    run.say(format!("{}: {}", cert.algebra, cert.verdict));
    if !cert.is_division() {
        run.exit = exit::CERTIFICATION;
    }
    Ok(())
}

#[derive(Serialize)]
struct EnumeratedB {
    a: String,
    prime: String,
    count: usize,
    classes: Vec<String>,
    all_certified: bool,
}

fn cmd_enumerate_b(a: &CertifyArgs, run: &mut Run) -> Result<()> {
    let bad = || Error::Parse(format!("--enumerate-b expects \"(a,b)/F\", got {:?}", a.algebra));
    let compact: String = a.algebra.chars().filter(|c| !c.is_whitespace()).collect();
    let (body, field) = compact.rsplit_once('/').ok_or_else(bad)?;
    let inner = body.strip_prefix('(').and_then(|b| b.strip_suffix(",b)")).ok_or_else(bad)?;
    let template: Algebra = format!("({inner},1)/{field}").parse()?;
    let base = template.base();
    let a_elem: GaussianRational = inner.parse()?;
    let prime = Prime::parse(a.prime.as_deref().ok_or_else(|| Error::Parse("--enumerate-b needs --prime".into()))?, base)?;
    let classes = nonsquare_unit_classes(&prime)?;
    let mut all = true;
    for b in &classes {
        let q = QuaternionAlgebra::new(base, a_elem.clone(), b.clone())?;
        all &= certify_quaternion_division(&q, &prime)?.is_division();
    }
    let report = EnumeratedB {
        a: a_elem.to_string(),
        prime: prime.to_string(),
        count: classes.len(),
        classes: classes.iter().map(ToString::to_string).collect(),
        all_certified: all,
    };
    run.say(format!("{} non-square unit classes b mod {}:", report.count, report.prime));
    run.say(report.classes.join(" "));
    run.say(format!("({},b) certified division for every listed b: {all}", report.a));
    run.out.write_json("classes.json", &report)?;
    if !all {
        run.exit = exit::CERTIFICATION;
    }
    Ok(())
}

fn cmd_codebook(a: &CodebookArgs, run: &mut Run) -> Result<()> {
    let named = match a.algebra.trim().to_ascii_lowercase().as_str() {
        "golden" => Some(CodePreset::Golden),
        "br" => Some(CodePreset::Br),
        _ => None,
    };
    let cb: FloatCodebook = if let Some(preset) = named {
        let alphabet = parse_alphabet(&a.alphabet, BaseField::GaussianRationals)?;
        check_budget((alphabet.len() as u128).pow(4), a.max_codewords)?;
        preset.build(&alphabet, a.normalize)?
    } else {
        let alg: Algebra = a.algebra.parse()?;
        let alphabet = parse_alphabet(&a.alphabet, alg.base())?;
        let cert = match certify_algebra(&alg, None, 3) {
            Ok(c) => Some(c),
            Err(Error::Unsupported(_)) => None,
            Err(e) => return Err(e),
        };
        let certified = cert.as_ref().is_some_and(DivisionCertificate::is_division);
        if let Some(c) = &cert {
            run.out.write_json("certificate.json", c)?;
        }
        if !certified {
            let verdict = cert.map_or("unsupported".to_string(), |c| c.verdict.to_string());
            if !a.force {
                return Err(Error::Uncertified(format!("{alg} ({verdict})")));
            }
            let w = format!("generated with --force: {alg} is {verdict}, not certified division");
            eprintln!("warning: {w}");
            run.warnings.push(w);
        }
        match &alg {
            Algebra::Quaternion(q) => {
                check_budget((alphabet.len() as u128).pow(4), a.max_codewords)?;
                crate::codes::quaternion_codebook(q, &alphabet, a.normalize)?
            }
            Algebra::Biquaternion(b) => {
                check_budget((alphabet.len() as u128).saturating_pow(16), a.max_codewords)?;
                if b.has_formal_slots() {
                    run.warnings.push(format!(
                        "formal slots rendered with stand-ins (defaults x=e^{{{}i}}, y=e^{{{}i}})",
                        DEFAULT_STAND_INS.0, DEFAULT_STAND_INS.1
                    ));
                }
                let words: Vec<_> = gen_codebook_4x4(b, &alphabet)?.collect();
                let report = check_nonsingular_4x4(b, &alphabet, None)?;
                run.out.write_json("nonsingular.json", &report)?;
                FloatCodebook {
                    name: alg.to_string(),
                    dim: 4,
                    codewords: words.iter().map(|c| c.to_complex().iter().flatten().copied().collect()).collect(),
                    power_factor: 1.0,
                    symbols: Vec::new(),
                    notes: vec![crate::codes::BRANCH_NOTE.into()],
                }
            }
        }
    };
    match a.format {
        Format::Json => {
            run.out.write_json("codebook.json", &cb.to_json())?;
        }
        Format::Flat => {
            let mut bytes = Vec::new();
            cb.write_flat(&mut bytes)?;
            run.out.write("codebook.bin", &bytes)?;
            let mut meta = cb.to_json();
            meta.codewords.clear();
            run.out.write_json("codebook.meta.json", &meta)?;
        }
    }
    run.say(format!(
        "{}: {} codewords of size {}×{}, P = {}",
        cb.name,
        cb.len(),
        cb.dim,
        cb.dim,
        cb.power_factor
    ));
    Ok(())
}

fn check_budget(codewords: u128, limit: u64) -> Result<()> {
    if codewords > limit as u128 {
        return Err(Error::BudgetExceeded {
            codewords,
            limit: limit as u128,
        });
    }
    Ok(())
}

fn cmd_mindet(a: &MindetArgs, run: &mut Run) -> Result<()> {
    let alg = match a.algebra.parse::<Algebra>()? {
        Algebra::Quaternion(q) => q,
        Algebra::Biquaternion(_) => return Err(Error::Unsupported("mindet handles 2×2 quaternionic codes".into())),
    };
    let alphabet = match (&a.bound, &a.alphabet) {
        (Some(b), _) => box_alphabet(*b, alg.base() == BaseField::GaussianRationals),
        (None, Some(s)) => parse_alphabet(s, alg.base())?,
        (None, None) => box_alphabet(1, alg.base() == BaseField::GaussianRationals),
    };
    let mode = match a.mode {
        ModeArg::Codewords => MinDetMode::Codewords,
        ModeArg::Differences => MinDetMode::Differences,
    };
    let effective = match mode {
        MinDetMode::Codewords => alphabet.len(),
        MinDetMode::Differences => crate::codes::difference_alphabet(&alphabet).len(),
    } as f64;
    if effective.powi(4) > a.max_evaluations {
        return Err(Error::BudgetExceeded {
            codewords: effective.powi(4) as u128,
            limit: a.max_evaluations as u128,
        });
    }
    let report = nvd_check(&alg, &alphabet, mode)?;
    let value = report.min_det.value.as_ref().map_or("none (all codewords zero)".into(), ToString::to_string);
    run.say(format!("{alg}: δ_min = {value} over {} symbols ({mode:?})", alphabet.len()));
    if let Some(w) = &report.min_det.witness {
        run.say(format!("  witness (α,β,γ,δ) = ({}, {}, {}, {})", w[0], w[1], w[2], w[3]));
    }
    run.say(format!("  NVD bound 1/|b_d|² = {}: {}", report.bound, if report.holds { "holds" } else { "VIOLATED" }));
    run.out.write_json("mindet.json", &report)?;
    if !report.holds {
        run.exit = exit::CERTIFICATION;
    }
    Ok(())
}

#[derive(Serialize)]
struct OrderingRow {
    snr_db: f64,
    codes: Vec<String>,
    verdict: crate::sim::Ordering,
}

fn cmd_sim(a: &SimArgs, run: &mut Run) -> Result<()> {
    let mut codes: Vec<CodePreset> = a.code.iter().map(|c| c.parse()).collect::<Result<_>>()?;
    let mut alphabet_name = a.alphabet.clone();
    if let Some(p) = &a.preset {
        match p.as_str() {
            "fig1-4qam" => alphabet_name = "qam4".into(),
            "fig1-16qam" => alphabet_name = "qam16".into(),
            _ => return Err(Error::Parse(format!("unknown preset {p:?}; see `quatstbc presets`"))),
        }
        codes.extend(fig1_codes());
    }
    if codes.is_empty() {
        return Err(Error::Parse("give --code or --preset".into()));
    }
    let alphabet = parse_alphabet(&alphabet_name, BaseField::GaussianRationals)?;
    let mut cfg = ChannelConfig::new(a.n_rx, parse_snr_grid(&a.snr)?, parse_count(&a.trials)?, a.seed)?;
    cfg.snr_mode = match a.snr_mode {
        SnrModeArg::Measured => SnrMode::Measured,
        SnrModeArg::Nominal => SnrMode::Nominal,
    };
    run.seed = Some(a.seed);
    let mut results = Vec::new();
    for code in &codes {
        let cb = code.build(&alphabet, !a.no_normalize)?;
        if cb.len() > crate::sim::ML_BUDGET {
            return Err(Error::BudgetExceeded {
                codewords: cb.len() as u128,
                limit: crate::sim::ML_BUDGET as u128,
            });
        }
        let r = run_sim(&cb, &cfg)?;
        run.out.write(&format!("sim-{}.csv", slug(&r.code)), r.to_csv().as_bytes())?;
        let line: Vec<String> = r.points.iter().map(|p| format!("{} dB {:.3e}±{:.1e}", p.snr_db, p.ser, p.ci)).collect();
        run.say(format!("{:>14}: {}", r.code, line.join(", ")));
        results.push(r);
    }
    // the three-way comparison when all three codes are present
    let find = |name: &str| results.iter().find(|r| r.code == name);
    let mut ordering = Vec::new();
    if let (Some(g), Some(q), Some(br)) = (find("golden"), find("(1+2i,i)/Qi"), find("br")) {
        for &snr in &cfg.snr_db {
            let verdict = check_ordering(&[g, q, br], snr)?;
            run.say(format!("ordering golden < (1+2i,i) < br at {snr} dB: {verdict:?}"));
            ordering.push(OrderingRow {
                snr_db: snr,
                codes: vec![g.code.clone(), q.code.clone(), br.code.clone()],
                verdict,
            });
        }
    }
    #[derive(Serialize)]
    struct SimOut<'r> {
        config: &'r ChannelConfig,
        alphabet: &'r str,
        results: &'r [crate::sim::SimResult],
        ordering: Vec<OrderingRow>,
    }
    run.out.write_json(
        "sim.json",
        &SimOut {
            config: &cfg,
            alphabet: &alphabet_name,
            results: &results,
            ordering,
        },
    )?;
    run.out.write("sim.svg", render_svg(&results).as_bytes())?;
    Ok(())
}

fn cmd_verify(a: &VerifyArgs, run: &mut Run) -> Result<()> {
    let text = std::fs::read_to_string(&a.certificate)?;
    let cert: DivisionCertificate = serde_json::from_str(&text)?;
    let alg: Algebra = cert.algebra.parse()?;
    let ok = replay_certificate(&cert, &alg)?;
    run.say(format!("{}: {} certificate {}", cert.algebra, cert.verdict, if ok { "verified" } else { "does NOT replay" }));
    #[derive(Serialize)]
    struct Verified {
        algebra: String,
        verdict: String,
        replays: bool,
    }
    run.out.write_json(
        "verify.json",
        &Verified {
            algebra: cert.algebra.clone(),
            verdict: cert.verdict.to_string(),
            replays: ok,
        },
    )?;
    if !ok {
        run.exit = exit::CERTIFICATION;
    }
    Ok(())
}

#[derive(Serialize)]
struct PresetInfo {
    name: &'static str,
    description: String,
}

fn cmd_presets(run: &mut Run) -> Result<()> {
    let codes: Vec<String> = fig1_codes().iter().map(CodePreset::name).collect();
    let list = vec![
        PresetInfo {
            name: "fig1-4qam",
            description: format!("sim preset: {} at 4-QAM", codes.join(", ")),
        },
        PresetInfo {
            name: "fig1-16qam",
            description: format!("sim preset: {} at 16-QAM", codes.join(", ")),
        },
        PresetInfo {
            name: "golden",
            description: "Golden code, fixed numeric matrices with 1/sqrt(5)".into(),
        },
        PresetInfo {
            name: "br",
            description: "Belfiore-Rekaya code from (i,1+2i) with sqrt(1+2i) on both off-diagonals".into(),
        },
    ];
    for p in &list {
        run.say(format!("{:<12} {}", p.name, p.description));
    }
    run.out.write_json("presets.json", &list)?;
    Ok(())
}

fn dispatch(cmd: &Command, run: &mut Run) -> Result<()> {
    match cmd {
        Command::Certify(a) => cmd_certify(a, run),
        Command::Codebook(a) => cmd_codebook(a, run),
        Command::Mindet(a) => cmd_mindet(a, run),
        Command::Sim(a) => cmd_sim(a, run),
        Command::Verify(a) => cmd_verify(a, run),
        Command::Presets => cmd_presets(run),
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Certify(_) => "certify",
        Command::Codebook(_) => "codebook",
        Command::Mindet(_) => "mindet",
        Command::Sim(_) => "sim",
        Command::Verify(_) => "verify",
        Command::Presets => "presets",
    }
}

fn out_dir(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
}

/// Drops `--out X` / `--out=X` so manifests are location-independent.
fn strip_out(args: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip = false;
    for a in args {
        if skip {
            skip = false;
        } else if a == "--out" {
            skip = true;
        } else if !a.starts_with("--out=") {
            out.push(a.clone());
        }
    }
    out
}

/// Runs one command into `dir`, writing `manifest.json`; returns the
/// manifest.
pub fn execute(cmd: &Command, args: &[String], dir: PathBuf) -> Result<RunManifest> {
    let started = manifest::now();
    let mut run = Run {
        out: Outputs::new(&dir)?,
        warnings: Vec::new(),
        seed: None,
        exit: exit::OK,
    };
    let result = dispatch(cmd, &mut run);
    let exit_code = match &result {
        Ok(()) => run.exit,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(e)
        }
    };
    let m = RunManifest {
        command: command_name(cmd).into(),
        args: strip_out(args),
        parsed: serde_json::to_value(cmd)?,
        version: env!("CARGO_PKG_VERSION").into(),
        seed: run.seed,
        started,
        finished: manifest::now(),
        outputs: run.out.digests.clone(),
        warnings: run.warnings,
        exit_code,
    };
    let mut s = serde_json::to_string_pretty(&m)?;
    s.push('\n');
    std::fs::write(dir.join("manifest.json"), s)?;
    Ok(m)
}

fn replay(path: &PathBuf, dir: PathBuf) -> Result<i32> {
    let want: RunManifest = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    let mut argv = vec!["quatstbc".to_string()];
    argv.extend(want.args.iter().cloned());
    let cli = Cli::try_parse_from(normalize_aliases(argv)).map_err(|e| Error::Parse(e.to_string()))?;
    let cmd = cli
        .command
        .ok_or_else(|| Error::Parse("manifest records no command".into()))?;
    let got = execute(&cmd, &want.args, dir.join("replay"))?;
    let bad = digest_mismatches(&want, &got);
    if bad.is_empty() && got.exit_code == want.exit_code {
        println!("replay: {} outputs reproduced byte-for-byte", got.outputs.len());
        Ok(exit::OK)
    } else {
        println!("replay: mismatched outputs {bad:?} (exit {} vs {})", got.exit_code, want.exit_code);
        Ok(exit::CERTIFICATION)
    }
}

/// Entry point for the binary; returns the process exit code.
pub fn main() -> i32 {
    run_with_args(std::env::args().collect())
}

pub fn run_with_args(argv: Vec<String>) -> i32 {
    let argv = normalize_aliases(argv);
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit::PARSE } else { exit::OK };
        }
    };
    let dir = out_dir(cli.out);
    if let Some(path) = &cli.replay {
        return replay(path, dir).unwrap_or_else(|e| {
            eprintln!("error: {e}");
            exit_code(&e)
        });
    }
    let Some(cmd) = cli.command else {
        eprintln!("error: no subcommand given; try --help");
        return exit::PARSE;
    };
    match execute(&cmd, &argv[1..], dir) {
        Ok(m) => m.exit_code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
