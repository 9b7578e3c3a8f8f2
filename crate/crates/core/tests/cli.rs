use std::path::Path;

use quatstbc::cli::{exit, run_with_args, RunManifest};
use quatstbc::codes::FloatCodebook;

fn run(out: &Path, args: &[&str]) -> i32 {
    let mut argv = vec!["quatstbc".to_string(), "--out".into(), out.display().to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    run_with_args(argv)
}

fn manifest(dir: &Path) -> RunManifest {
    serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn certify_writes_certificate_and_verify_replays_it() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("cert");
    assert_eq!(run(&out, &["certify", "(3,-1)/Q", "--prime", "3"]), exit::OK);
    let cert = json(&out.join("certificate.json"));
    assert_eq!(cert["verdict"], "division");
    let m = manifest(&out);
    assert_eq!(m.command, "certify");
    assert!(m.outputs.contains_key("certificate.json"));

    let v = tmp.path().join("verify");
    let cert_path = out.join("certificate.json");
    assert_eq!(run(&v, &["verify", cert_path.to_str().unwrap()]), exit::OK);

    // tampering with the recorded algebra must not verify
    let text = std::fs::read_to_string(&cert_path).unwrap().replace("(3,-1)", "(3,1)");
    let bad = tmp.path().join("bad.json");
    std::fs::write(&bad, text).unwrap();
    assert_ne!(run(&tmp.path().join("v2"), &["verify", bad.to_str().unwrap()]), exit::OK);
}

#[test]
fn uncertified_algebras_exit_3() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(run(tmp.path(), &["certify", "(2,8;x,y)/Q(x,y)"]), exit::CERTIFICATION);
    assert_eq!(run(tmp.path(), &["certify", "(-1,1)/Q"]), exit::CERTIFICATION);
}

#[test]
fn parse_errors_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(run(tmp.path(), &["certify", "(3,-1"]), exit::PARSE);
    assert_eq!(run(tmp.path(), &["frobnicate"]), exit::PARSE);
    assert_eq!(run(tmp.path(), &["codebook", "--algebra", "br", "--alphabet", "qam5"]), exit::PARSE);
}

#[test]
fn enumerate_b_lists_24_classes() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(
        run(tmp.path(), &["certify", "(7,b)/Qi", "--prime", "7", "--enumerate-b"]),
        exit::OK
    );
    let classes = json(&tmp.path().join("classes.json"));
    let n = classes.as_array().map(Vec::len).or_else(|| classes["classes"].as_array().map(Vec::len));
    assert_eq!(n, Some(24));
}

#[test]
fn codes_gen_alias_builds_normalized_br() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(run(tmp.path(), &["codes", "gen", "--algebra", "br", "--normalize"]), exit::OK);
    let text = std::fs::read_to_string(tmp.path().join("codebook.json")).unwrap();
    let cb = FloatCodebook::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
    assert_eq!(cb.len(), 256);
    assert!((cb.power_factor - (1.0 + 5f64.sqrt())).abs() < 1e-12);
    assert!((cb.mean_energy() - 2.0).abs() < 1e-9);
    assert_eq!(manifest(tmp.path()).command, "codebook");
}

#[test]
fn codebook_refuses_uncertified_unless_forced() {
    let tmp = tempfile::tempdir().unwrap();
    let refused = tmp.path().join("refused");
    assert_eq!(run(&refused, &["codebook", "--algebra", "(1+i,i)/Qi"]), exit::CERTIFICATION);
    assert!(!refused.join("codebook.json").exists());

    let forced = tmp.path().join("forced");
    assert_eq!(run(&forced, &["codebook", "--algebra", "(1+i,i)/Qi", "--force"]), exit::OK);
    assert!(forced.join("codebook.json").exists());
    assert!(!manifest(&forced).warnings.is_empty());
}

#[test]
fn flat_format_round_trips() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(
        run(tmp.path(), &["codebook", "--algebra", "golden", "--format", "flat"]),
        exit::OK
    );
    let bytes = std::fs::read(tmp.path().join("codebook.bin")).unwrap();
    // 256 codewords × 4 entries × (re, im) × 8 bytes
    assert_eq!(bytes.len(), 256 * 4 * 2 * 8);
    assert!(tmp.path().join("codebook.meta.json").exists());
}

#[test]
fn biquaternion_codebook_over_budget_exits_4() {
    let tmp = tempfile::tempdir().unwrap();
    let code = run(
        tmp.path(),
        &["codebook", "--algebra", "(1+2i,7;x,y)/Qi(x,y)", "--alphabet", "qam4"],
    );
    assert_eq!(code, exit::BUDGET);
}

#[test]
fn mindet_reports_nvd() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(run(tmp.path(), &["mindet", "--algebra", "(1+2i,i)/Qi", "--bound", "1"]), exit::OK);
    let r = json(&tmp.path().join("mindet.json"));
    assert_eq!(r["holds"], true);
    assert_eq!(r["min_det"]["value"], "1");

    let bad = tmp.path().join("bad");
    assert_eq!(run(&bad, &["mindet", "--algebra", "(1+i,i)/Qi", "--bound", "2"]), exit::CERTIFICATION);
}

#[test]
fn sim_replays_byte_for_byte() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("sim");
    let args = ["sim", "run", "--code", "golden", "--code", "(1+2i,i)/Qi", "--snr", "10,14", "--trials", "300"];
    assert_eq!(run(&out, &args), exit::OK);
    let m = manifest(&out);
    assert_eq!(m.seed, Some(42));
    assert!(m.outputs.contains_key("sim.json"));
    assert!(m.outputs.contains_key("sim.svg"));
    let csvs = m.outputs.keys().filter(|k| k.ends_with(".csv")).count();
    assert_eq!(csvs, 2);
    let csv = std::fs::read_to_string(out.join("sim-golden.csv")).unwrap();
    assert!(csv.starts_with("snr_db,ser,bler,ci,trials\n"));

    let replay_root = tmp.path().join("again");
    let code = run_with_args(vec![
        "quatstbc".into(),
        "--out".into(),
        replay_root.display().to_string(),
        "--replay".into(),
        out.join("manifest.json").display().to_string(),
    ]);
    assert_eq!(code, exit::OK);
    assert_eq!(manifest(&replay_root.join("replay")).outputs, m.outputs);
}

#[test]
fn presets_lists_fig1_codes() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(run(tmp.path(), &["presets"]), exit::OK);
    let text = std::fs::read_to_string(tmp.path().join("presets.json")).unwrap();
    for name in ["golden", "br", "(1+2i,i)"] {
        assert!(text.contains(name), "{name} missing");
    }
}
