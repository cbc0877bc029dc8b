//! Black-box tests of the command-line interface: output contracts, exit
//! codes, and agreement between the state path and the fidelity path.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fbounds"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary should spawn")
}

fn run_ok(args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "args {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("stdout should be UTF-8")
}

fn run_json(args: &[&str]) -> Value {
    serde_json::from_str(&run_ok(args)).expect("stdout should be JSON")
}

fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("fbounds-cli-{}-{name}", std::process::id()))
}

#[test]
fn bounds_on_noisy_w_state_match_closed_form() {
    let v = run_json(&["bounds", "--phi", "w:3", "--state", "wnoise:w:3:p=0.8"]);
    assert_eq!(v["fidelity"].as_f64().unwrap(), 0.825);
    assert_eq!(v["gme"]["s"].as_f64().unwrap(), 1.2375);
    assert_eq!(v["gme"]["bounds"]["cren"]["value"].as_f64().unwrap(), 0.2375);
    assert!(!v["gme"]["bounds"]["cren"]["clamped"].as_bool().unwrap());
    assert_eq!(v["coherence"]["m"].as_u64().unwrap(), 8);
}

#[test]
fn fidelity_path_agrees_with_state_path() {
    let via_state = run_json(&[
        "bounds",
        "--phi",
        "ghz:3",
        "--state",
        "wnoise:ghz:3:p=0.9",
        "--full-precision",
    ]);
    let f = via_state["fidelity"].as_f64().unwrap();
    let via_fidelity = run_json(&[
        "bounds",
        "--phi",
        "ghz:3",
        "--fidelity",
        &format!("{f}"),
        "--full-precision",
    ]);
    for key in ["cren", "concurrence", "gconcurrence", "geometric"] {
        let a = via_state["gme"]["bounds"][key]["value"].as_f64().unwrap();
        let b = via_fidelity["gme"]["bounds"][key]["value"].as_f64().unwrap();
        assert!((a - b).abs() <= 1e-12, "{key}: {a} vs {b}");
    }
}

#[test]
fn measure_selection_prunes_output() {
    let v = run_json(&["bounds", "--phi", "ghz:3", "--fidelity", "0.9", "--measures", "gme"]);
    assert!(v.get("coherence").is_none());
    assert!(v.get("gme").is_some());
    let v = run_json(&[
        "bounds", "--phi", "ghz:3", "--fidelity", "0.9", "--measures", "coherence",
    ]);
    assert!(v.get("gme").is_none());
    assert!(v.get("coherence").is_some());
}

#[test]
fn sigma_produces_an_interval_on_s() {
    let v = run_json(&[
        "bounds", "--phi", "ghz:3", "--fidelity", "0.9", "--sigma", "0.05", "--full-precision",
    ]);
    let lo = v["gme"]["s_interval"][0].as_f64().unwrap();
    let hi = v["gme"]["s_interval"][1].as_f64().unwrap();
    let s = v["gme"]["s"].as_f64().unwrap();
    assert!(lo <= s && s <= hi);
    assert_eq!(lo, 1.7);
    assert_eq!(hi, 1.9);
}

#[test]
fn csv_mode_emits_flat_rows() {
    let out = run_ok(&["bounds", "--phi", "w:3", "--state", "wnoise:w:3:p=0.8", "--csv"]);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("quantity,value"));
    assert!(out.contains("\ncren,0.2375\n"));
    assert!(out.contains("\nm_prime,2\n"));
    assert!(out.contains("\ncoh_l1,"));
}

#[test]
fn profile_reports_cut_table() {
    let v = run_json(&["profile", "--phi", "w:3"]);
    assert_eq!(v["num_cuts"].as_u64().unwrap(), 3);
    assert_eq!(v["m_prime"].as_u64().unwrap(), 2);
    assert_eq!(v["s1_prime"].as_f64().unwrap(), 0.666667);
    assert_eq!(v["cuts"].as_array().unwrap().len(), 3);
    assert_eq!(v["cuts"][0]["parties"][0].as_u64().unwrap(), 0);

    let v = run_json(&["profile", "--phi", "ghz:5", "--top-k", "2"]);
    assert_eq!(v["num_cuts"].as_u64().unwrap(), 15);
    assert_eq!(v["cuts"].as_array().unwrap().len(), 2);
}

#[test]
fn repro_table_matches_published_values() {
    let out = run_ok(&["repro", "table1"]);
    assert!(out.contains("cren,0.42,0.288,0.22,0.18,0.146"));
    assert!(out.contains("gconcurrence,0,0,0,0,0"));
    assert!(out.contains("coh_formation,0.0106182,0.00165732,0.00102663,0.000715459,0.000141407"));
}

#[test]
fn repro_noise_grid_has_the_right_threshold() {
    let out = run_ok(&["repro", "fig3"]);
    assert!(out.contains("\n0.61,0.65875,0\n"));
    assert!(out.contains("\n0.62,0.6675,0.00125\n"));
    assert!(out.ends_with("\n1,1,0.5\n"));
}

#[test]
fn repro_cluster_sweep_endpoints() {
    let out = run_ok(&["repro", "fig4"]);
    assert!(out.contains("\n4,0.9176,0.8352,"));
    assert!(out.contains("\n12,0.5544,0.1088,"));
}

#[test]
fn verify_passes_on_an_honest_state() {
    let v = run_json(&[
        "verify", "--state", "wnoise:ghz:3:p=0.9", "--phi", "ghz:3", "--trials", "50",
    ]);
    assert!(v["ok"].as_bool().unwrap());
    assert_eq!(v["checks"].as_array().unwrap().len(), 7);
    for chk in v["checks"].as_array().unwrap() {
        assert!(chk["ok"].as_bool().unwrap(), "{chk}");
        assert!(chk["lower_bound"].as_f64().unwrap() <= chk["oracle_upper"].as_f64().unwrap() + 1e-9);
    }
}

#[test]
fn verify_fault_injection_exits_three() {
    let out = run(&[
        "verify", "--state", "wnoise:ghz:3:p=0.9", "--phi", "ghz:3", "--trials", "50",
        "--corrupt-s1",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(!v["ok"].as_bool().unwrap());
}

#[test]
fn state_make_roundtrips_through_a_file() {
    let path = scratch("roundtrip.json");
    let path_str = path.to_str().unwrap();
    run_ok(&["state", "make", "wnoise:ghz:3:p=0.7", "-o", path_str]);
    let via_file = run_json(&["bounds", "--phi", "ghz:3", "--state", path_str, "--full-precision"]);
    let via_spec = run_json(&[
        "bounds", "--phi", "ghz:3", "--state", "wnoise:ghz:3:p=0.7", "--full-precision",
    ]);
    assert_eq!(via_file, via_spec);
    std::fs::remove_file(&path).ok();
}

#[test]
fn state_make_writes_json_to_stdout() {
    let out = run_ok(&["state", "make", "ghz:3"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["kind"].as_str().unwrap(), "pure");
    assert_eq!(v["dims"].as_array().unwrap().len(), 3);
}

#[test]
fn malformed_inputs_exit_one() {
    let path = scratch("garbage.json");
    std::fs::write(&path, b"{ not json").unwrap();
    let out = run(&["bounds", "--phi", "ghz:3", "--state", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
    assert!(out.stdout.is_empty());
    std::fs::remove_file(&path).ok();

    let out = run(&["bounds", "--phi", "nosuch:3", "--fidelity", "0.5"]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["bounds", "--phi", "ghz:3", "--fidelity", "1.5"]);
    assert_eq!(out.status.code(), Some(1));

    // Mutually exclusive inputs and missing inputs are both usage errors.
    let out = run(&["bounds", "--phi", "ghz:3", "--fidelity", "0.9", "--state", "ghz:3"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["bounds", "--phi", "ghz:3"]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["verify", "--state", "ghz:3", "--phi", "ghz:4"]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&[
        "bounds", "--phi", "ghz:3", "--fidelity", "0.9", "--basis", "fourier",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!out.stdout.is_empty());

    let out = run(&["bounds", "--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn full_precision_extends_the_default_rendering() {
    let rounded = run_json(&["bounds", "--phi", "ghz:6", "--fidelity", "0.71"]);
    let full = run_json(&["bounds", "--phi", "ghz:6", "--fidelity", "0.71", "--full-precision"]);
    let a = rounded["gme"]["bounds"]["concurrence"]["value"].as_f64().unwrap();
    let b = full["gme"]["bounds"]["concurrence"]["value"].as_f64().unwrap();
    assert_eq!(a, 0.0793725);
    assert!((a - b).abs() < 1e-6 && a != b);
}
