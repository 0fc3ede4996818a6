//! Black-box tests of the command-line surface: round trips, determinism
//! across worker counts, and exit codes.

use std::path::Path;
use std::process::Command;

use tempfile::tempdir;

fn cosparse() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cosparse"))
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn pipeline_round_trip() {
    let dir = tempdir().unwrap();
    let dict = dir.path().join("dict.csv");
    let signals = dir.path().join("signals.jsonl");
    let results = dir.path().join("results.csv");
    let profile = dir.path().join("profile.json");
    let curve = dir.path().join("curve.csv");

    let ok = |mut cmd: Command| {
        let status = cmd.status().unwrap();
        assert!(status.success(), "{cmd:?} exited {status:?}");
    };

    let mut c = cosparse();
    c.args(["gen-dict", "--family", "dif", "--d", "9"])
        .arg("--out")
        .arg(&dict);
    ok(c);
    assert!(dict.with_file_name("dict.csv.meta.json").exists());

    let mut c = cosparse();
    c.args([
        "gen-signals", "--r", "2", "--n", "50", "--sigma-ratio", "0.05", "--seed", "9",
    ])
    .arg("--dict")
    .arg(&dict)
    .arg("--out")
    .arg(&signals);
    ok(c);
    assert_eq!(read(&signals).lines().count(), 50);

    let mut c = cosparse();
    c.args(["denoise", "--r", "2"])
        .arg("--dict")
        .arg(&dict)
        .arg("--signals")
        .arg(&signals)
        .arg("--out")
        .arg(&results);
    ok(c);
    let body = read(&results);
    assert!(body.starts_with("trial,ell,success,isnr_db,oracle_isnr_db,zmin"));
    assert_eq!(body.lines().count(), 51);

    let mut c = cosparse();
    c.args(["profile", "--r", "2"])
        .arg("--dict")
        .arg(&dict)
        .arg("--out")
        .arg(&profile);
    ok(c);
    let parsed: serde_json::Value = serde_json::from_str(&read(&profile)).unwrap();
    assert_eq!(parsed["spark"], 3);
    assert_eq!(parsed["mode"], "exact");

    let mut c = cosparse();
    c.args([
        "bounds", "--ratio", "0.01", "--snr-grid", "6:74:5", "--variant", "marginal",
    ])
    .arg("--profile")
    .arg(&profile)
    .arg("--out")
    .arg(&curve);
    ok(c);
    let body = read(&curve);
    assert!(body.starts_with("snr_db,ratio,bound,variant"));
    assert_eq!(body.lines().count(), 6);
    assert!(body.contains(",marginal"));
}

#[test]
fn results_are_identical_across_worker_counts() {
    let dir = tempdir().unwrap();
    let dict = dir.path().join("dict.csv");
    cosparse()
        .args(["gen-dict", "--family", "mix", "--d", "9", "--seed", "3"])
        .arg("--out")
        .arg(&dict)
        .status()
        .unwrap();
    let mut outputs = Vec::new();
    for workers in ["1", "4"] {
        let out = dir.path().join(format!("signals_{workers}.jsonl"));
        let status = cosparse()
            .args([
                "gen-signals", "--r", "2", "--n", "200", "--sigma-ratio", "0.1", "--seed", "5",
                "--workers", workers,
            ])
            .arg("--dict")
            .arg(&dict)
            .arg("--out")
            .arg(&out)
            .status()
            .unwrap();
        assert!(status.success());
        outputs.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1], "worker count changed the output bytes");
}

#[test]
fn reproduce_writes_figure_data_and_manifest() {
    let dir = tempdir().unwrap();
    let status = cosparse()
        .args(["reproduce", "beta-curve-thm2", "--quick"])
        .arg("--out")
        .arg(dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    let manifest: serde_json::Value =
        serde_json::from_str(&read(&dir.path().join("manifest.json"))).unwrap();
    assert_eq!(manifest["figure"], "beta-curve-thm2");
    assert!(manifest["wall_time_s"].as_f64().unwrap() >= 0.0);
    let opt = read(&dir.path().join("beta_curve_thm2_opt.csv"));
    let bound: f64 = opt.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!((bound - 0.744).abs() <= 0.001);
}

#[test]
fn configuration_errors_exit_2() {
    // unknown family
    let code = cosparse()
        .args(["gen-dict", "--family", "wavelet", "--d", "9", "--out", "/tmp/x.csv"])
        .output()
        .unwrap()
        .status
        .code();
    assert_eq!(code, Some(2));
    // missing --out
    let code = cosparse()
        .args(["gen-dict", "--family", "dif", "--d", "9"])
        .output()
        .unwrap()
        .status
        .code();
    assert_eq!(code, Some(2));
    // non-square d for the difference operator
    let code = cosparse()
        .args(["gen-dict", "--family", "dif", "--d", "8", "--out", "/tmp/x.csv"])
        .output()
        .unwrap()
        .status
        .code();
    assert_eq!(code, Some(2));
}

#[test]
fn budget_overruns_exit_3() {
    let dir = tempdir().unwrap();
    let dict = dir.path().join("big.csv");
    cosparse()
        .args(["gen-dict", "--family", "rand", "--d", "100", "--p", "200"])
        .arg("--out")
        .arg(&dict)
        .status()
        .unwrap();
    // exact enumeration at d=100 blows the subset budget
    let code = cosparse()
        .args(["profile", "--r", "2", "--mode", "exact"])
        .arg("--dict")
        .arg(&dict)
        .arg("--out")
        .arg(dir.path().join("p.json"))
        .output()
        .unwrap()
        .status
        .code();
    assert_eq!(code, Some(3));
}
