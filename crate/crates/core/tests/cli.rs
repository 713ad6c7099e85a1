use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_envassist"))
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("configs")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_to(dir: &Path, file: &str, args: &[&str]) -> (i32, String) {
    let out = dir.join(file);
    let mut all: Vec<&str> = args.to_vec();
    let out_s = out.to_str().unwrap().to_owned();
    all.extend(["--out", &out_s]);
    let o = run(&all);
    let text = std::fs::read_to_string(&out).unwrap_or_default();
    (o.status.code().unwrap(), text)
}

fn rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

#[test]
fn roundtrip_recovers_every_branch() {
    let dir = tempfile::tempdir().unwrap();
    let (code, csv) = run_to(dir.path(), "rt.csv", &["roundtrip", "--steps", "50"]);
    assert_eq!(code, 0);
    let header = csv.lines().next().unwrap();
    assert_eq!(
        header,
        "t,re_c,im_c,p1,p2,bloch_x,bloch_y,bloch_z,dist_before,dist_after_branch1,dist_after_branch2"
    );
    let data = rows(&csv);
    assert_eq!(data.len(), 50);
    assert_eq!(data[0][0], 0.0);
    assert_eq!(data[0][8], 0.0);
    assert_eq!(data[0][10], 0.0);
    // outcome 1 never occurs at t = 0
    assert!(data[0][9].is_nan());
    for r in &data[1..] {
        assert!(r[9] < 1e-8 && r[10] < 1e-8);
    }
}

#[test]
fn csv_uses_seventeen_significant_digits() {
    let dir = tempfile::tempdir().unwrap();
    let (_, csv) = run_to(dir.path(), "s.csv", &["scan", "--steps", "3"]);
    let field = csv.lines().nth(2).unwrap().split(',').next().unwrap();
    let mantissa = field.split('e').next().unwrap().replace(['-', '.'], "");
    assert_eq!(mantissa.len(), 17, "{field}");
}

#[test]
fn identical_inputs_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sample.conf");
    std::fs::write(&cfg, "measure = sample\nt_steps = 64\n").unwrap();
    let c = cfg.to_str().unwrap();
    let (a_code, a) = run_to(
        dir.path(),
        "a.csv",
        &["roundtrip", "--config", c, "--seed", "11"],
    );
    let (_, b) = run_to(
        dir.path(),
        "b.csv",
        &["roundtrip", "--config", c, "--seed", "11"],
    );
    let (_, other) = run_to(
        dir.path(),
        "c.csv",
        &["roundtrip", "--config", c, "--seed", "12"],
    );
    assert_eq!(a_code, 0);
    assert_eq!(a, b);
    assert_ne!(a, other);
    let (_, f1) = run_to(dir.path(), "f1.csv", &["fig4", "--steps", "40"]);
    let (_, f2) = run_to(dir.path(), "f2.csv", &["fig4", "--steps", "40"]);
    assert_eq!(f1, f2);
}

#[test]
fn fig4_reports_crossing_and_zero_start() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f.csv");
    let o = run(&[
        "fig4",
        "--config",
        config("fig4.conf").to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let summary = String::from_utf8_lossy(&o.stderr);
    assert!(summary.contains("crossing found"), "{summary}");
    let data = rows(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(data.len(), 400);
    assert!(data[0][1..].iter().all(|&d| d == 0.0));
}

#[test]
fn fig4_rejects_pure_environment() {
    let o = run(&["fig4", "--w", "1", "--steps", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("roundtrip"));
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.conf");
    std::fs::write(&bad, "t_steps = 0\n").unwrap();
    assert_eq!(
        run(&["scan", "--config", bad.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    std::fs::write(&bad, "unknown_key = 1\n").unwrap();
    assert_eq!(
        run(&["scan", "--config", bad.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["scan", "--config", "/nonexistent/x.conf"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["mixed-scan", "--w", "1.5"]).status.code(), Some(2));
    assert_eq!(run(&["not-a-mode"]).status.code(), Some(2));
}

#[test]
fn empty_regime_exits_three() {
    let o = run(&["check-appendix", "--steps", "5"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn broken_coupling_form_fails_symmetry() {
    let dir = tempfile::tempdir().unwrap();
    let (code, report) = run_to(
        dir.path(),
        "n.jsonl",
        &[
            "check-appendix",
            "--config",
            config("negative-control.conf").to_str().unwrap(),
        ],
    );
    assert_eq!(code, 1);
    let first: serde_json::Value = serde_json::from_str(report.lines().next().unwrap()).unwrap();
    assert_eq!(first["name"], "overlap_symmetry");
    assert_eq!(first["pass"], false);
}

#[test]
fn regime_report_structure() {
    // The closed form for the mirrored-protocol distance does not match the
    // simulated value (about 0.59 against 0.18 for ρ01 = 1/2, w = 0.9), so the
    // default run exits 1 with every other check passing.
    let dir = tempfile::tempdir().unwrap();
    let (code, report) = run_to(
        dir.path(),
        "a.jsonl",
        &[
            "check-appendix",
            "--config",
            config("check-appendix.conf").to_str().unwrap(),
        ],
    );
    assert_eq!(code, 1);
    let records: Vec<serde_json::Value> = report
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert!(records.len() > 1);
    for r in &records {
        for key in ["name", "t", "value", "bound", "pass"] {
            assert!(r.get(key).is_some());
        }
        let failing = r["pass"] == false;
        assert_eq!(failing, r["name"] == "d_rhotildec", "{r}");
    }
}
