use std::fs;
use std::process::Command;

fn jumpcount() -> Command {
    Command::new(env!("CARGO_BIN_EXE_jumpcount"))
}

fn write_config(dir: &std::path::Path, body: &str) -> std::path::PathBuf {
    let p = dir.join("run.json");
    fs::write(&p, body).unwrap();
    p
}

#[test]
fn m_zero_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"measure": {"class": "example1"}, "m": 0}"#);
    let out = jumpcount()
        .args(["discretize", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("`m`"), "{stderr}");
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"measure": {"class": "example2", "lambda": 1, "eps": 0.5, "big_m": 2}, "m_list": [2, 4]}"#,
    );
    let target = dir.path().join("env-out");
    let status = jumpcount()
        .args(["bound", "--config"])
        .arg(&cfg)
        .env("JUMPCOUNT_OUT", &target)
        .status()
        .unwrap();
    assert!(status.success());
    let table = fs::read_to_string(target.join("bound.csv")).unwrap();
    assert_eq!(table.lines().count(), 3);
    for line in table.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let d: f64 = cols[1].parse().unwrap();
        assert!(d.is_finite() && d > 0.0);
    }
}

#[test]
fn example3_bound_columns_are_finite() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"measure": {"class": "example3", "alpha": 0.5, "c1": 1, "c2": 1, "lambda1": 2, "lambda2": 1.5,
            "eps": 1, "big_m": 2}, "m_list": [2, 4, 8], "region": {"policy": "full_line"}}"#,
    );
    let out = dir.path().join("out");
    let status = jumpcount()
        .args(["bound", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let table = fs::read_to_string(out.join("bound.csv")).unwrap();
    for line in table.lines().skip(1) {
        for col in line.split(',').take(5) {
            let v: f64 = col.parse().unwrap();
            assert!(v.is_finite(), "{line}");
        }
    }
}

#[test]
fn verify_with_equal_measures_passes_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"measure": {"class": "custom", "dominating": {"kind": "gaussian", "sigma": 1}, "ratio": {"kind": "one"}},
            "m_list": [2, 3], "replications": 3000, "resolution": 2048, "seed": 5}"#,
    );
    let out = dir.path().join("out");
    let status = jumpcount()
        .args(["verify", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("verify.json")).unwrap()).unwrap();
    for rec in report["results"].as_array().unwrap() {
        assert_eq!(rec["lemma"]["martingale"]["mean"].as_f64(), Some(1.0));
        assert_eq!(rec["lemma"]["abs_deviation"]["mean"].as_f64(), Some(0.0));
    }
    // the embedded config reproduces the run
    let embedded = serde_json::to_string(&report["config"]).unwrap();
    let cfg2 = write_config(dir.path(), &embedded);
    let out2 = dir.path().join("out2");
    assert!(jumpcount()
        .args(["verify", "--config"])
        .arg(&cfg2)
        .arg("--out")
        .arg(&out2)
        .status()
        .unwrap()
        .success());
    assert_eq!(
        fs::read(out.join("verify.json")).unwrap(),
        fs::read(out2.join("verify.json")).unwrap()
    );
}
