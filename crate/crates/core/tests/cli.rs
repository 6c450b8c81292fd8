//! End-to-end tests of the command-line interface.

use std::fs;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_compressed-opt"))
}

const RUN_CONFIG: &str = r#"{
  "problem": {"kind": "logistic", "n_clients": 3, "d": 6, "samples_per_client": 10,
              "heterogeneity": 0.2, "sigma2": 0.0, "lambda_reg": 1e-6, "seed": 11},
  "method": {"name": "adef"},
  "compressor": {"kind": "topk", "k": 2},
  "schedule": {"kind": "experiment_gamma", "gamma": 0.02},
  "rounds": 60,
  "seeds": [4]
}"#;

#[test]
fn missing_config_exits_nonzero_and_names_the_path() {
    let out = bin()
        .args(["run", "--config", "definitely-missing.conf", "--out", "/tmp/unused"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("definitely-missing.conf"),
        "stderr was: {stderr}"
    );
}

#[test]
fn malformed_config_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    fs::write(
        &cfg,
        r#"{"problem": {"kind": "logistic", "n_clients": 2, "d": true, "seed": 1},
            "method": {"name": "adef"}, "rounds": 5, "seeds": [1]}"#,
    )
    .unwrap();
    let out = bin()
        .args(["run", "--config"])
        .arg(&cfg)
        .args(["--out"])
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("problem.d"), "stderr was: {stderr}");
}

#[test]
fn verify_suite_exits_zero_when_green() {
    let out = bin()
        .args(["verify", "--suite", "contractivity", "--seed", "7"])
        .output()
        .unwrap();
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "stdout: {stdout}");
    assert!(stdout.lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn unknown_suite_is_an_error() {
    let out = bin()
        .args(["verify", "--suite", "nope"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown suite"));
}

#[test]
fn run_then_reports_emit_parseable_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(&cfg, RUN_CONFIG).unwrap();
    let run_dir = dir.path().join("out");

    let out = bin()
        .args(["run", "--config"])
        .arg(&cfg)
        .args(["--out"])
        .arg(&run_dir)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );

    // slope report: valid CSV with a slope column
    let out = bin()
        .args(["report", "--kind", "slope"])
        .arg(&run_dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    let mut reader = csv::Reader::from_reader(stdout.as_bytes());
    let headers = reader.headers().unwrap().clone();
    assert!(headers.iter().any(|h| h == "slope"));
    let rows: Vec<_> = reader.records().collect::<Result<_, _>>().unwrap();
    assert!(rows.len() >= 2, "per-seed and mean series expected");

    // weights report parses as CSV too
    let out = bin()
        .args(["report", "--kind", "weights"])
        .arg(&run_dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    let mut reader = csv::Reader::from_reader(stdout.as_bytes());
    assert_eq!(
        reader.headers().unwrap().iter().collect::<Vec<_>>(),
        vec!["t", "w", "w_prime"]
    );
    assert_eq!(reader.records().count(), 60);
}

#[test]
fn grid_command_prints_selection() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("grid.json");
    let config = RUN_CONFIG.replace(
        r#""schedule": {"kind": "experiment_gamma", "gamma": 0.02},"#,
        r#""schedule": {"kind": "experiment_gamma"}, "grid": [0.01, 0.02],"#,
    );
    fs::write(&cfg, config.replace("\"rounds\": 60", "\"rounds\": 20")).unwrap();
    let out = bin()
        .args(["grid", "--config"])
        .arg(&cfg)
        .args(["--out"])
        .arg(dir.path().join("gout"))
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stdout).contains("selected ="));
}

#[test]
fn speedup_report_across_client_counts() {
    let dir = tempfile::tempdir().unwrap();
    let parent = dir.path().join("sweep");
    for n in [2usize, 4] {
        let cfg_text = RUN_CONFIG
            .replace("\"n_clients\": 3", &format!("\"n_clients\": {n}"))
            .replace("\"sigma2\": 0.0", "\"sigma2\": 25.0")
            .replace("\"rounds\": 60", "\"rounds\": 1500")
            .replace("\"gamma\": 0.02", "\"gamma\": 0.0001");
        let cfg = dir.path().join(format!("n{n}.json"));
        fs::write(&cfg, cfg_text).unwrap();
        let out = bin()
            .args(["run", "--config"])
            .arg(&cfg)
            .args(["--out"])
            .arg(parent.join(format!("n{n}")))
            .output()
            .unwrap();
        assert!(out.status.success());
    }
    let out = bin()
        .args(["report", "--kind", "speedup"])
        .arg(&parent)
        .output()
        .unwrap();
    let stdout = String::from_utf8_lossy(&out.stdout);
    let stderr = String::from_utf8_lossy(&out.stderr);
    if out.status.success() {
        assert!(stdout.starts_with("n,stabilized_error"), "stdout: {stdout}");
    } else {
        // short runs may legitimately not plateau; the error must say so
        assert!(stderr.contains("plateau"), "stderr: {stderr}");
    }
}
