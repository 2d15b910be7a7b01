use std::process::{Command, Output};

fn twomode(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twomode"))
        .args(args)
        .env_remove("TWOMODE_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

#[test]
fn phase_sweep_writes_provenance_and_rows() {
    let o = twomode(&["phase", "--sweep", "ratio:0.9:1.2:4"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    assert!(csv.starts_with("# twomode "));
    assert!(csv.contains("# config-sha256: "));
    assert!(csv.contains("ratio,n_alpha,S_analytic,S_numeric,gap,converged,degenerate"));
    let rows = data_rows(&csv);
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[2][1], "6");
    assert_eq!(rows[1][6], "1", "ratio 1 is a degenerate boundary");
}

#[test]
fn output_is_identical_across_job_counts() {
    let a = twomode(&["sbf", "--sweep", "ratio:0.8:1.4:9", "--jobs", "1"]);
    let b = twomode(&["sbf", "--sweep", "ratio:0.8:1.4:9", "--jobs", "4"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn jobs_flag_overrides_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_twomode"))
        .args(["sbf", "--sweep", "ratio:0.8:1.0:3", "--jobs", "2"])
        .env("TWOMODE_JOBS", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let o = Command::new(env!("CARGO_BIN_EXE_twomode"))
        .args(["sbf", "--sweep", "ratio:0.8:1.0:3"])
        .env("TWOMODE_JOBS", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = std::env::temp_dir().join(format!("twomode-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.toml");
    std::fs::write(&cfg, "[model]\nlambda = 0.2\ng = 0.02\n\n[sweep]\nsweep = \"ratio:1.1:1.3:3\"\n").unwrap();
    let out = dir.join("out.csv");
    let o = twomode(&["sbf", "--config", cfg.to_str().unwrap(), "--g", "0.05", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.contains("# config: lambda = 0.2"));
    assert!(csv.contains("# config: g = 0.05"));
    assert_eq!(data_rows(&csv).len(), 3);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn config_errors_exit_with_two() {
    for args in [
        vec!["phase", "--lambda", "0.1"],
        vec!["sbf", "--sweep", "bogus:0:1:3"],
        vec!["sbf", "--sweep", "ratio:0:1:1"],
        vec!["sbf", "--g", "-1"],
        vec!["dynamics", "--sweep", "ratio:0.5:1:3"],
        vec!["sbf", "--with-fock-oracle"],
        vec!["sbf", "--config", "/nonexistent/twomode.toml"],
    ] {
        let o = twomode(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn unconverged_rows_exit_with_three() {
    let o = twomode(&["sbf", "--cutoff", "3", "--sweep", "ratio:1.2:1.5:3"]);
    assert_eq!(o.status.code(), Some(3));
    let rows = data_rows(&stdout(&o));
    assert_eq!(rows.len(), 3, "the table is still written");
    assert!(rows.iter().all(|r| r.last().unwrap() == "0"));
}

#[test]
fn dynamics_with_oracle_tracks_gaussian_route() {
    let o = twomode(&["dynamics", "--time-points", "3", "--with-fock-oracle"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    assert!(csv.contains("t,S_gaussian,S_fock_oracle,fock_converged,"));
    for r in data_rows(&csv) {
        let g: f64 = r[1].parse().unwrap();
        let f: f64 = r[2].parse().unwrap();
        assert!((g - f).abs() < 1e-4, "{g} vs {f}");
        assert_eq!(r[3], "1");
    }
}

#[test]
fn time_sweep_and_bits() {
    let o = twomode(&["dynamics", "--sweep", "t:0:5:6", "--bits"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    assert!(csv.contains("# entropy unit: bits"));
    let rows = data_rows(&csv);
    assert_eq!(rows.len(), 6);
    assert_eq!(rows[5][0].parse::<f64>().unwrap(), 5.0);
}

#[test]
fn plot_script_references_csv() {
    let dir = std::env::temp_dir().join(format!("twomode-plot-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let csv = dir.join("fig.csv");
    let py = dir.join("fig.py");
    let o = twomode(&[
        "sbf",
        "--sweep",
        "ratio:0.8:1.2:3",
        "--out",
        csv.to_str().unwrap(),
        "--plot-script",
        py.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let script = std::fs::read_to_string(&py).unwrap();
    assert!(script.contains("fig.csv"));
    assert!(script.contains("S_mean_field"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn validate_quick_writes_report() {
    let path = std::env::temp_dir().join(format!("twomode-report-{}.json", std::process::id()));
    let o = twomode(&["validate", "--level", "quick", "--report", path.to_str().unwrap()]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    let (summary, checks) = text.trim_end().lines().collect::<Vec<_>>().split_last().map(|(a, b)| (*a, b.to_vec())).unwrap();
    assert!(checks.iter().all(|l| l.starts_with("PASS ")));
    assert_eq!(summary, format!("all {} checks passed", checks.len()));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["level"], "quick");
    assert!(report["checks"].as_array().unwrap().len() > 40);
    std::fs::remove_file(&path).ok();
}
