use std::process::{Command, Output};

fn twrc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twrc"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn every_table_starts_with_schema_line() {
    let runs: &[&[&str]] = &[
        &["threshold", "--rate-max", "0.5"],
        &["placement", "--points", "9"],
        &["eebe", "--k", "1,5", "--be-max", "0.5"],
        &["sinr-error", "--be-max", "0.5"],
        &["rate-limit"],
        &["compare", "--rate-max", "0.5"],
        &["simulate", "--k", "3"],
        &["e2e-noise", "--pairs", "3"],
    ];
    for args in runs {
        let o = twrc(args);
        assert!(
            o.status.success(),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        assert_eq!(stdout(&o).lines().next(), Some("# schema=1"), "{args:?}");
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["compare", "--rate-step", "0.5"];
    assert_eq!(twrc(&args).stdout, twrc(&args).stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(
        twrc(&["threshold", "--rate-min", "2", "--rate-max", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(twrc(&["threshold", "--rate-step", "0"]).status.code(), Some(2));
    assert_eq!(twrc(&["simulate", "--k", "7"]).status.code(), Some(2));
    assert_eq!(
        twrc(&["simulate", "--k", "5", "--rate", "7"]).status.code(),
        Some(3)
    );
    assert_eq!(twrc(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn simulate_summary_and_trace() {
    let o = twrc(&["simulate", "--k", "5", "--pairs", "2", "--rate", "1"]);
    assert!(o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("total_slots=10"), "{err}");
    let out = stdout(&o);
    let mut lines = out.lines().skip(1);
    assert_eq!(
        lines.next(),
        Some("slot,node,role,counterpart,signal_J,interference_J,noise_J,rate_bpcu")
    );
    // Relays receiving an uplink do not decode and carry no budget.
    let rates: Vec<f64> = lines
        .filter(|l| l.contains(",rx,") && !l.ends_with(','))
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert!(!rates.is_empty());
    assert!(rates.iter().all(|r| (r - 1.0).abs() < 1e-9), "{rates:?}");
}

#[test]
fn infeasible_cells_marked() {
    let o = twrc(&["eebe", "--k", "5", "--be-min", "2.9", "--be-max", "3.0"]);
    let out = stdout(&o);
    assert!(out.lines().skip(2).all(|l| l.ends_with(",inf")), "{out}");
}

#[test]
fn files_written() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    let svg = dir.path().join("t.svg");
    let o = twrc(&[
        "threshold",
        "--out-csv",
        csv.to_str().unwrap(),
        "--out-svg",
        svg.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(&csv)
        .unwrap()
        .starts_with("# schema=1\nrate,alpha_threshold\n"));
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<svg"));
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("phy.toml");
    std::fs::write(&cfg, "alpha = 3.0\n").unwrap();
    let from_file = twrc(&["rate-limit", "--config", cfg.to_str().unwrap()]);
    let from_flag = twrc(&["rate-limit", "--alpha", "3.0"]);
    assert!(from_file.status.success());
    assert_eq!(from_file.stdout, from_flag.stdout);
    assert_ne!(from_file.stdout, twrc(&["rate-limit"]).stdout);
}
