use std::process::{Command, Output};

use thermoq::collective::{ladder_fi_rate, CollectiveBath};
use thermoq::spectral::{bath_response, OhmicDensity};
use thermoq::strategies::{optimize_strategy, StrategyKind};

fn thermoq(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_thermoq"));
    c.args(args).env_remove("THERMOQ_THREADS");
    for (k, v) in envs {
        c.env(k, v);
    }
    c.output().unwrap()
}

fn csv_rows(out: &Output) -> (Vec<String>, Vec<Vec<String>>) {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let mut r = csv::Reader::from_reader(out.stdout.as_slice());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|x| x.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn strategy_table_reproduces_library() {
    let (header, rows) = csv_rows(&thermoq(&["strategy-table"], &[]));
    assert_eq!(header, ["strategy", "r", "a_opt", "t_opt"]);
    assert_eq!(rows.len(), 3);
    for (row, kind) in rows.iter().zip(StrategyKind::ALL) {
        let lib = optimize_strategy(kind).unwrap();
        assert_eq!(row[0], kind.as_str());
        assert_eq!(num(&row[1]).to_bits(), lib.r_coefficient.to_bits());
        assert_eq!(num(&row[2]).to_bits(), lib.a_opt.to_bits());
        assert_eq!(num(&row[3]).to_bits(), lib.t_opt.to_bits());
    }
    assert!((num(&rows[0][1]) - 4.0 / std::f64::consts::E).abs() < 1e-6);
}

#[test]
fn lamb_scan_matches_library_bit_for_bit() {
    let out = thermoq(
        &[
            "bound-lamb",
            "--w",
            "1",
            "--omega",
            "5",
            "--alpha",
            "1",
            "--T-range",
            "0.01:2:log:100",
        ],
        &[],
    );
    let (header, rows) = csv_rows(&out);
    assert_eq!(
        &header[..5],
        ["w", "T", "bound_total", "bound_rates_only", "bound_lamb_only"]
    );
    assert_eq!(rows.len(), 100);
    let d = OhmicDensity::new(1.0, 1.0, 5.0).unwrap();
    for row in rows.iter().step_by(9) {
        let t = num(&row[1]);
        let b = bath_response(1.0, t, &d).unwrap();
        let ds = b.lamb_derivatives().0;
        let lib = thermoq::bounds::qubit_bound_opt_gauge(b.gamma_plus, b.gamma_minus, b.dgamma_dt, ds).unwrap();
        assert_eq!(num(&row[2]).to_bits(), lib.rate.to_bits());
    }
    // The Lamb contribution dominates at low temperature.
    assert!(num(&rows[0][4]) > 10.0 * num(&rows[0][3]));
}

#[test]
fn collective_scan_matches_ladder() {
    let (_, rows) = csv_rows(&thermoq(
        &["collective-scan", "--N", "1,5,10,20", "--gdt-range", "1e-4:1:log:60"],
        &[],
    ));
    assert_eq!(rows.len(), 240);
    let bath = CollectiveBath::new(OhmicDensity::new(1.0, 1.0, 10.0).unwrap(), 1.0).unwrap();
    let rates = bath.ladder_rates(1.0).unwrap();
    for row in rows.iter().step_by(17) {
        let n: usize = row[0].parse().unwrap();
        let prep: usize = row[1].parse().unwrap();
        let lib = ladder_fi_rate(n, &rates, prep, num(&row[2])).unwrap();
        assert_eq!(num(&row[3]).to_bits(), lib.to_bits());
    }
}

#[test]
fn output_is_byte_identical_across_runs_and_thread_counts() {
    let args = [
        "autonomous-scan",
        "--N",
        "10,50",
        "--b-range",
        "1e-3:3:log:50",
        "--w",
        "0,1",
    ];
    let a = thermoq(&args, &[("THERMOQ_THREADS", "1")]);
    let b = thermoq(&args, &[("THERMOQ_THREADS", "4")]);
    let c = thermoq(&args, &[]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    assert!(!a.stdout.contains(&b'\r'));
}

#[test]
fn config_file_with_flag_override_and_json_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    let out = dir.path().join("out.json");
    std::fs::write(
        &cfg,
        r#"{"w": 2.0, "T-range": "0.5:1:lin:3", "alpha": 0.5, "format": "json"}"#,
    )
    .unwrap();
    let o = thermoq(
        &[
            "bath-table",
            "--config",
            cfg.to_str().unwrap(),
            "--w",
            "1.5",
            "-o",
            out.to_str().unwrap(),
        ],
        &[],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["meta"]["command"], "bath-table");
    assert_eq!(v["meta"]["config"]["w"], "1.5");
    assert_eq!(v["meta"]["config"]["alpha"], "0.5");
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0][0], 1.5);
    assert_eq!(rows[2][1], 1.0);
    let cols: Vec<&str> = v["columns"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_str().unwrap())
        .collect();
    assert_eq!(cols.len(), rows[0].as_array().unwrap().len());
}

#[test]
fn validation_failures_exit_one_with_error_object() {
    for args in [
        vec!["bound-lamb", "--alpha", "0"],
        vec!["bound-qubit", "--w", "7"],
        vec!["bound-qubit", "--T", "-1"],
        vec!["collective-scan", "--N", "2.5"],
        vec!["bound-qubit", "--T", "1:2:cubic:3"],
        vec!["no-such-command"],
    ] {
        let o = thermoq(&args, &[]);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(o.stdout.is_empty());
        let v: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
        assert_eq!(v["error"]["kind"], "validation", "{args:?}");
    }
    let o = thermoq(&["strategy-table"], &[("THERMOQ_THREADS", "zero")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn missing_config_file_is_reported() {
    let o = thermoq(&["strategy-table", "--config", "/nonexistent/run.json"], &[]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(v["error"]["kind"], "io");
}
