use std::process::{Command, Output};

use envcap::experiments::{b2_thetas, linspace};
use envcap::output::format_float;
use envcap::{run_experiment, Cell, Experiment, ExperimentConfig};
use envcap_core::canonical::{canonical_unitary, swap_pow, CanonicalParams};
use envcap_core::capacity::{
    a1_spec, b1_spec, b2_spec, q_h_tensor, swap_gamma_eh_max, two_copy_coherent_info,
    OptimizerOptions,
};
use envcap_core::degradability::{bloch_grid, classify_env, SYMMETRIC_TOL};
use envcap_core::linalg::PureState;

fn envcap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_envcap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Header and data rows of a CSV document, skipping `#` metadata lines.
fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let body: String = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect();
    let mut rdr = csv::Reader::from_reader(body.as_bytes());
    let header = rdr.headers().unwrap().iter().map(str::to_owned).collect();
    let rows = rdr
        .records()
        .map(|r| r.unwrap().iter().map(str::to_owned).collect())
        .collect();
    (header, rows)
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn a1_row_at_half() {
    let o = envcap(&["a1", "--grid", "101", "--no-timestamp"]);
    assert!(o.status.success());
    let (header, rows) = csv_rows(&stdout(&o));
    assert_eq!(header, ["gamma", "t", "coherent_info"]);
    assert_eq!(rows.len(), 303);
    let row = rows
        .iter()
        .find(|r| num(&r[0]) == 0.5 && num(&r[1]) == 0.0)
        .unwrap();
    assert!((num(&row[2]) - 0.5488).abs() <= 1e-3);
}

#[test]
fn eh_swap_vanishes_at_point_nine() {
    let o = envcap(&[
        "eh_swap",
        "--grid",
        "65",
        "--params",
        "0.3,0.9",
        "--no-timestamp",
    ]);
    assert!(o.status.success());
    let (header, rows) = csv_rows(&stdout(&o));
    assert_eq!(header, ["gamma", "qeh_tensor", "qh_tensor"]);
    let row = rows.iter().find(|r| num(&r[0]) == 0.9).unwrap();
    assert_eq!(num(&row[1]), 0.0);
    assert_eq!(num(&row[2]), 0.0);
    let low = rows.iter().find(|r| num(&r[0]) == 0.3).unwrap();
    assert!(num(&low[1]) > num(&low[2]) && num(&low[2]) > 0.0);
}

#[test]
fn region_scan_contains_sqrt_swap_point() {
    let o = envcap(&["region_scan", "--grid", "5", "--no-timestamp"]);
    assert!(o.status.success());
    let (header, rows) = csv_rows(&stdout(&o));
    assert_eq!(
        header,
        [
            "alpha_x",
            "alpha_y",
            "alpha_z",
            "in_A",
            "in_D",
            "universal_numeric"
        ]
    );
    assert_eq!(rows.len(), 35);
    let row = rows
        .iter()
        .find(|r| r[..3].iter().all(|x| num(x) == 0.25))
        .unwrap();
    assert_eq!(&row[3..], ["true", "true", "true"]);
    for r in &rows {
        assert_eq!(r[3], r[5], "{r:?}");
    }
}

#[test]
fn locate_examples() {
    let a1 = envcap(&["locate", "a1"]);
    assert!(a1.status.success());
    let root = num(stdout(&a1).trim());
    assert!((root - 0.6649).abs() <= 5e-4);
    assert_eq!(stdout(&a1).trim().split('.').nth(1).unwrap().len(), 6);

    let eh = envcap(&["locate", "eh_swap", "--grid", "65"]);
    assert!(eh.status.success());
    assert!((num(stdout(&eh).trim()) - 0.7662).abs() <= 1e-2);

    let none = envcap(&["locate", "a1", "--bracket", "0.0", "0.4"]);
    assert_eq!(none.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&none.stderr).contains("no sign change"));
}

#[test]
fn exit_codes() {
    assert_eq!(envcap(&["bogus"]).status.code(), Some(2));
    assert_eq!(envcap(&[]).status.code(), Some(2));
    assert_eq!(envcap(&["a1", "--grid", "1"]).status.code(), Some(2));
    assert_eq!(envcap(&["a1", "--tol", "0"]).status.code(), Some(2));
    assert_eq!(envcap(&["a1", "--frobnicate"]).status.code(), Some(2));
    assert_eq!(envcap(&["qhtens"]).status.code(), Some(2));
    assert_eq!(
        envcap(&["classify", "--params", "0.5,x,0"]).status.code(),
        Some(2)
    );
    assert_eq!(envcap(&["locate", "b1"]).status.code(), Some(2));
    assert_eq!(envcap(&["locate"]).status.code(), Some(2));
    assert_eq!(
        envcap(&["a1", "--out", "/nonexistent-dir/out.csv"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        envcap(&["a1", "--config", "/nonexistent-dir/cfg.json"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(envcap(&["--help"]).status.code(), Some(0));
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        &["a3", "--grid", "11", "--no-timestamp"][..],
        &[
            "eh_swap",
            "--grid",
            "17",
            "--params",
            "0.2,0.6",
            "--no-timestamp",
        ],
        &[
            "qhtens",
            "--params",
            "0.3,0.2,0.1",
            "--grid",
            "16",
            "--no-timestamp",
        ],
    ] {
        let a = envcap(args);
        let b = envcap(args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn metadata_header() {
    let o = envcap(&["b1", "--grid", "3"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], format!("# envcap {}", env!("CARGO_PKG_VERSION")));
    assert!(lines[1].starts_with("# config: {\"experiment\":\"b1\",\"grid\":3"));
    assert!(lines[2].starts_with("# timestamp: "));
    assert_eq!(lines[3], "t,curve_label,coherent_info");
    let quiet = stdout(&envcap(&["b1", "--grid", "3", "--no-timestamp"]));
    assert!(!quiet.contains("timestamp"));
}

#[test]
fn json_lines_output() {
    let o = envcap(&["b1", "--grid", "3", "--format", "json"]);
    assert!(o.status.success());
    let lines: Vec<serde_json::Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[1]["curve_label"], "m");
    let v = two_copy_coherent_info(&b1_spec(0.5).unwrap());
    assert!((lines[1]["coherent_info"].as_f64().unwrap() - v).abs() <= 1e-15);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    let out = dir.path().join("out.csv");
    std::fs::write(
        &cfg,
        format!(
            r#"{{"experiment": "b1", "grid": 4, "output_path": "{}"}}"#,
            out.display()
        ),
    )
    .unwrap();
    let o = envcap(&[
        "--config",
        cfg.to_str().unwrap(),
        "--grid",
        "6",
        "--no-timestamp",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (_, rows) = csv_rows(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(rows.len(), 6);

    std::fs::write(&cfg, r#"{"experiment": "b1", "gird": 4}"#).unwrap();
    assert_eq!(
        envcap(&["--config", cfg.to_str().unwrap()]).status.code(),
        Some(2)
    );
}

fn assert_close(row: &[Cell], col: usize, want: f64) {
    let got = row[col].as_f64().unwrap();
    assert!((got - want).abs() <= 1e-12, "{got} vs {want}");
}

#[test]
fn rows_reevaluate_directly() {
    let mut cfg = ExperimentConfig::new(Experiment::A1);
    cfg.grid = 11;
    for row in run_experiment(&cfg).unwrap().rows {
        let (g, t) = (row[0].as_f64().unwrap(), row[1].as_f64().unwrap());
        assert_close(&row, 2, two_copy_coherent_info(&a1_spec(g, t).unwrap()));
    }

    let mut cfg = ExperimentConfig::new(Experiment::B2);
    cfg.grid = 3;
    let table = run_experiment(&cfg).unwrap();
    assert_eq!(table.rows.len(), 3 * b2_thetas().len());
    for row in &table.rows {
        let (t, th) = (row[0].as_f64().unwrap(), row[1].as_f64().unwrap());
        assert_close(row, 2, two_copy_coherent_info(&b2_spec(t, th).unwrap()));
    }

    let mut cfg = ExperimentConfig::new(Experiment::EhSwap);
    cfg.grid = 17;
    cfg.params = vec![0.2, 0.65];
    let opts = OptimizerOptions {
        grid: 17,
        ..OptimizerOptions::default()
    };
    for row in run_experiment(&cfg).unwrap().rows {
        let g = row[0].as_f64().unwrap();
        assert_close(&row, 1, swap_gamma_eh_max(g, &opts).unwrap().value);
        assert_close(&row, 2, q_h_tensor(&swap_pow(g), &opts).unwrap().value);
    }

    let mut cfg = ExperimentConfig::new(Experiment::Classify);
    cfg.grid = 6;
    cfg.params = vec![0.4, 0.3, 0.1];
    let v = canonical_unitary(&CanonicalParams::from_units_of_pi(0.4, 0.3, 0.1));
    let table = run_experiment(&cfg).unwrap();
    for (row, (th, ph)) in table.rows.iter().zip(bloch_grid(6)) {
        let c = classify_env(&v, &PureState::from_bloch_angles(th, ph), SYMMETRIC_TOL).unwrap();
        assert_close(row, 2, c.index);
        assert_eq!(row[3], Cell::Text(c.class.as_str().into()));
    }
}

#[test]
fn printed_rows_match_direct_evaluation_at_print_precision() {
    let o = envcap(&["a1", "--grid", "21", "--params", "0,0.5", "--no-timestamp"]);
    let (_, rows) = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 42);
    for r in rows {
        let v = two_copy_coherent_info(&a1_spec(num(&r[0]), num(&r[1])).unwrap());
        assert_eq!(r[2], format_float(v));
    }
    let gammas = linspace(0.5, 1.0, 21);
    assert_eq!(gammas[0], 0.5);
    assert_eq!(gammas[20], 1.0);
}

#[test]
fn qhtens_and_jammer_rows_carry_argmax_json() {
    let o = envcap(&[
        "qhtens",
        "--params",
        "0,0,0",
        "--grid",
        "8",
        "--no-timestamp",
    ]);
    let (header, rows) = csv_rows(&stdout(&o));
    assert_eq!(header, ["value", "argmax"]);
    assert!((num(&rows[0][0]) - 1.0).abs() <= 1e-8);
    let arg: serde_json::Value = serde_json::from_str(&rows[0][1]).unwrap();
    assert_eq!(arg["env"]["kind"], "pure");
    assert_eq!(arg["diagnostics"]["outer_grid"], 64);

    let o = envcap(&["jammer", "--params", "0.5,0.5,0.5", "--no-timestamp"]);
    assert!(o.status.success());
    let (_, rows) = csv_rows(&stdout(&o));
    assert_eq!(num(&rows[0][0]), 0.0);
    let arg: serde_json::Value = serde_json::from_str(&rows[0][1]).unwrap();
    assert_eq!(arg["env"]["kind"], "mixed");
}
