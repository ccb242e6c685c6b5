use std::path::Path;
use std::process::{Command, Output};
use std::time::Instant;

use gravwit_cli::{fig2, fig4, fig5, fig6, phases, witness_check, Cell, ExperimentConfig, Table};

fn cfg(json: &str) -> ExperimentConfig {
    ExperimentConfig::from_json(json).unwrap()
}

fn gravwit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gravwit"))
        .args(args)
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn col(t: &Table, name: &str) -> Vec<f64> {
    t.column(name)
        .unwrap_or_else(|| panic!("no column {name} in {:?}", t.columns))
}

#[test]
fn fig2_curves() {
    let t = fig2(&cfg(r#"{"T_range": [0, 3, 3001]}"#)).unwrap();
    assert_eq!(
        t.columns,
        ["T_in_units_piħD_over_Gm2", "N_c1.0", "N_c0.6", "N_c0.4142"]
    );
    let time = col(&t, "T_in_units_piħD_over_Gm2");
    let n1 = col(&t, "N_c1.0");
    let n06 = col(&t, "N_c0.6");
    let (k, peak) = n1
        .iter()
        .enumerate()
        .fold((0, 0.0), |a, (k, &v)| if v > a.1 { (k, v) } else { a });
    assert!((peak - 0.5).abs() <= 1e-10);
    assert!((time[k] - 1.5).abs() <= 1e-3);
    assert!(col(&t, "N_c0.4142").iter().all(|&v| v <= 1e-12));
    for (a, b) in n1.iter().zip(&n06) {
        if *a > 0.0 {
            assert!(b < a, "{b} !< {a}");
        } else {
            assert_eq!(*b, 0.0);
        }
    }
}

#[test]
fn fig4_witness_crossing_and_slope() {
    let t = fig4(&cfg(r#"{"T_range": [0, 1, 1001]}"#)).unwrap();
    assert_eq!(t.columns[1], "TrW_rho_out");
    let time = col(&t, "T_in_units_piħD_over_Gm2");
    let w = col(&t, "TrW_rho_out");
    let first_non_negative = (1..w.len()).find(|&k| w[k] >= 0.0).unwrap();
    assert!(time[first_non_negative - 1] > 0.39 && time[first_non_negative] < 0.41);
    assert!((1..w.len())
        .take_while(|&k| time[k] < 0.39)
        .all(|k| w[k] < 0.0));

    let small = fig4(&cfg(r#"{"theta_range": [0, 1e-4, 11]}"#)).unwrap();
    for row in &small.rows[1..] {
        let (theta, value) = (row[0].as_f64().unwrap(), row[1].as_f64().unwrap());
        assert!((value / theta + 2.0 / 3.0).abs() < 0.01 * 2.0 / 3.0);
    }
}

#[test]
fn fig4_witness_column_identical_across_coherences() {
    let base = r#""T_range": [0, 3, 301]"#;
    let columns: Vec<Vec<f64>> = ["1.0", "0.6", "0.41421356237309503"]
        .iter()
        .map(|c| {
            col(
                &fig4(&cfg(&format!(r#"{{{base}, "coherences": [[{c}, {c}]]}}"#))).unwrap(),
                "TrW_rho_out",
            )
        })
        .collect();
    for other in &columns[1..] {
        for (a, b) in columns[0].iter().zip(other) {
            assert!((a - b).abs() <= 1e-12);
        }
    }
}

#[test]
fn undamped_columns_match_fig2_and_fig4_exactly() {
    let c = cfg(r#"{"T_range": [0, 3, 200], "coherences": [[1, 1], [0.6, 0.6]]}"#);
    let f2 = fig2(&c).unwrap();
    let f4 = fig4(&c).unwrap();
    let f5 = fig5(&c).unwrap();
    let f6 = fig6(&c).unwrap();
    assert_eq!(col(&f5, "N_gamma0.0_c1.0"), col(&f2, "N_c1.0"));
    assert_eq!(col(&f5, "N_gamma0.0_c0.6"), col(&f2, "N_c0.6"));
    assert_eq!(col(&f6, "TrW_rho_out_gamma0.0"), col(&f4, "TrW_rho_out"));
    assert_eq!(f5.columns.len(), 1 + 4 * 2);
    assert_eq!(f6.columns.len(), 1 + 4);
}

#[test]
fn damped_curves() {
    let c = cfg(r#"{"T_range": [0, 3, 3001]}"#);
    let f5 = fig5(&c).unwrap();
    let f6 = fig6(&c).unwrap();
    let max = |v: Vec<f64>| v.into_iter().fold(0.0_f64, f64::max);
    let min = |v: Vec<f64>| v.into_iter().fold(f64::INFINITY, f64::min);
    // damping only shrinks the negativity
    for g in ["0.2", "0.4", "0.8"] {
        for cc in ["1.0", "0.6"] {
            let damped = col(&f5, &format!("N_gamma{g}_c{cc}"));
            let bare = col(&f5, &format!("N_gamma0.0_c{cc}"));
            assert!(damped.iter().zip(&bare).all(|(d, b)| d <= b));
        }
    }
    // γT = γ·T with both in the figure units: residual entanglement peaks near 0.030
    let n = max(col(&f5, "N_gamma0.8_c1.0"));
    assert!((n - 0.0301).abs() < 5e-4, "{n}");
    let n = max(col(&f5, "N_gamma0.2_c0.6"));
    assert!((n - 0.0303).abs() < 5e-4, "{n}");
    assert!(min(col(&f6, "TrW_rho_out_gamma0.2")) < 0.0);
    assert!(min(col(&f6, "TrW_rho_out_gamma0.8")) < 0.0);
}

#[test]
fn phases_exact_vs_quadrature_si() {
    let base = r#""mode": "si", "T_range": [0.01, 5, 50], "split_time": 0.2, "r": 0.7"#;
    let exact = phases(&cfg(&format!("{{{base}}}"))).unwrap();
    let quad = phases(&cfg(&format!(
        r#"{{{base}, "phase_method": "quadrature"}}"#
    )))
    .unwrap();
    assert_eq!(exact.columns[0], "T_s");
    for (a, b) in exact.rows.iter().zip(&quad.rows) {
        for k in 1..5 {
            let (x, y) = (a[k].as_f64().unwrap(), b[k].as_f64().unwrap());
            assert!((x - y).abs() / x.abs() < 1e-8, "{x} vs {y}");
        }
    }
}

#[test]
fn witness_check_report() {
    let r = witness_check(&cfg("{}")).unwrap();
    assert!(r.violations.is_empty(), "{:?}", r.violations);
    assert_eq!(r.table.lookup("samples"), Some(&Cell::Int(10_000)));
    assert_eq!(r.table.lookup("Tr_W_sigma_violations"), Some(&Cell::Int(0)));
    let nu = r.table.lookup("nu_numeric").unwrap().as_f64().unwrap();
    assert!((nu + 2.0).abs() < 1e-12);
    assert_eq!(r.table.lookup("nu_closed_form"), Some(&Cell::Num(-2.0)));
    assert!(
        r.table
            .lookup("trace_E_W_minus_nu")
            .unwrap()
            .as_f64()
            .unwrap()
            < 1e-10
    );
}

#[test]
fn witness_check_refuses_zero_coherence() {
    let r = witness_check(&cfg(r#"{"coherences": [[0, 1]], "samples": 200}"#)).unwrap();
    match r.table.lookup("min_Tr_W_sigma") {
        Some(Cell::Text(s)) => assert!(s.starts_with("refused") && s.contains("zero"), "{s}"),
        other => panic!("{other:?}"),
    }
    assert_eq!(r.table.lookup("trace_F_W_violations"), Some(&Cell::Int(0)));
    assert!(r.violations.is_empty());
}

#[test]
fn binary_output_is_reproducible_and_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let c = dir.path().join("c.csv");
    for (path, seed) in [(&a, "7"), (&b, "7"), (&c, "8")] {
        let out = gravwit(&[
            "witness-check",
            "--seed",
            seed,
            "--samples",
            "500",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let read = |p: &Path| std::fs::read(p).unwrap();
    assert_eq!(read(&a), read(&b));
    assert_ne!(read(&a), read(&c));

    let f1 = gravwit(&["fig5"]);
    let f2 = gravwit(&["fig5"]);
    assert!(f1.status.success());
    assert_eq!(f1.stdout, f2.stdout);
}

#[test]
fn json_mirrors_csv() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(
        dir.path(),
        "cfg.json",
        r#"{"T_range": [0, 3, 40], "format": "json"}"#,
    );
    let csv_out = gravwit(&["fig4", "--config", &config, "--format", "csv"]);
    let json_out = gravwit(&["fig4", "--config", &config]);
    assert!(csv_out.status.success() && json_out.status.success());
    let text = String::from_utf8(csv_out.stdout).unwrap();
    let json: serde_json::Value = serde_json::from_slice(&json_out.stdout).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(json["columns"].as_array().unwrap().len(), header.len());
    for (k, name) in header.iter().enumerate() {
        assert_eq!(json["columns"][k], *name);
    }
    for (i, line) in lines.enumerate() {
        for (k, field) in line.split(',').enumerate() {
            assert_eq!(
                field.parse::<f64>().unwrap(),
                json["rows"][i][k].as_f64().unwrap()
            );
        }
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        gravwit(&[
            "phases",
            "--out",
            dir.path().join("p.csv").to_str().unwrap()
        ])
        .status
        .code(),
        Some(0)
    );

    let bad_ratio = write(dir.path(), "r.json", r#"{"r": 1.5}"#);
    let out = gravwit(&["fig2", "--config", &bad_ratio]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("r:"));

    let unknown = write(dir.path(), "u.json", "{\n \"steps\": 10\n}");
    let out = gravwit(&["fig2", "--config", &unknown]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    assert_eq!(
        gravwit(&["fig2", "--config", "/nonexistent/cfg.json"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(gravwit(&["fig2", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(
        gravwit(&["witness-check", "--samples", "0"]).status.code(),
        Some(2)
    );
}

#[test]
fn figure_commands_are_fast_at_default_resolution() {
    let c = cfg("{}");
    for (name, run) in [
        ("fig2", fig2 as fn(&ExperimentConfig) -> _),
        ("fig4", fig4),
        ("fig5", fig5),
        ("fig6", fig6),
    ] {
        let start = Instant::now();
        let t = run(&c).unwrap();
        let secs = start.elapsed().as_secs_f64();
        assert_eq!(t.rows.len(), 1000);
        assert!(secs < 10.0, "{name} took {secs} s");
    }
}
