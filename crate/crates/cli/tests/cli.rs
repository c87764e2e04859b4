use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn hh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hh")).args(args).output().expect("binary runs")
}

fn write_config(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn report(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("JSON report")
}

#[test]
fn algebra_check_default_passes() {
    let out = hh(&["algebra-check"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["status"], "pass");
    for suite in ["level_triples", "bounded_triples", "unbounded_triples"] {
        assert!(r["counts"][suite].as_u64().unwrap() >= 100, "{suite}");
    }
    for suite in ["filtration", "composition", "injectivity", "explicit_vs_definitional"] {
        assert!(r["counts"][suite].as_u64().unwrap() > 0, "{suite}");
    }
}

#[test]
fn algebra_check_reports_injected_fault() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "fault.ini", "inject_fault = true\ntriples = 10\n");
    let out = hh(&["algebra-check", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["status"], "violation");
    let c = &r["counterexample"];
    assert!(c["suite"].is_string());
    assert_ne!(c["expected"], c["got"]);
}

#[test]
fn degree_cap_is_a_configuration_error() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "deg.ini", "degree = 9\n");
    let out = hh(&["algebra-check", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("degree"));
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let unknown = write_config(&dir, "unknown.ini", "triples = 5\ntripples = 6\n");
    let malformed = write_config(&dir, "bad.json", "{\"dt\": [[1]]}");
    let bad_value = write_config(&dir, "value.ini", "dt = -1\n");
    let bad_potential = write_config(&dir, "pot.ini", "potential = x1_1^3\n");
    let cases: Vec<Vec<&str>> = vec![
        vec!["algebra-check", "--config", &unknown],
        vec!["nbody", "--config", &malformed],
        vec!["nbody", "--config", &bad_value],
        vec!["vlasov1d", "--config", &bad_potential],
        vec!["nbody", "--mode", "exact"],
        vec!["morphism-check", "--mode", "float"],
        vec!["limits", "--config", "/nonexistent/config.ini"],
    ];
    for args in cases {
        let out = hh(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn morphism_check_passes_and_detects_fault() {
    let out = hh(&["morphism-check", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["seed"], 7);
    for map in ["iota_em", "iota_lio", "iota_mar", "iota_factorize"] {
        assert!(r["counts"][map].as_u64().unwrap() >= 50, "{map}");
    }
    assert_eq!(r["counts"].as_object().unwrap().len(), 8);

    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "fault.json", r#"{"inject_fault": true, "maps": ["iota_mar"]}"#);
    let out = hh(&["morphism-check", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["counterexample"]["suite"], "iota_mar");
    assert_ne!(r["counterexample"]["residual"], "0");
}

#[test]
fn nbody_without_interaction_streams_freely() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "free.ini", "n = 5\nd = 2\npotential = zero\ndt = 0.25\nsteps = 8\nevery = 2\n");
    let out = hh(&["nbody", "--config", &cfg, "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,particle,x1,x2,v1,v2"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 5 * 5);
    for row in &rows {
        let start = &rows[row[1] as usize - 1];
        let t = row[0];
        for c in 0..2 {
            assert!((row[2 + c] - (start[2 + c] + t * start[4 + c])).abs() < 1e-12);
            assert_eq!(row[4 + c], start[4 + c]);
        }
    }
}

#[test]
fn outputs_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "mf.ini", "n_list = 16,64\nreplicas = 3\nnx = 64\nnv = 64\n");
    for args in [
        vec!["nbody", "--seed", "11"],
        vec!["limits", "--seed", "5"],
        vec!["algebra-check", "--seed", "9"],
        vec!["meanfield", "--config", cfg.as_str()],
    ] {
        let (a, b) = (hh(&args), hh(&args));
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    assert_ne!(hh(&["nbody", "--seed", "1"]).stdout, hh(&["nbody", "--seed", "2"]).stdout);
}

#[test]
fn out_flag_writes_the_file() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("limits.csv");
    let out = hh(&["limits", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert!(Path::new(&path).exists());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&hh(&["limits"])));
}

#[test]
fn limits_gap_halves_per_doubling() {
    let out = hh(&["limits"]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("N,k,max_gap,ratio"));
    let mut ratios = 0;
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        assert!(cols[2].parse::<f64>().unwrap() > 0.0);
        if !cols[3].is_empty() {
            let ratio: f64 = cols[3].parse().unwrap();
            assert!((1.8..=2.2).contains(&ratio), "{line}");
            ratios += 1;
        }
    }
    assert!(ratios >= 3);
}

#[test]
fn vlasov1d_conserves_mass() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "v.json", r#"{"nx": 32, "nv": 32, "steps": 20, "every": 5, "dt": 0.02}"#);
    let out = hh(&["vlasov1d", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows: Vec<Vec<f64>> =
        text.lines().skip(1).map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 5);
    for row in &rows {
        assert!((row[1] - 1.0).abs() < 1e-8);
    }
}

#[test]
fn meanfield_default_table_is_monotone() {
    let out = hh(&["meanfield"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("N,seed,observable,empirical_value,grid_value,abs_error\n"));
    assert_eq!(text.lines().count(), 1 + 3 * 20 * 5);
    let mut medians = Vec::new();
    for n in ["64", "256", "1024"] {
        let mut per_replica = std::collections::BTreeMap::<String, f64>::new();
        for line in text.lines().skip(1).filter(|l| l.starts_with(&format!("{n},"))) {
            let cols: Vec<&str> = line.split(',').collect();
            *per_replica.entry(cols[1].to_string()).or_default() += cols[5].parse::<f64>().unwrap();
        }
        let mut v: Vec<f64> = per_replica.into_values().collect();
        v.sort_by(f64::total_cmp);
        medians.push((v[9] + v[10]) / 2.0);
    }
    assert!(medians.windows(2).all(|w| w[1] < w[0]), "{medians:?}");
}
