use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_measured-bath");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("config.json");
    fs::write(&path, body).unwrap();
    path.display().to_string()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn attractor_map_writes_the_full_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = run(&["attractor-map", "--out", out]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(dir.path().join("attractor_map.csv")).unwrap();
    let mut lines = text.lines().skip_while(|l| l.starts_with('#'));
    assert_eq!(lines.next().unwrap(), "dt,detuning,rho00_star,is_freezing");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 400 * 400);
    // Freezing cells carry an empty attractor field.
    let frozen: Vec<&&str> = rows.iter().filter(|r| r.ends_with(",true")).collect();
    assert!(!frozen.is_empty());
    assert!(frozen.iter().all(|r| r.split(',').nth(2) == Some("")));
    assert!(rows.iter().filter(|r| r.ends_with(",false")).all(|r| !r.split(',').nth(2).unwrap().is_empty()));
}

#[test]
fn outputs_carry_version_and_resolved_config() {
    let o = run(&["sweep", "--quantity", "r", "--x", "dt=0.1:3:5"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), format!("# measured-bath {}", env!("CARGO_PKG_VERSION")));
    assert_eq!(lines.next().unwrap(), "# command sweep");
    let config = lines.next().unwrap().strip_prefix("# config ").unwrap();
    let config: Value = serde_json::from_str(config).unwrap();
    assert_eq!(config["quantity"], "r");
    assert_eq!(lines.next().unwrap(), "dt,r");
    let values: Vec<f64> = lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(values.len(), 5);
    assert!(values.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn two_dimensional_sweep_has_a_row_per_point() {
    let o = run(&["sweep", "--quantity", "rho00_star", "--x", "dt=0.5:6:4", "--y", "detuning=0:1:3"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines().skip_while(|l| l.starts_with('#'));
    assert_eq!(lines.next().unwrap(), "dt,detuning,rho00_star");
    assert_eq!(lines.count(), 12);
}

#[test]
fn relax_reports_pass_and_embeds_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = run(&["relax", "--scenario", "fig2", "--out", out]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let doc = read_json(&dir.path().join("fig2_report.json"));
    assert_eq!(doc["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(doc["command"], "relax");
    assert_eq!(doc["config"]["name"], "fig2");
    assert_eq!(doc["report"]["pass"], true);
    assert!(doc["timing"]["wall_time_s"].is_number());
    for f in ["fig2_series.csv", "fig2_analytic.csv"] {
        let text = fs::read_to_string(dir.path().join(f)).unwrap();
        assert!(text.starts_with("# measured-bath "));
    }
}

#[test]
fn missed_target_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"scenario": "fig2", "target": 0.9}"#);
    let o = run(&["relax", "--config", &cfg]);
    assert_eq!(code(&o), 2);
}

#[test]
fn usage_and_config_errors_exit_one() {
    assert_eq!(code(&run(&[])), 1);
    assert_eq!(code(&run(&["relax", "--engine", "bogus"])), 1);
    assert_eq!(code(&run(&["relax", "--scenario", "nope"])), 1);
    assert_eq!(code(&run(&["sweep", "--quantity", "nonsense", "--x", "dt=0:1:3"])), 1);
    assert_eq!(code(&run(&["relax", "--config", "/nonexistent/config.json"])), 1);

    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"scenario": "fig2", "grid": {"dt": {"lo": 0, "hi": 1, "n": 4, "stride": 2}}}"#);
    let o = run(&["attractor-map", "--config", &cfg]);
    assert_eq!(code(&o), 1);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("grid.dt"), "{err}");
    assert!(err.contains("stride"), "{err}");
}

#[test]
fn freezing_point_is_identified() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = run(&["freeze", "--out", out]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let doc = read_json(&dir.path().join("freeze_report.json"));
    assert_eq!(doc["report"]["n"], 1);
    assert_eq!(doc["report"]["m"], 1);

    let cfg = write_config(dir.path(), r#"{"detuning": 1.9}"#);
    assert_eq!(code(&run(&["freeze", "--config", &cfg])), 1);
}

#[test]
fn env_inspect_prints_the_band_table() {
    let o = run(&["env-inspect"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["k", "N_k", "E_k", "|C_k+1,k|_F"]));
    assert!(text.contains("beta digamma"));
}

#[test]
fn same_seed_gives_identical_output() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = run(&[
            "relax",
            "--scenario",
            "fig2",
            "--engine",
            "sampled",
            "--seed",
            "17",
            "--out",
            d.path().to_str().unwrap(),
        ]);
        assert!(matches!(code(&o), 0 | 2));
    }
    for f in ["fig2_series.csv", "fig2_analytic.csv"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("timing");
        v
    };
    assert_eq!(
        strip(read_json(&a.path().join("fig2_report.json"))),
        strip(read_json(&b.path().join("fig2_report.json")))
    );
}
