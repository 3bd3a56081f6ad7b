use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_crack-dipole"))
}

fn write_config(dir: &Path, name: &str, json: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, json).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn summary(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}\n{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

const TWO_POINT: &str = r#"{
    "material": {"mu_plus": 1.0, "mu_minus": 1.0},
    "load": {"kind": "two_point", "F": 1.0, "a": 1.0}
}"#;

const FIG3: &str = r#"{
    "material": {"mu_plus": 1.0, "mu_minus": 1.0},
    "load": {"kind": "two_point", "F": 1.0, "a": 2.0},
    "map": {"defect": {"kind": "micro_crack", "d": 1.0, "l": 0.01}}
}"#;

const DEFECTS: &str = r#"{
    "material": {"mu_plus": 1.0, "mu_minus": 3.0},
    "load": {"kind": "three_point", "F": 1.0, "a": 50.0, "b": 1.0},
    "defects": [
        {"kind": "micro_crack", "d": 1.0, "phi": 1.5707963267948966, "l": 0.01, "alpha": 0.0},
        {"kind": "rigid_inclusion", "d": 2.0, "phi": -0.5, "l": 0.02, "alpha": 1.0}
    ]
}"#;

#[test]
fn sif_of_symmetric_pair() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.json", TWO_POINT);
    let out_dir = dir.path().join("out");
    let out = run(&["sif", "--config", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let s = summary(&out);
    let k0 = s["k0"].as_f64().unwrap();
    assert!((k0 + (2.0 / PI).sqrt()).abs() < 1e-12);
    assert_eq!(s["command"], "sif");
    assert_eq!(s["files"][0], out_dir.join("sif.csv").display().to_string());
    let csv = fs::read_to_string(out_dir.join("sif.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert!(csv.starts_with("item,face,offset,magnitude,k0\n"));
    assert!(stderr(&out).contains("K0 = -7.97885e-1"));
}

#[test]
fn sif_with_tractions() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "run.json",
        r#"{
            "material": {"mu_plus": 1.0, "mu_minus": 1.0},
            "load": {"kind": "explicit", "forces": []},
            "tractions": {"upper": [{"near": 0.0, "far": 1.0, "height": 1.0}],
                          "lower": [{"near": 0.0, "far": 1.0, "height": 1.0}]}
        }"#,
    );
    let out = run(&["sif", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let k0 = summary(&out)["k0"].as_f64().unwrap();
    assert!((k0 + 2.0 * (2.0 / PI).sqrt()).abs() < 1e-9);

    let out = run(&["delta-k", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("tractions"));
}

#[test]
fn map_writes_grid_boundary_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "fig3.json", FIG3);
    let out_dir = dir.path().join("map");
    let out = run(&["map", "--config", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let s = summary(&out);
    assert_eq!(s["files"].as_array().unwrap().len(), 3);
    assert_eq!(s["resolution"], "720x360");
    for name in ["map_grid.csv", "map_boundary.csv", "map.svg"] {
        assert!(out_dir.join(name).exists(), "{name}");
    }
    let grid = fs::read_to_string(out_dir.join("map_grid.csv")).unwrap();
    assert_eq!(grid.lines().count(), 720 * 360 + 1);
    assert!(s["boundary_curves"].as_u64().unwrap() > 0);

    let out = run(&[
        "map",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_dir.join("small").to_str().unwrap(),
        "--resolution",
        "40x20",
        "--no-svg",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let s = summary(&out);
    assert_eq!(s["files"].as_array().unwrap().len(), 2);
    assert_eq!(s["config"]["map"]["resolution"]["n_phi"], 40);
    assert_eq!(s["config"]["output"]["svg"], false);
    assert!(!out_dir.join("small").join("map.svg").exists());
}

#[test]
fn delta_k_with_no_defects_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.json", TWO_POINT);
    let out = run(&["delta-k", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let s = summary(&out);
    assert_eq!(s["delta_k"].as_f64(), Some(0.0));
    assert_eq!(s["defects"].as_array().unwrap().len(), 0);
}

#[test]
fn delta_k_reports_every_applicable_estimate() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.json", DEFECTS);
    let out = run(&["delta-k", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let s = summary(&out);
    let rows = s["defects"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    for r in rows {
        assert!(r["gong_ratio"].is_null());
        assert!(r["simplified_ratio"].is_f64() && r["three_point_ratio"].is_f64());
        let exact = r["exact_ratio"].as_f64().unwrap();
        let three = r["three_point_ratio"].as_f64().unwrap();
        assert!((exact - three).abs() < 0.05 * exact.abs());
    }
    let total: f64 = rows.iter().map(|r| r["delta_k"].as_f64().unwrap()).sum();
    assert!((s["delta_k"].as_f64().unwrap() - total).abs() <= 1e-14 * total.abs());
    let csv = fs::read_to_string(dir.path().join("delta_k.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn degrees_flag_converts_angles() {
    let dir = tempfile::tempdir().unwrap();
    let radians = write_config(dir.path(), "rad.json", DEFECTS);
    let degrees_json = DEFECTS
        .replace("1.5707963267948966", "90.0")
        .replace("\"phi\": -0.5", &format!("\"phi\": {}", (-0.5f64).to_degrees()))
        .replace("\"alpha\": 1.0", &format!("\"alpha\": {}", 1.0f64.to_degrees()));
    let degrees = write_config(dir.path(), "deg.json", &degrees_json);
    let a = summary(&run(&["delta-k", "--config", radians.to_str().unwrap(), "--out", dir.path().join("a").to_str().unwrap()]));
    let b = summary(&run(&[
        "delta-k",
        "--config",
        degrees.to_str().unwrap(),
        "--degrees",
        "--out",
        dir.path().join("b").to_str().unwrap(),
    ]));
    assert_eq!(b["config"]["degrees"], true);
    let (x, y) = (a["delta_k"].as_f64().unwrap(), b["delta_k"].as_f64().unwrap());
    assert!((x - y).abs() <= 1e-13 * x.abs());
}

#[test]
fn outputs_are_deterministic_and_echo_reproduces_them() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "run.json",
        &FIG3.replace("\"l\": 0.01}", "\"l\": 0.01}, \"resolution\": {\"n_phi\": 64, \"n_alpha\": 32}"),
    );
    let first = dir.path().join("first");
    let second = dir.path().join("second");
    let a = run(&["map", "--config", cfg.to_str().unwrap(), "--out", first.to_str().unwrap()]);
    let b = run(&["map", "--config", cfg.to_str().unwrap(), "--out", second.to_str().unwrap()]);
    assert!(a.status.success() && b.status.success());
    for name in ["map_grid.csv", "map_boundary.csv", "map.svg"] {
        assert_eq!(fs::read(first.join(name)).unwrap(), fs::read(second.join(name)).unwrap(), "{name}");
    }

    // the echoed config names `first` as its output dir; rerun it elsewhere and compare
    let mut echo = summary(&a)["config"].clone();
    let third = dir.path().join("third");
    echo["output"]["dir"] = Value::from(third.display().to_string());
    let echoed = write_config(dir.path(), "echo.json", &echo.to_string());
    let c = run(&["map", "--config", echoed.to_str().unwrap()]);
    assert!(c.status.success(), "{}", stderr(&c));
    for name in ["map_grid.csv", "map_boundary.csv", "map.svg"] {
        assert_eq!(fs::read(first.join(name)).unwrap(), fs::read(third.join(name)).unwrap(), "{name}");
    }
    let mut again = summary(&c);
    again["config"]["output"]["dir"] = Value::from(first.display().to_string());
    again["files"] = summary(&a)["files"].clone();
    assert_eq!(again, summary(&a));
}

#[test]
fn compare_sweeps_load_distance() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "run.json",
        r#"{
            "material": {"mu_plus": 1.0, "mu_minus": 1.0},
            "load": {"kind": "two_point", "F": 1.0, "a": 10.0},
            "defects": [{"kind": "micro_crack", "d": 1.0, "phi": 0.7853981633974483, "l": 0.01, "alpha": 0.0}],
            "compare": {"a_values": [10.0, 100.0, 1000.0, 1000000.0]}
        }"#,
    );
    let out = run(&["compare", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = fs::read_to_string(dir.path().join("compare.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.ends_with(",gong")));
    let last_error: f64 = rows[3].split(',').nth(4).unwrap().parse().unwrap();
    assert!(last_error < 1e-5);
}

#[test]
fn config_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let typo = write_config(dir.path(), "typo.json", &DEFECTS.replace("\"alpha\": 0.0", "\"aplha\": 0.0"));
    let out = run(&["delta-k", "--config", typo.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("aplha"), "{}", stderr(&out));

    let bad = write_config(dir.path(), "bad.json", &DEFECTS.replace("\"d\": 2.0", "\"d\": -2.0"));
    let out = run(&["delta-k", "--config", bad.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("defects[1].d"), "{}", stderr(&out));

    let explicit = write_config(
        dir.path(),
        "explicit.json",
        r#"{"material": {"mu_plus": 1.0, "mu_minus": 1.0},
            "load": {"kind": "explicit", "forces": [{"face": "upper", "offset": 2.0, "magnitude": 1.0}]},
            "compare": {"a_values": [10.0]}}"#,
    );
    let out = run(&["compare", "--config", explicit.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("load.kind"));

    assert_eq!(run(&["sif"]).status.code(), Some(1));
    assert_eq!(run(&["map", "--config", typo.to_str().unwrap(), "--resolution", "3x3"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn numeric_and_io_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cancelling = write_config(
        dir.path(),
        "zero.json",
        r#"{"material": {"mu_plus": 1.0, "mu_minus": 1.0},
            "load": {"kind": "explicit", "forces": [
                {"face": "upper", "offset": 2.0, "magnitude": 1.0},
                {"face": "upper", "offset": 2.0, "magnitude": -1.0}]},
            "map": {"defect": {"kind": "micro_crack", "d": 1.0, "l": 0.01}}}"#,
    );
    let out = run(&["map", "--config", cancelling.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let cfg = write_config(dir.path(), "run.json", TWO_POINT);
    let out = run(&["sif", "--config", cfg.to_str().unwrap(), "--out", blocker.join("sub").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(run(&["sif", "--config", dir.path().join("missing.json").to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn validate_runs_the_invariant_suite() {
    let out = run(&["validate"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let s = summary(&out);
    assert_eq!(s["passed"], true);
    assert!(s["checks"].as_array().unwrap().len() >= 10);
    assert!(stderr(&out).lines().all(|l| l.starts_with("PASS")));
}
