use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_chiral-diode");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("CHIRAL_DIODE_OUT_DIR").output().expect("binary runs")
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "s.toml",
        "[emitter]\nkind = \"lambda\"\n[sweep]\nkind = \"spectrum\"\ngrid = { start = -4.0, stop = 4.0, count = 801 }\n",
    );
    for fmt in ["csv", "json"] {
        let a = dir.path().join(format!("a.{fmt}"));
        let b = dir.path().join(format!("b.{fmt}"));
        for out in [&a, &b] {
            let o = run(&["spectrum", "--config", &cfg, "--format", fmt, "--out", out.to_str().unwrap()]);
            assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        }
        // Only the output path in the echoed scenario may differ.
        let a = std::fs::read_to_string(&a).unwrap().replace("a.", "X.");
        let b = std::fs::read_to_string(&b).unwrap().replace("b.", "X.");
        assert_eq!(a, b);
    }
}

#[test]
fn csv_and_json_hold_the_same_numbers() {
    let csv = run(&["sweep2d", "--delta-grid=-5:5:11", "--omega-grid", "0:5:11"]);
    let json = run(&["sweep2d", "--delta-grid=-5:5:11", "--omega-grid", "0:5:11", "--format", "json"]);
    assert!(csv.status.success() && json.status.success());
    let rows = csv_rows(&String::from_utf8(csv.stdout).unwrap());
    let doc: Value = serde_json::from_slice(&json.stdout).unwrap();
    let jrows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 121);
    assert_eq!(rows.len(), jrows.len());
    for (c, j) in rows.iter().zip(jrows) {
        for (cell, v) in c.iter().zip(j.as_array().unwrap()) {
            assert_eq!(cell.parse::<f64>().unwrap(), v.as_f64().unwrap());
        }
    }
}

#[test]
fn echoed_scenario_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.json");
    let o = run(&["tune", "--gamma-l", "0.2", "--gamma-a", "0.8", "--delta-k=-2.5", "--omega", "1.5", "--out", first.to_str().unwrap()]);
    assert!(o.status.success());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&first).unwrap()).unwrap();
    let scenario = doc["meta"]["scenario"].clone();
    assert_eq!(scenario["sweep"]["omega"], 1.5);
    let cfg = write(dir.path(), "echo.json", &scenario.to_string());
    let second = dir.path().join("second.json");
    let again = run(&["tune", "--config", &cfg, "--out", second.to_str().unwrap()]);
    assert!(again.status.success());
    let a = std::fs::read_to_string(&first).unwrap();
    let b = std::fs::read_to_string(&second).unwrap().replace("second.json", "first.json");
    assert_eq!(a, b);
    let redo: Value = serde_json::from_str(&b).unwrap();
    assert_eq!(redo["rows"], doc["rows"]);
}

#[test]
fn single_point_spectrum_matches_scalar_api() {
    let o = run(&["spectrum", "--grid", "0.3:0.3:1", "--format", "json"]);
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    let row = doc["rows"][0].as_array().unwrap();
    let rates = chiral_diode::CouplingRates::normalized(0.1, 0.9).unwrap();
    let res = chiral_diode::amplitudes_two_level(&rates, chiral_diode::Detuning(0.3)).unwrap();
    let round = |x: f64| chiral_diode::io::table::round_significant(x);
    assert_eq!(row[1].as_f64().unwrap(), round(res.trans_r));
    assert_eq!(row[2].as_f64().unwrap(), round(res.trans_l));
    assert_eq!(row[3].as_f64().unwrap(), round(res.refl));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["tune"]).status.code(), Some(0));
    assert_eq!(run(&["tune", "--gamma-l", "1", "--gamma-a", "0"]).status.code(), Some(2));
    assert_eq!(run(&["tune", "--delta-k", "0"]).status.code(), Some(2));
    assert_eq!(run(&["spectrum", "--grid", "1:0:5"]).status.code(), Some(1));
    assert_eq!(run(&["spectrum", "--gamma-a=-1"]).status.code(), Some(1));
    assert_eq!(run(&["spectrum", "--config", "/nonexistent.toml"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["compare", "--emitter", "lambda"]).status.code(), Some(0));
    // A tolerance no simulation can meet.
    let o = run(&["oracle", "--carriers", "0", "--direction", "from-left", "--tolerance", "1e-9"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn config_errors_name_the_problem() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.toml", "[emitter]\ngamma_x = 1.0\n");
    let o = run(&["spectrum", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("gamma_x") && err.contains("line 2"), "{err}");

    let cfg = write(dir.path(), "mismatch.toml", "[sweep]\nkind = \"tune\"\nmode = \"block\"\ndelta_k = 1.0\n");
    let o = run(&["spectrum", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn infeasible_tune_is_a_row() {
    let o = run(&["tune", "--gamma-l", "1", "--gamma-a", "0"]);
    let rows = csv_rows(&String::from_utf8(o.stdout).unwrap());
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][1], "infeasible");
}

#[test]
fn empty_oracle_is_header_only() {
    let o = run(&["oracle", "--carriers", ""]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(csv_rows(&text).is_empty());
    assert!(text.lines().any(|l| l.starts_with("carrier,direction,T_oracle")));
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(BIN)
        .args(["compare", "--format", "json"])
        .env("CHIRAL_DIODE_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("compare.json")).unwrap()).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 801);
}

#[test]
fn flags_override_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.toml", "[emitter]\ngamma_l = 0.5\n[sweep]\nkind = \"spectrum\"\ngrid = { start = 0.0, stop = 0.0, count = 1 }\n");
    let o = run(&["spectrum", "--config", &cfg, "--gamma-l", "0.1", "--format", "json"]);
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["meta"]["scenario"]["emitter"]["gamma_l"], 0.1);
    // Critical coupling at resonance.
    assert_eq!(doc["rows"][0][1], 0.0);
}
