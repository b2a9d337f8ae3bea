#![allow(clippy::excessive_precision)]

use std::collections::BTreeMap;
use std::process::Command;

use serde_json::Value;
use tremor::cli::run_with;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("tremor").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = run(args);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out} {err}"));
    (code, v)
}

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("missing check {name}"))
}

#[test]
fn variational_reports_bohr_radius() {
    let (code, v) = json(&["variational", "--Z", "1", "--format", "json", "--no-timestamp"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["r_opt"].as_f64(), Some(1.0));
    assert_eq!(v["results"]["e_opt"].as_f64(), Some(-0.5));
    assert_eq!(v["results"]["printed_r_opt"].as_f64(), Some(0.5));
    assert_eq!(v["schema_version"], "1.0");
    assert_eq!(v["units"], "atomic");
    assert_eq!(v["results"]["unit_labels"]["e_opt"], "hartree");
}

#[test]
fn variational_curve_has_minimum_at_r_opt() {
    let (_, v) = json(&["variational", "--Z", "2", "--curve-points", "101", "--no-timestamp"]);
    let curve = v["results"]["curve"].as_array().unwrap();
    assert_eq!(curve.len(), 101);
    let best = curve
        .iter()
        .min_by(|a, b| a["energy"].as_f64().unwrap().total_cmp(&b["energy"].as_f64().unwrap()))
        .unwrap();
    assert!((best["r"].as_f64().unwrap() - 0.5).abs() < 0.05);
}

#[test]
fn zpf_value_and_deviation() {
    let (code, v) = json(&["zpf", "--no-timestamp"]);
    assert_eq!(code, 0);
    let e = v["results"]["e_kinetic"].as_f64().unwrap();
    assert!((e - 87.239_826_543_020_165).abs() < 1e-10);
    assert!(v["results"]["rel_deviation"].as_f64().unwrap() < 1e-10);
    assert_eq!(check(&v, "zpf_closed_form")["status"], "pass");
}

#[test]
fn zpf_custom_cutoffs_skip_the_closed_form_check() {
    let (code, v) = json(&["zpf", "--omega-max", "100", "--no-timestamp"]);
    assert_eq!(code, 0);
    assert_eq!(check(&v, "zpf_closed_form")["status"], "skipped: non-standard cutoffs");
}

#[test]
fn cloud_checks_pass() {
    let (code, v) = json(&["cloud", "--points", "50", "--no-timestamp"]);
    assert_eq!(code, 0);
    for name in ["born_identity", "self_potential_dual_route", "far_field", "self_energy_closed_form", "budget_ratio"] {
        assert_eq!(check(&v, name)["status"], "pass", "{name}");
    }
    assert_eq!(v["results"]["profile"].as_array().unwrap().len(), 50);
}

#[test]
fn angular_table_rows() {
    let (code, v) = json(&["angular", "--l-max", "3", "--no-timestamp"]);
    assert_eq!(code, 0);
    let table = v["results"]["table"].as_array().unwrap();
    assert_eq!(table.len(), 4);
    assert_eq!(table[0]["l_square_assembled"].as_f64(), Some(0.75));
    assert_eq!(table[0]["l_square_closed"].as_f64(), Some(0.25));
    assert_eq!(table[1]["l_square_assembled"].as_f64(), Some(2.25));
    assert_eq!(table[1]["l_square_standard"].as_f64(), Some(2.0));
}

#[test]
fn argument_errors_exit_2_with_empty_stdout() {
    for args in [
        &["simulate", "--paths", "0"][..],
        &["simulate", "--bogus"],
        &["frobnicate"],
        &["variational", "--Z", "0.5"],
        &["simulate", "--state", "harmonic", "--dims", "2", "--paths", "10", "--steps", "10"],
        &["simulate", "--dt", "0.5", "--paths", "10"],
        &["simulate", "--steps", "15", "--stride", "10", "--paths", "10"],
        &["cloud", "--r-min", "5", "--r-max", "1"],
        &["zpf", "--rel-tol", "-1"],
    ] {
        let (code, out, err) = run(args);
        assert_eq!(code, 2, "{args:?}: {err}");
        assert!(out.is_empty(), "{args:?}");
        assert!(!err.is_empty(), "{args:?}");
    }
}

#[test]
fn unreachable_tolerance_is_a_numerical_failure() {
    let (code, out, err) = run(&["cloud", "--abs-tol", "1e-300", "--rel-tol", "1e-300", "--max-depth", "2"]);
    assert_eq!(code, 3, "{err}");
    assert!(out.is_empty());
}

#[test]
fn failing_check_exits_1_and_still_reports() {
    let (code, v) = json(&[
        "simulate", "--paths", "10000", "--diffusion-scale", "2", "--burn-in", "4000", "--steps", "10",
        "--stride", "10", "--no-timestamp",
    ]);
    assert_eq!(code, 1);
    assert_eq!(check(&v, "born_ks_final")["status"], "fail");
}

#[test]
fn small_ensembles_are_underpowered_not_failed() {
    let (code, v) = json(&["report", "--paths", "100", "--no-timestamp"]);
    assert_eq!(code, 0);
    for name in ["born_identity", "self_energy_closed_form", "budget_ratio", "variational_Z1", "l_square_table"] {
        assert_eq!(check(&v, name)["status"], "pass", "{name}");
    }
    for name in ["ou_variance", "hydrogen_ks", "diffusion_uniqueness", "osmotic_slope", "current_zero"] {
        assert_eq!(check(&v, name)["status"], "skipped: underpowered", "{name}");
        assert!(check(&v, name)["measured"].is_null());
    }
}

#[test]
fn plane_wave_simulation() {
    let (code, v) = json(&["simulate", "--state", "plane-wave", "--k", "-0.5", "--paths", "500", "--steps", "200", "--no-timestamp"]);
    assert_eq!(code, 0);
    assert_eq!(check(&v, "plane_wave_drift")["status"], "pass");
    assert!(v["results"]["born"]["ks_final"].is_null());
    let expected = v["results"]["drift"]["expected_shift"].as_f64().unwrap();
    assert!((expected + 0.1).abs() < 1e-12);
}

#[test]
fn harmonic_velocity_table_tracks_the_drift() {
    let (code, v) = json(&["simulate", "--state", "harmonic", "--paths", "2000", "--steps", "2000", "--stride", "20", "--bins", "40", "--no-timestamp"]);
    assert_eq!(code, 0);
    let rows = v["results"]["velocities"].as_array().unwrap();
    let populated: Vec<_> = rows.iter().filter(|r| r["count"].as_u64().unwrap() >= 200).collect();
    assert!(populated.len() >= 10);
    for row in rows.iter().filter(|r| r["count"] == 0) {
        assert!(row["osmotic_drift"].is_null());
    }
    for row in populated {
        let est = row["osmotic_drift"].as_f64().unwrap();
        let exact = row["analytic_osmotic_drift"].as_f64().unwrap();
        let se = row["osmotic_drift_se"].as_f64().unwrap();
        // lag bias is ~1% of the drift at this record interval
        assert!((est - exact).abs() < 5.0 * se + 0.03 * exact.abs(), "{row}");
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut BTreeMap<String, String>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), x, out);
            }
        }
        Value::Null => {
            out.insert(prefix.into(), String::new());
        }
        Value::String(s) => {
            out.insert(prefix.into(), s.clone());
        }
        other => {
            out.insert(prefix.into(), other.to_string());
        }
    }
}

#[test]
fn csv_and_json_carry_the_same_values() {
    let (_, json_text, _) = run(&["cloud", "--points", "5", "--no-timestamp"]);
    let (_, csv_text, _) = run(&["cloud", "--points", "5", "--no-timestamp", "--format", "csv"]);
    let v: Value = serde_json::from_str(&json_text).unwrap();
    let mut from_json = BTreeMap::new();
    flatten("", &v, &mut from_json);
    let mut rows = csv_text.lines();
    assert_eq!(rows.next(), Some("key,value"));
    let from_csv: BTreeMap<String, String> = rows
        .map(|line| {
            let (k, v) = line.split_once(',').unwrap();
            (k.to_string(), v.to_string())
        })
        .collect();
    assert_eq!(from_json.len(), from_csv.len());
    for (k, jv) in &from_json {
        if k == "config_echo.format" {
            assert_eq!(from_csv[k], "csv");
            continue;
        }
        let cv = &from_csv[k];
        match (jv.parse::<f64>(), cv.parse::<f64>()) {
            (Ok(a), Ok(b)) => assert_eq!(a.to_bits(), b.to_bits(), "{k}"),
            _ => assert_eq!(jv, cv, "{k}"),
        }
    }
    // the JSON text itself uses the same 17-digit spelling
    assert!(json_text.contains(&from_csv["results.lambda_o"]));
}

#[test]
fn timestamp_only_when_asked() {
    let (_, with) = json(&["angular", "--l-max", "1"]);
    let (_, without) = json(&["angular", "--l-max", "1", "--no-timestamp"]);
    assert!(with["timestamp_unix"].as_u64().unwrap() > 1_600_000_000);
    assert!(without.get("timestamp_unix").is_none());
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("tremor-out-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let (code, out, _) = run(&["zpf", "--no-timestamp", "--out", p]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let (_, direct, _) = run(&["zpf", "--no-timestamp"]);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), direct);
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn config_echo_reproduces_the_run() {
    let (_, v) = json(&["simulate", "--paths", "50", "--steps", "20", "--seed", "9", "--workers", "2", "--no-timestamp"]);
    let args = &v["config_echo"]["args"];
    assert_eq!(args["seed"], 9);
    assert_eq!(args["paths"], 50);
    assert_eq!(args["state"], "hydrogen");
    assert!(args.get("workers").is_none());
    assert_eq!(v["config_echo"]["command"], "simulate");
}

#[test]
fn seed_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_tremor"))
        .args(["simulate", "--paths", "20", "--steps", "10", "--no-timestamp"])
        .env("TREMOR_SEED", "1234")
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["config_echo"]["args"]["seed"], 1234);
}

#[test]
fn binary_exit_code_for_bad_arguments() {
    let out = Command::new(env!("CARGO_BIN_EXE_tremor")).args(["simulate", "--dt", "-1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn help_goes_to_stdout() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("simulate"));
}
