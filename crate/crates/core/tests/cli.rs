use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

use lu_invariants::states::{random_density, Ensemble, StateFile};

fn luinv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_luinv")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, value: &Value) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(value).unwrap()).unwrap();
    path.to_str().unwrap().to_owned()
}

fn mixed_abc() -> Value {
    let zeros = [0; 8];
    json!({"abc": {"a": [0, 0, 0], "b": zeros, "C": [zeros, zeros, zeros]}})
}

#[test]
fn positivity_of_maximally_mixed_state() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "mixed.json", &mixed_abc());
    let out = luinv(&["positivity", &file, "--oracle"]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    for key in ["t", "S", "S_bar", "casimir_exprs", "verdict_S", "verdict_casimir", "consistent", "eigenvalues"] {
        assert!(report.get(key).is_some(), "missing {key}");
    }
    assert!(report["verdict_S"].as_array().unwrap().iter().all(|v| v == true));
    assert!(report["verdict_casimir"].as_array().unwrap().iter().all(|v| v == true));
    for e in report["eigenvalues"].as_array().unwrap() {
        assert!((e.as_f64().unwrap() - 1.0 / 6.0).abs() < 1e-12);
    }
}

#[test]
fn rho_form_is_accepted_and_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let state = random_density(11, Ensemble::GinibreFullRank).unwrap();
    let abc = write(dir.path(), "abc.json", &StateFile::to_json(&state));
    let rho = write(dir.path(), "rho.json", &StateFile::rho_json(&state));
    let first = luinv(&["invariants", &abc, "--max-degree", "3"]);
    let again = luinv(&["invariants", &abc, "--max-degree", "3"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, again.stdout);
    let a: Value = serde_json::from_slice(&first.stdout).unwrap();
    let r: Value = serde_json::from_slice(&luinv(&["invariants", &rho, "--max-degree", "3"]).stdout).unwrap();
    let (a, r) = (a["invariants"].as_array().unwrap(), r["invariants"].as_array().unwrap());
    assert_eq!(a.len(), r.len());
    for (x, y) in a.iter().zip(r) {
        assert_eq!(x["word"], y["word"]);
        assert!((x["value"].as_f64().unwrap() - y["value"].as_f64().unwrap()).abs() < 1e-10);
    }
}

#[test]
fn invariants_with_checks() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "mixed.json", &mixed_abc());
    let out = luinv(&["invariants", &file, "--checks"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["checks"]["passed"], true);
    assert_eq!(v["checks"]["kernel_degree_4"]["words"].as_array().unwrap().len(), 5);
    // 3 + 6 + 10 + 18 canonical words up to degree 4
    assert_eq!(v["invariants"].as_array().unwrap().len(), 37);
}

#[test]
fn molien_prints_degree_lines() {
    let out = luinv(&["molien", "--group", "2x3", "--degree", "4", "--compare-rational"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "0 1\n1 0\n2 3\n3 4\n4 15\n");
    let reduced = luinv(&["molien", "--group", "2x2", "--degree", "8", "--backend", "reduced"]);
    let weyl = luinv(&["molien", "--group", "2x2", "--degree", "8"]);
    assert_eq!(reduced.stdout, weyl.stdout);
}

#[test]
fn molien_cap_is_an_input_error() {
    let out = luinv(&["molien", "--group", "2x2", "--degree", "25"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("cap"));
}

#[test]
fn missing_file_exits_with_2() {
    let out = luinv(&["positivity", "/definitely/not/here.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("/definitely/not/here.json"));
}

#[test]
fn malformed_inputs_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let short = write(dir.path(), "short.json", &json!({"abc": {"a": [1, 2]}}));
    let out = luinv(&["positivity", &short]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("`a`"));

    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\"abc\": ").unwrap();
    assert_eq!(luinv(&["positivity", path.to_str().unwrap()]).status.code(), Some(2));

    let mut rho = vec![vec![json!(["0", "0"]); 6]; 6];
    for (i, row) in rho.iter_mut().enumerate() {
        row[i] = json!([(1.0 / 6.0).to_string(), "0"]);
    }
    rho[0][1] = json!(["0.1", "0"]);
    let nonherm = write(dir.path(), "nonherm.json", &json!({ "rho": rho }));
    assert_eq!(luinv(&["positivity", &nonherm]).status.code(), Some(2));
}

#[test]
fn basis_dump() {
    let out = luinv(&["basis", "--algebra", "su3"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["dim"], 8);
    assert_eq!(v["identities"]["passed"], true);
    // f_123 = 1 with 1-based indices
    let f = v["structure_constants"]["f"].as_array().unwrap();
    assert!(f.iter().any(|e| e[0] == 1 && e[1] == 2 && e[2] == 3 && (e[3].as_f64().unwrap() - 1.0).abs() < 1e-12));
}

#[test]
fn selftest_table_names_the_seed() {
    let out = luinv(&["--format", "table", "selftest", "--seed", "7", "--panel-size", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().next().unwrap().contains("seed=0x7"));
    assert!(text.contains(", 0 failed"));
}

#[test]
fn usage_errors_exit_with_2() {
    assert_eq!(luinv(&["molien", "--group", "3x3", "--degree", "2"]).status.code(), Some(2));
    assert_eq!(luinv(&["invariants", "x.json", "--max-degree", "9"]).status.code(), Some(2));
}
