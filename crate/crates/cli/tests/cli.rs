use std::process::{Command, Output};

use serde_json::Value;

use sepvar_cli::spec::GeometrySpec;
use sepvar_core::geometry::Preset;

fn sepvar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sepvar")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON document")
}

#[test]
fn sigma_y_on_fubini_study_has_zero_residual() {
    let out = sepvar(&["sigma-y", "--geometry", "fubini-study", "--fiber-order", "4", "--nu-order", "5"]);
    assert!(out.status.success());
    let doc = json(&out);
    assert_eq!(doc["passed"], true);
    assert_eq!(doc["payload"]["kind"], "sigma-y");
    assert_eq!(doc["payload"]["residual"]["terms"], Value::Array(vec![]));
    assert_eq!(doc["payload"]["sigma_y"]["terms"], doc["payload"]["half_j"]["terms"]);
    assert!(!doc["payload"]["sigma_y"]["terms"].as_array().unwrap().is_empty());
    assert_eq!(doc["input"]["orders"]["jet_order"], 12);
}

#[test]
fn flat_element_is_the_quadratic_monomial() {
    let out = sepvar(&["solve-k", "--geometry", "flat", "--fiber-order", "8"]);
    assert!(out.status.success());
    let terms = json(&out)["payload"]["value"]["terms"].clone();
    let expect: Value = serde_json::json!([
        { "zeta": [1], "zetabar": [1], "coeff": [{ "z": [0], "zbar": [0], "re": "1" }] }
    ]);
    assert_eq!(terms, expect);
}

#[test]
fn verify_all_on_disc_passes_and_echoes_the_seed() {
    let out = sepvar(&["verify", "all", "--geometry", "disc", "--seed", "7"]);
    let doc = json(&out);
    assert!(out.status.success(), "{}", doc["report"]);
    assert_eq!(doc["input"]["seed"], 7);
    assert_eq!(doc["input"]["suite"], "all");
    let checks = doc["report"]["checks"].as_array().unwrap();
    assert!(checks.len() > 100);
    let names: Vec<&str> = checks.iter().map(|c| c["name"].as_str().unwrap()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
}

#[test]
fn output_is_deterministic_across_schedules() {
    let args = ["verify", "kset", "--geometry", "fubini-study", "--seed", "3"];
    let a = sepvar(&args);
    let b = sepvar(&args);
    let mut seq_args = args.to_vec();
    seq_args.push("--sequential");
    let c = sepvar(&seq_args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn failing_check_sets_exit_status() {
    // h = 0 contradicts the deformation generated by ψ = zz̄
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mismatch.toml");
    let text = "preset = \"flat\"\ndimension = 1\n\
        [[psi]]\nz = [1]\nzbar = [1]\nre = \"1\"\n\
        [[h_upper]]\nl = 0\nk = 0\nz = [0]\nzbar = [0]\nre = \"0\"\n";
    std::fs::write(&path, text).unwrap();
    let out = sepvar(&["verify", "kset", "--geometry", path.to_str().unwrap()]);
    let doc = json(&out);
    assert_eq!(doc["passed"], false, "{doc}");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn malformed_rational_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, "dimension = 1\n[[potential]]\nz = [1]\nzbar = [1]\nre = \"1/0\"\n").unwrap();
    let out = sepvar(&["solve-k", "--geometry", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let doc = json(&out);
    assert_eq!(doc["error"]["code"], "parse_error");
    assert!(doc["error"]["message"].as_str().unwrap().contains("line 5"));
}

#[test]
fn jacobi_violation_names_indices() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.toml");
    let text = "dimension = 2\njet_order = 6\n\
        [[g_upper]]\nl = 0\nk = 0\nz = [0, 0]\nzbar = [0, 0]\nre = \"1\"\n\
        [[g_upper]]\nl = 1\nk = 1\nz = [0, 0]\nzbar = [0, 0]\nre = \"1\"\n\
        [[g_upper]]\nl = 0\nk = 1\nz = [0, 1]\nzbar = [0, 0]\nre = \"1\"\n";
    std::fs::write(&path, text).unwrap();
    let out = sepvar(&["solve-k", "--geometry", path.to_str().unwrap()]);
    let doc = json(&out);
    assert_eq!(doc["error"]["code"], "jacobi_violation");
    assert!(doc["error"]["message"].as_str().unwrap().contains("indices"));
    let skipped = sepvar(&["solve-k", "--geometry", path.to_str().unwrap(), "--skip-jacobi", "--fiber-order", "2"]);
    assert!(skipped.status.success());
}

#[test]
fn written_out_geometry_matches_the_preset() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("disc.toml");
    let spec = GeometrySpec::from_potential(&Preset::Disc.potential(1, 12).unwrap());
    assert_eq!(GeometrySpec::parse(&spec.render()).unwrap(), spec);
    std::fs::write(&path, spec.render()).unwrap();
    let from_file = json(&sepvar(&["solve-k", "--geometry", path.to_str().unwrap()]));
    let from_preset = json(&sepvar(&["solve-k", "--geometry", "disc"]));
    assert_eq!(from_file["payload"], from_preset["payload"]);
}

#[test]
fn star_of_coordinates_on_flat_space() {
    let out = sepvar(&[
        "star",
        "--geometry",
        "flat",
        "--nu-order",
        "2",
        "--function",
        r#"[{"z":[0],"zbar":[1],"re":"1"}]"#,
        "--with",
        r#"[{"z":[1],"zbar":[0],"re":"1"}]"#,
    ]);
    let grades = json(&out)["payload"]["value"]["grades"].clone();
    assert_eq!(grades[0]["terms"][0]["z"], serde_json::json!([1]));
    assert_eq!(grades[1]["terms"], serde_json::json!([{ "z": [0], "zbar": [0], "re": "1" }]));
    assert_eq!(grades[2]["terms"], serde_json::json!([]));
}

#[test]
fn missing_potential_is_rejected_for_star_products() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.toml");
    std::fs::write(&path, "dimension = 1\n[[g_upper]]\nl = 0\nk = 0\nz = [0]\nzbar = [0]\nre = \"1\"\n").unwrap();
    let out = sepvar(&["berezin", "--geometry", path.to_str().unwrap()]);
    assert_eq!(json(&out)["error"]["code"], "invalid_argument");
    let k = sepvar(&["solve-k", "--geometry", path.to_str().unwrap()]);
    assert!(k.status.success());
}
