use curvop::koszul::{curved_two_dim_instance, strict_associative_instance};
use curvop_cli::algebra_file::{parse_algebra, parse_module, render_algebra, FileError};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn curvop(args: &[&str], window: Option<&str>) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_curvop"));
    c.args(args).env_remove("CURVOP_WINDOW");
    if let Some(w) = window {
        c.env("CURVOP_WINDOW", w);
    }
    c.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_tmp(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn curved_instance_round_trips_byte_identically() {
    let text = std::fs::read_to_string(data("curved_two_dim.alg")).unwrap();
    let a = parse_algebra(&text).unwrap();
    assert_eq!(render_algebra(&a), text);
    assert_eq!(render_algebra(&curved_two_dim_instance()), text);
    let strict = std::fs::read_to_string(data("strict_assoc.alg")).unwrap();
    assert_eq!(render_algebra(&parse_algebra(&strict).unwrap()), strict);
    assert_eq!(render_algebra(&strict_associative_instance()), strict);
}

#[test]
fn schema_errors_carry_record_locators() {
    let cases = [
        (r#"{"basis": [{"id": "u", "degree": 0}]}"#, "basis[0]: missing field \"weight\""),
        (r#"{"basis": [{"id": "u", "degree": 0, "weight": 0, "x": 1}]}"#, "basis[0]: unknown field \"x\""),
        (r#"{"basis": [{"id": "u", "degree": 0, "weight": 0}], "predifferential": [[0, 3, 1, 1]]}"#, "predifferential[0]"),
        (r#"{"basis": [{"id": "u", "degree": 0, "weight": 0}], "operations": {"2": [[0, 0, 0, 1, 0]]}}"#, "operations[\"2\"][0]: zero denominator"),
        (r#"{"basis": [{"id": "u", "degree": 0, "weight": 0}], "operations": {"2": [[0, 0, 1, 1]]}}"#, "operations[\"2\"][0]: expected 5 entries"),
        (r#"{"basis": [{"id": "u", "degree": 0, "weight": 0}], "operations": {"two": []}}"#, "arity key \"two\""),
        (r#"{"basis": [{"id": "u", "degree": 0, "weight": 0}, {"id": "u", "degree": 1, "weight": 0}]}"#, "basis[1]: duplicate id"),
    ];
    for (text, want) in cases {
        let e = parse_algebra(text).unwrap_err();
        assert!(matches!(e, FileError::Schema(_)), "{text}: {e}");
        assert!(e.to_string().contains(want), "{text}: got {e}, want {want}");
    }
    assert!(matches!(parse_algebra("{"), Err(FileError::Syntax(_))));
}

#[test]
fn a_one_atom_zero_algebra_loads_and_passes() {
    let a = parse_algebra(r#"{"basis": [{"id": "u", "degree": 0, "weight": 0}], "predifferential": [], "operations": {}}"#).unwrap();
    assert_eq!(a.module.dim(), 1);
    let dir = tempfile::tempdir().unwrap();
    let p = write_tmp(&dir, "zero.alg", &render_algebra(&a));
    let o = curvop(&["check-ainfty", p.to_str().unwrap(), "--n-max", "3"], None);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn check_ainfty_passes_on_the_shipped_instances() {
    for f in ["strict_assoc.alg", "curved_two_dim.alg"] {
        let o = curvop(&["check-ainfty", data(f).to_str().unwrap(), "--n-max", "4"], None);
        assert_eq!(o.status.code(), Some(0), "{f}: {}", stdout(&o));
        assert!(stdout(&o).ends_with("result: PASS\n"));
    }
}

#[test]
fn a_sign_flip_in_m2_fails_at_arity_one() {
    let text = std::fs::read_to_string(data("curved_two_dim.alg")).unwrap();
    let flipped = text.replace("[1, 1, 0, 1, 1]", "[1, 1, 0, -1, 1]");
    assert_ne!(flipped, text);
    let dir = tempfile::tempdir().unwrap();
    let p = write_tmp(&dir, "flipped.alg", &flipped);
    let o = curvop(&["check-ainfty", p.to_str().unwrap(), "--n-max", "4"], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("first failing arity: 1"), "{}", stdout(&o));
}

#[test]
fn bad_files_exit_with_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_tmp(&dir, "bad.alg", r#"{"basis": [{"id": "u", "degree": 0}]}"#);
    let o = curvop(&["check-ainfty", p.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("basis[0]"));
    let o = curvop(&["check-ainfty", "/nonexistent/file.alg"], None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn ainfty_relations_json_lists_the_six_terms_at_arity_two() {
    let o = curvop(&["ainfty-relations", "--n", "2", "--format", "json"], None);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["command"], "ainfty-relations");
    assert_eq!(v["passed"], true);
    assert_eq!(v["window"]["max_arity"], 4);
    let rels = v["report"]["relations"].as_array().unwrap();
    assert_eq!(rels.len(), 1);
    assert_eq!(rels[0]["n"], 2);
    assert_eq!(rels[0]["terms"].as_array().unwrap().len(), 6);
}

#[test]
fn a_wrong_curvature_sign_override_fails() {
    let o = curvop(&["ainfty-relations", "--n-max", "3", "--curvature-sign", "1"], None);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    let o = curvop(&["ainfty-relations", "--n-max", "3", "--curvature-sign", "-1"], None);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = curvop(&["verify-signs", "--curvature-sign", "+1"], Some("2,2,1"));
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    let o = curvop(&["ainfty-relations", "--curvature-sign", "2"], None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn the_window_comes_from_flags_then_environment_then_defaults() {
    let o = curvop(&["koszul-dual"], None);
    assert!(stdout(&o).starts_with("# curvop koszul-dual | max-arity=4 max-weight=5 max-filtration=3\n"), "{}", stdout(&o));
    let o = curvop(&["koszul-dual"], Some("3,4,2"));
    assert!(stdout(&o).starts_with("# curvop koszul-dual | max-arity=3 max-weight=4 max-filtration=2\n"), "{}", stdout(&o));
    let o = curvop(&["koszul-dual", "--max-weight", "3"], Some("3,4,2"));
    assert!(stdout(&o).starts_with("# curvop koszul-dual | max-arity=3 max-weight=3 max-filtration=2\n"), "{}", stdout(&o));
    assert_eq!(o.status.code(), Some(0));
    let o = curvop(&["koszul-dual"], Some("3,4"));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("CURVOP_WINDOW"));
}

#[test]
fn output_is_deterministic() {
    for args in [&["verify-signs", "--format", "json"][..], &["cobar"][..]] {
        let a = curvop(args, Some("2,3,1"));
        let b = curvop(args, Some("2,3,1"));
        assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn gr_homology_of_a_module_file() {
    // d(a) = b inside weight 0; d(a) = c crosses into weight 1 and vanishes on Gr
    let text = r#"{
  "basis": [
    {"id": "a", "degree": 1, "weight": 0},
    {"id": "b", "degree": 0, "weight": 0},
    {"id": "c", "degree": 0, "weight": 1}
  ],
  "predifferential": [[1, 0, 1, 1], [2, 0, 1, 1]]
}"#;
    assert_eq!(parse_module(text).unwrap().dim(), 3);
    let dir = tempfile::tempdir().unwrap();
    let p = write_tmp(&dir, "m.json", text);
    let o = curvop(&["gr-homology", p.to_str().unwrap(), "--format", "json"], None);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let nonzero: Vec<_> = v["report"]["cells"].as_array().unwrap().iter().filter(|c| c["dim"] != 0).collect();
    assert_eq!(nonzero.len(), 1);
    assert_eq!((nonzero[0]["weight"].as_u64(), nonzero[0]["degree"].as_i64()), (Some(1), Some(0)));
}

#[test]
fn small_window_sweeps_pass() {
    for cmd in ["bar", "cobar", "syzygy-h0", "counit-check"] {
        let o = curvop(&[cmd, "--max-arity", "2", "--max-weight", "3", "--max-filtration", "2"], None);
        assert_eq!(o.status.code(), Some(0), "{cmd}: {}", stdout(&o));
        assert!(stdout(&o).starts_with(&format!("# curvop {cmd} | max-arity=2 max-weight=3 max-filtration=2\n")));
    }
}

#[test]
fn unknown_subcommands_are_rejected() {
    let o = curvop(&["frobnicate"], None);
    assert_ne!(o.status.code(), Some(0));
}
