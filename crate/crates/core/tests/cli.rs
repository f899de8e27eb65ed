use std::path::PathBuf;
use std::process::{Command, Output};

use gsi_core::constructors::fixtures;
use gsi_core::{canonical_ideal, emit_gsi, parse_gsi};

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("fixtures");
    p.push(name);
    p.display().to_string()
}

fn gsi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gsi"))
        .args(args)
        .output()
        .expect("spawn gsi")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn gorenstein_n2() {
    let o = gsi(&["gorenstein", &fixture("N2.gsi")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "gorenstein: true\n");
}

#[test]
fn gorenstein_ex2_prints_witness() {
    let o = gsi(&["gorenstein", &fixture("EX2.gsi")]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.starts_with("gorenstein: false\n"));
    assert!(out.contains("witness: (0,1)"));
}

#[test]
fn check_rho_json_matches_exit_code() {
    let ex2 = fixture("EX2.gsi");
    let o = gsi(&["check", "rho", &ex2, &ex2, "--semigroup", &ex2, "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(v["flags"]["equality_everywhere"], false);
    assert_eq!(v["flags"]["is_canonical"], false);
}

#[test]
fn validate_broken_points_at_e1() {
    let o = gsi(&["validate", &fixture("EX2_broken.gsi")]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("counterexample E1"), "{out}");
    assert!(out.contains("(3,4)") && out.contains("(4,3)") && out.contains("(3,3)"), "{out}");
}

#[test]
fn validate_json_failure() {
    let o = gsi(&["validate", &fixture("EX2_broken.gsi"), "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], false);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn syntax_error_exits_2_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.gsi");
    std::fs::write(&path, "gsi 1\nr 2\nmin 0 x\n").unwrap();
    let o = gsi(&["info", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.starts_with("error: "), "{err}");
    assert!(err.contains("line 3, column 7"), "{err}");
}

#[test]
fn usage_error_exits_2() {
    assert_eq!(gsi(&["check", "all"]).status.code(), Some(2));
    let ex2 = fixture("EX2.gsi");
    assert_eq!(gsi(&["check", "all", &ex2, &ex2]).status.code(), Some(2));
}

#[test]
fn canonical_of_n1() {
    let o = gsi(&["canonical", &fixture("N1.gsi")]);
    assert_eq!(o.status.code(), Some(0));
    let k = parse_gsi(&stdout(&o)).unwrap();
    assert!(k.equals(&canonical_ideal(&fixtures::n1()).unwrap()).unwrap());
}

#[test]
fn dual_methods_agree_for_canonical_j() {
    let dir = tempfile::tempdir().unwrap();
    let k = dir.path().join("k.gsi");
    let ex2 = fixture("EX2.gsi");
    assert!(gsi(&["canonical", &ex2, "-o", k.to_str().unwrap()]).status.success());
    let k = k.to_str().unwrap();
    let cd = gsi(&["dual", k, &ex2, "--method", "cd"]);
    let fib = gsi(&["dual", k, &ex2, "--method", "fiber"]);
    assert!(cd.status.success() && fib.status.success());
    assert_eq!(stdout(&cd), stdout(&fib));
}

#[test]
fn gen_outputs_parse() {
    for args in [
        vec!["gen", "numerical", "3", "4", "5"],
        vec!["gen", "node", "3"],
        vec!["gen", "random", "--semigroup", "FIX", "--seed", "4", "--max-span", "5"],
    ] {
        let ex2 = fixture("EX2.gsi");
        let args: Vec<&str> = args.iter().map(|a| if *a == "FIX" { ex2.as_str() } else { a }).collect();
        let o = gsi(&args);
        assert!(o.status.success(), "{args:?}");
        let text = stdout(&o);
        assert_eq!(emit_gsi(&parse_gsi(&text).unwrap()), text);
    }
    let n1 = fixture("N1.gsi");
    let o = gsi(&["gen", "product", &n1, &n1]);
    assert_eq!(parse_gsi(&stdout(&o)).unwrap().dim(), 2);
}

#[test]
fn is_canonical_cli() {
    let dir = tempfile::tempdir().unwrap();
    let k = dir.path().join("k.gsi");
    let n1 = fixture("N1.gsi");
    gsi(&["canonical", &n1, "-o", k.to_str().unwrap()]);
    let o = gsi(&["is-canonical", k.to_str().unwrap(), &n1]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(0), "canonical: true\n".into()));
    let o = gsi(&["is-canonical", &n1, &n1]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(1), "canonical: false\n".into()));
}

#[test]
fn check_all_passes_on_ex2() {
    let ex2 = fixture("EX2.gsi");
    let o = gsi(&["check", "all", &ex2, &ex2, "--semigroup", &ex2, "--seed", "3", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], true, "{}", stdout(&o));
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn info_plot_marks_maximals() {
    let o = gsi(&["info", &fixture("EX2.gsi"), "--plot"]);
    let out = stdout(&o);
    assert!(out.contains("maximals: 3"));
    assert_eq!(out.matches('M').count(), 3);
}

#[test]
fn fixture_files_round_trip() {
    for name in ["N1.gsi", "N2.gsi", "NODE2.gsi", "EX2.gsi"] {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        let once = emit_gsi(&parse_gsi(&text).unwrap());
        assert_eq!(emit_gsi(&parse_gsi(&once).unwrap()), once, "{name}");
    }
    let ex2 = std::fs::read_to_string(fixture("EX2.gsi")).unwrap();
    assert_eq!(emit_gsi(&fixtures::ex2()), ex2);
}
