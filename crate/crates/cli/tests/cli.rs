use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use tropspec::bounds::BoundReport;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tropspec"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn fixture(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tropspec-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn troots_double_root() {
    let o = run_stdin(&["troots", "-", "--json"], "[1, 2, 0, -1]");
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["degree"], 3);
    let mt = v["max_times"].as_array().unwrap();
    assert!((mt[0].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-12);
    assert_eq!(v["roots"]["entries"][0]["multiplicity"], 2);
}

#[test]
fn troots_max_plus_with_missing_terms() {
    let o = run_stdin(&["troots", "--max-plus", "-", "--csv"], r#"[0, "-inf", 0]"#);
    assert!(o.status.success());
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("value,max_times,multiplicity"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0].parse::<f64>().unwrap(), 0.0);
    assert_eq!(row[2], "2");
}

#[test]
fn constant_polynomial_exits_2() {
    let o = run_stdin(&["troots", "-"], "[5]");
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("degree ≥ 1 required"));
}

#[test]
fn malformed_input_exits_2() {
    let o = run_stdin(&["teig", "-", "--format", "json-dense"], "[[1, 2], [3]]");
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["bounds", "/nonexistent/matrix.json"]);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn usage_error_exits_2() {
    assert_eq!(run(&["bounds"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn teig_routes_agree() {
    let a = fixture("teig.json", "[[1, 10], [10, 1]]");
    let o = run(&["teig", a.to_str().unwrap(), "--method", "both", "--json"]);
    assert!(o.status.success());
    let v = json(&o);
    assert!(v["routes_agree"].as_bool().unwrap());
    assert!((v["gammas"][0].as_f64().unwrap() - 10.0).abs() < 1e-12);
    assert!((v["rho_max"].as_f64().unwrap() - 10.0).abs() < 1e-12);
}

#[test]
fn teig_coordinate_format() {
    let a = fixture("a.mtx", "% diag\n3 3\n1 1 8\n2 2 2\n3 3 1\n");
    let o = run(&["teig", a.to_str().unwrap(), "--json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let g: Vec<f64> = json(&o)["gammas"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(g.len(), 3);
    for (x, y) in g.iter().zip([8.0, 2.0, 1.0]) {
        assert!((x - y).abs() < 1e-12);
    }
}

#[test]
fn bounds_json_roundtrip() {
    let a = fixture("bounds.csv", "1,2+i,0\n0,3,-1\n4i,0,1\n");
    let o = run(&["bounds", a.to_str().unwrap(), "--lower", "--json"]);
    assert!(o.status.success());
    let report: BoundReport = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report.n, 3);
    assert_eq!(report.rows.len(), 3);
    let again = serde_json::to_string_pretty(&report).unwrap();
    assert_eq!(again.trim_end(), stdout(&o).trim_end());
}

#[test]
fn bounds_csv_columns() {
    let o = run(&["bounds", "--random", "5", "--seed", "9", "--csv", "--k-range", "2..4"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(
        lines.next(),
        Some("k,eig_prefix,trop_prefix,upper_constant,ratio,upper_holds,lower_constant,lower_holds,diagnostics")
    );
    let ks: Vec<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(ks, ["2", "3", "4"]);
}

#[test]
fn random_bounds_are_deterministic() {
    let args = ["bounds", "--random", "6", "--seed", "42", "--json"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["meta"]["seed"], 42);
    let c = run(&["bounds", "--random", "6", "--seed", "43", "--json"]);
    assert_ne!(json(&a)["meta"]["input_hash"], json(&c)["meta"]["input_hash"]);
}

#[test]
fn verify_suites_pass_and_repeat() {
    for suite in ["upper", "lower", "hop", "proof-chain", "friedland", "circulation"] {
        let args = ["verify", "--suite", suite, "--instances", "15", "--nmax", "5", "--seed", "7", "--json"];
        let a = run(&args);
        assert!(a.status.success(), "{suite}: {}", stdout(&a));
        let v = json(&a);
        assert_eq!(v["failed"], 0);
        assert_eq!(v["passed"], 15);
        assert_eq!(a.stdout, run(&args).stdout);
    }
}

#[test]
fn companion_table() {
    let p = fixture("poly.txt", "1 2 0 -1\n");
    let o = run(&["companion", p.to_str().unwrap(), "--json"]);
    assert!(o.status.success());
    let rows = json(&o);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[2]["exact_upper"].as_f64().unwrap(), 1.0);
}

#[test]
fn decompose_one_based() {
    let b = fixture("circ.json", "[[0, 2], [2, 0]]");
    let o = run(&["decompose", b.to_str().unwrap(), "--json"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["weight"], 2);
    let parts = v["parts"].as_array().unwrap();
    assert_eq!(parts.len(), 2);
    for p in parts {
        assert_eq!(p, &serde_json::json!([[1, 2], [2, 1]]));
    }
}

#[test]
fn decompose_rejects_unbalanced() {
    let b = fixture("bad.csv", "1,0\n1,0\n");
    assert_eq!(run(&["decompose", b.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn quiet_suppresses_pretty_output() {
    let o = run_stdin(&["troots", "-", "--quiet"], "[1, 2, 0, -1]");
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
}
