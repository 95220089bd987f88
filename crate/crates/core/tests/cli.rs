use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn semiinv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semiinv")).args(args).output().expect("binary runs")
}

fn with_data(cmd: &str, files: &[&str], extra: &[&str]) -> Output {
    let paths: Vec<String> = files.iter().map(|f| data(f).display().to_string()).collect();
    let mut args = vec![cmd];
    args.extend(paths.iter().map(String::as_str));
    args.extend_from_slice(extra);
    semiinv(&args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn temp_file(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("semiinv-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn gens_on_kronecker() {
    let o = with_data("gens", &["kronecker.json"], &[]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "tr(a,~a) = 2*x_a_1_1*x_a_2_2 - 2*x_a_1_2*x_a_2_1\n\
         tr(a,~b) = x_a_1_1*x_b_2_2 - x_a_1_2*x_b_2_1 - x_a_2_1*x_b_1_2 + x_a_2_2*x_b_1_1\n\
         tr(b,~b) = 2*x_b_1_1*x_b_2_2 - 2*x_b_1_2*x_b_2_1\n"
    );
}

#[test]
fn gens_on_loop_includes_plain_trace() {
    let o = with_data("gens", &["loop.json"], &[]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "tr(a) = x_a_1_1 + x_a_2_2"));
}

#[test]
fn gens_rejects_dimension_three() {
    let o = with_data("gens", &["counterexample.json"], &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).is_empty());
    assert!(stderr(&o).contains("dimension 3"), "{}", stderr(&o));
}

#[test]
fn routes_listing() {
    let o = with_data("routes", &["kronecker.json"], &[]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    for r in ["(a,~a)", "(b,~b)", "(a,~b)"] {
        assert!(lines.iter().any(|l| l.starts_with(&format!("{r}\t"))), "{r}");
    }
    assert!(lines.contains(&"(a,~a,b,~b)\tweight [1:-2, 2:2]".to_string()));
}

#[test]
fn routes_on_arrowless_quiver_is_empty() {
    let p = temp_file("empty.json", r#"{"vertices": ["1", "2"], "arrows": []}"#);
    let o = semiinv(&["routes", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
}

#[test]
fn malformed_quiver_reports_position() {
    let p = temp_file("bad.json", "{\"vertices\": [\"1\"],\n \"arrows\": [ }");
    let o = semiinv(&["routes", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bad.json") && stderr(&o).contains("line 2"), "{}", stderr(&o));
    let p = temp_file("dangling.json", r#"{"vertices": ["1"], "arrows": [{"name": "a", "tail": "1", "head": "9"}]}"#);
    let o = semiinv(&["routes", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("arrows[0].head"), "{}", stderr(&o));
}

#[test]
fn dz_prints_coefficients_and_combinations() {
    let o = with_data("dz", &["kronecker.json", "kronecker_dz_swapped.json"], &[]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("y_1_1*y_1_2*y_2_1*y_2_2: -x_a_1_1^2*x_b_2_2^2 + "), "{out}");
    assert!(out.contains("  = 1/2*tr(a,~a)*tr(b,~b) - tr(a,~b)^2\n"), "{out}");
    assert!(out.contains("  = 1/4*tr(a,~a)^2\n"), "{out}");
}

#[test]
fn dz_rejects_bad_cells() {
    let p = temp_file("bad_dz.json", r#"{"i": ["1"], "j": ["2"], "F": [["id"]]}"#);
    let o = semiinv(&["dz", data("kronecker.json").to_str().unwrap(), p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("cell (1,1)"), "{}", stderr(&o));
}

#[test]
fn reduce_repeated_route() {
    let o = with_data("reduce", &["kronecker.json"], &["(a,~b,a,~b)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "tr(a,~b,a,~b) = -1/2*tr(a,~a)*tr(b,~b) + tr(a,~b)^2\ncheck on generic matrices: equal\n"
    );
    let o = with_data("reduce", &["kronecker.json"], &["(a,b)"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_suites_pass() {
    for args in [vec!["verify", "lemma1"], vec!["verify", "prop1", "--k", "2"], vec!["verify", "counterexample"]] {
        let o = semiinv(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}\n{}", stdout(&o));
        assert!(stdout(&o).contains(": pass ("), "{}", stdout(&o));
    }
}

#[test]
fn verify_json_report() {
    let o = semiinv(&["verify", "lemma1", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["status"], "pass");
    assert_eq!(v["command"], "verify lemma1 --k 3 --trials 20 --seed 0xc0ffee");
    let items = v["items"].as_array().unwrap();
    assert_eq!(items.len(), 8);
    assert!(items.iter().all(|i| i["equal"] == true && i["expected"] == i["actual"]));
}

#[test]
fn verify_usage_errors() {
    assert_eq!(semiinv(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(semiinv(&["verify", "prop1", "--k", "9"]).status.code(), Some(2));
    assert_eq!(semiinv(&["verify", "lemma1", "--seed", "zz"]).status.code(), Some(2));
    assert_eq!(semiinv(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(semiinv(&[]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let a = semiinv(&["verify", "dz", "--seed", "12345"]);
    let b = semiinv(&["verify", "dz", "--seed", "12345"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let a = with_data("routes", &["three_vertex.json"], &[]);
    let b = with_data("routes", &["three_vertex.json"], &[]);
    assert_eq!(a.stdout, b.stdout);
}
