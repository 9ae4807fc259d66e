use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn waring(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_waring")).args(args).output().unwrap()
}

fn waring_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_waring"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn bare_numbers_by_default() {
    let o = waring(&["dims", "--n", "3", "--d", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "35");

    let o = waring(&["ah-rank", "--n", "2", "--deg", "4"]);
    assert_eq!(stdout(&o).trim(), "6");

    let o = waring(&["min-gens", "--n", "3", "--k", "2", "--d", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "5");
}

#[test]
fn json_envelope() {
    let o = waring(&["verify-vanishing", "--n", "2", "--k", "3", "--d", "2", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["command", "config", "elapsed_ms", "result", "version"]);
    assert_eq!(v["command"], "verify-vanishing");
    assert_eq!(v["config"]["seed"], 3);
    assert_eq!(v["config"]["domain"], "auto-prime");
    assert_eq!(v["result"]["regular"], true);
    assert_eq!(v["result"]["degree"], 6);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn probable_negative_exits_two() {
    // four random quadrics in four variables miss some quartics
    let o = waring(&["regular", "--n", "3", "--k", "2", "--d", "2", "--p", "4"]);
    assert_eq!(o.status.code(), Some(2));
    let v = json(&o);
    assert_eq!(v["result"]["regular"], false);
    assert_eq!(v["result"]["certainty"], "probable");
}

#[test]
fn certified_regular_exits_zero() {
    let o = waring(&[
        "regular",
        "--n",
        "3",
        "--k",
        "2",
        "--d",
        "2",
        "--style",
        "root-of-unity",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["result"]["certainty"], "certified");
    assert_eq!(v["result"]["rank"], 35);
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(waring(&["dims", "--bogus"]).status.code(), Some(64));
    assert_eq!(waring(&["dims", "--n", "2"]).status.code(), Some(64));
    assert_eq!(
        waring(&["dims", "--n", "2", "--d", "2", "--threads", "0"])
            .status
            .code(),
        Some(64)
    );
    assert_eq!(waring(&["--help"]).status.code(), Some(0));
}

#[test]
fn long_jobs_need_opt_in() {
    let o = waring(&["regular", "--n", "3", "--k", "2", "--d", "20"]);
    assert_eq!(o.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--long-running"));
}

#[test]
fn bad_modulus_exits_65() {
    // 11 has no cube roots of unity
    let o = waring(&[
        "verify-vanishing",
        "--n",
        "2",
        "--k",
        "3",
        "--d",
        "1",
        "--modulus",
        "11",
    ]);
    assert_eq!(o.status.code(), Some(65));
    let o = waring(&[
        "verify-vanishing",
        "--n",
        "2",
        "--k",
        "3",
        "--d",
        "1",
        "--modulus",
        "15",
    ]);
    assert_eq!(o.status.code(), Some(65));
}

#[test]
fn explicit_modulus_is_used() {
    let o = waring(&[
        "verify-vanishing",
        "--n",
        "2",
        "--k",
        "3",
        "--d",
        "1",
        "--modulus",
        "1000003",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["result"]["modulus"], 1000003);
    assert_eq!(v["config"]["domain"], "modulus");
}

#[test]
fn hilbert_csv() {
    let o = waring(&[
        "hilbert", "--n", "2", "--k", "2", "--d", "2", "--t", "4", "--format", "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "t,hf,conjectured,match\n0,1,1,true\n1,3,3,true\n2,2,2,true\n3,0,0,true\n4,0,0,true\n"
    );
}

#[test]
fn min_gens_sweep_csv() {
    let o = waring(&[
        "min-gens", "--n", "3", "--k", "2", "--d", "3", "--d-max", "4", "--format", "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("d,counting_bound,upper_bound,p_min,certainty"));
    assert_eq!(lines.next(), Some("3,5,8,5,certified"));
    assert_eq!(lines.next(), Some("4,5,8,5,certified"));
    assert_eq!(lines.next(), None);
}

#[test]
fn csv_not_offered_everywhere() {
    let o = waring(&["arrangement", "--n", "2", "--k", "2", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(64));
}

#[test]
fn apolarity_from_stdin() {
    // x0·x1^2 is killed by ∂/∂x0 twice, so it is apolar to x0^2 but not to x0
    let o = waring_stdin(
        &["apolar-check", "--n", "1", "--point", "1,0", "--s", "1", "--input", "-"],
        "x0*x1^2\n",
    );
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["result"]["apolar"], true);
    assert_eq!(v["result"]["derivatives_vanish"], true);

    let o = waring_stdin(
        &["apolar-check", "--n", "1", "--point", "0,1", "--s", "1", "--input", "-"],
        "x0*x1^2\n",
    );
    let v = json(&o);
    assert_eq!(v["result"]["apolar"], false);
    assert_eq!(v["result"]["derivatives_vanish"], false);
}

#[test]
fn unparsable_input_is_an_error() {
    let o = waring_stdin(
        &["apolar-check", "--n", "1", "--point", "1,0", "--s", "1", "--input", "-"],
        "x0*y^2\n",
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn missing_input_file() {
    let o = waring(&[
        "represent",
        "--n",
        "1",
        "--k",
        "2",
        "--d",
        "1",
        "--input",
        "/nonexistent/forms.txt",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("/nonexistent/forms.txt"));
}

#[test]
fn two_squares_of_a_difference() {
    let o = waring_stdin(&["two-squares", "--input", "-"], "x0^2 - x1^2\n");
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["result"]["decomposition"]["residual"], 0.0);
    assert_eq!(v["config"]["domain"], "complex");
}

#[test]
fn count_matches_binomial() {
    let o = waring(&["count-two-squares", "--d", "4", "--seed", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["result"]["count"]["count"], 35);
    assert_eq!(v["result"]["count"]["expected"], 35);
}

#[test]
fn decompose_converges() {
    let o = waring(&["decompose", "--n", "2", "--k", "2", "--d", "2", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["result"]["fit"]["converged"], true);
    assert!(v["result"]["fit"]["residual"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn same_seed_same_report() {
    let args = ["represent", "--n", "2", "--k", "2", "--d", "2", "--seed", "17"];
    let strip = |o: &Output| {
        let mut v = json(o);
        v.as_object_mut().unwrap().remove("elapsed_ms");
        v
    };
    assert_eq!(strip(&waring(&args)), strip(&waring(&args)));
    let other = strip(&waring(&[
        "represent",
        "--n",
        "2",
        "--k",
        "2",
        "--d",
        "2",
        "--seed",
        "18",
    ]));
    assert_ne!(strip(&waring(&args)), other);
}
