use std::process::{Command, Output};

fn run(cmdline: &str) -> Output {
    run_args(&cmdline.split_whitespace().collect::<Vec<_>>())
}

fn run_args(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ehrlimit"))
        .args(args)
        .env_remove("EHRLIMIT_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

#[test]
fn hstar_plain_output() {
    let out = run("hstar --family S --d 5");
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "1 1 1 1 1 1\n");

    let out = run("hstar --family bidiagonal --m 2 --d 14");
    assert!(stdout(&out).starts_with("1 1 4 20 84 356 "));

    let out = run("hstar --family qn --n 2");
    assert_eq!(stdout(&out), "1 7 15 14 15 7 1\n");
}

#[test]
fn hstar_json_output() {
    let out = run("hstar --family qn --n 2 --json");
    assert_eq!(
        stdout(&out),
        "{\"hstar\":[1,7,15,14,15,7,1],\"dim\":6,\"volume\":60}\n"
    );
}

#[test]
fn hstar_from_matrix_files() {
    let dir = tempfile::tempdir().unwrap();
    let text = dir.path().join("p24.txt");
    std::fs::write(&text, "# P_{2,4}\n1 1 0\n0 2 1\n0 0 2\n").unwrap();
    let out = run_args(&["hstar", "--matrix", text.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "1 1 2\n");

    let json = dir.path().join("tri.json");
    std::fs::write(&json, r#"{"vertices": [[1, 0], [1, 2]]}"#).unwrap();
    let out = run_args(&["hstar", "--matrix", json.to_str().unwrap()]);
    assert_eq!(stdout(&out), "1 1\n");

    let lower = dir.path().join("lower.txt");
    std::fs::write(&lower, "2 0\n1 1\n").unwrap();
    assert_eq!(
        code(&run_args(&["hstar", "--matrix", lower.to_str().unwrap()])),
        3
    );
    let out = run_args(&["hstar", "--matrix", lower.to_str().unwrap(), "--general"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "1 1\n");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&run("hstar --family S")), 2);
    assert_eq!(code(&run("hstar")), 2);
    assert_eq!(code(&run("hstar --family bidiagonal --m 1 --d 4")), 2);
    assert_eq!(code(&run("verify no-such-suite")), 2);
    assert_eq!(code(&run("frobnicate")), 2);
}

#[test]
fn limit_certified() {
    let out = run("limit --family bidiagonal --m 2 --degree 3 --mode certified");
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["prefix"], serde_json::json!([1, 1, 4, 20]));
    assert!(v["modes"]
        .as_array()
        .unwrap()
        .iter()
        .all(|m| m == "certified"));
}

#[test]
fn limit_certified_needs_gcd_one() {
    let out = run("limit --family multidiagonal --a 4,2 --degree 1 --mode certified");
    assert_eq!(code(&out), 2);
}

#[test]
fn limit_empirical_q_of_n() {
    let out = run("limit --family qn --degree 8 --mode empirical --window 2");
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(
        v["prefix"],
        serde_json::json!([1, 7, 15, 14, 16, 14, 16, 14, 16])
    );
}

#[test]
fn limit_crosspolytope_exits_4() {
    let out = run("limit --family crosspolytope --degree 1 --mode empirical --d-max 10");
    assert_eq!(code(&out), 4);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["unstable"], serde_json::json!([1]));
    assert_eq!(v["stable"], serde_json::json!(false));
}

#[test]
fn budget_exceeded_exits_5() {
    let args = "limit --family bidiagonal --m 2 --degree 5 --mode certified";
    let out = run(&format!("{args} --budget 1000"));
    assert_eq!(code(&out), 5);
    assert!(String::from_utf8_lossy(&out.stderr).contains("2097152"));

    let out = Command::new(env!("CARGO_BIN_EXE_ehrlimit"))
        .args(args.split_whitespace())
        .env("EHRLIMIT_BUDGET", "1000")
        .output()
        .unwrap();
    assert_eq!(code(&out), 5);
}

#[test]
fn verify_suites() {
    for args in [
        "verify recursion --max 40",
        "verify fkh-census --d 14",
        "verify jacobsthal --max 20",
    ] {
        let out = run(args);
        assert_eq!(code(&out), 0, "{args:?}: {}", stdout(&out));
    }
}

#[test]
fn verify_lemma_powers_reports_k_1() {
    let out = run("verify lemma-powers --max 40");
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("FAIL k = 1: got 0, expected 1"));
    assert!(text.ends_with("lemma-powers: 39/40 passed\n"));
}

#[test]
fn oracle_command() {
    let out = run("oracle --family S --d 1 --t-max 3");
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "1 3 5 7 consistent\n");

    let out = run("oracle --family bidiagonal --m 2 --d 5 --t-max 3");
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).ends_with(" consistent\n"));

    assert_eq!(code(&run("oracle --family S --d 8 --t-max 3")), 6);
    assert_eq!(code(&run("oracle --family S --d 2 --t-max 7")), 6);
}

#[test]
fn output_is_deterministic() {
    for args in [
        "hstar --family bidiagonal --m 3 --d 9 --json",
        "limit --family bidiagonal --m 2 --degree 4 --mode empirical",
        "hstar --family qn --n 3 --threads 1",
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let serial = run("hstar --family bidiagonal --m 2 --d 16 --threads 1");
    let parallel = run("hstar --family bidiagonal --m 2 --d 16 --threads 4");
    assert_eq!(serial.stdout, parallel.stdout);
}

#[test]
fn json_round_trips() {
    for args in [
        "hstar --family multidiagonal --a 3,2 --d 6 --json",
        "limit --family multidiagonal --a 3,2 --degree 2 --mode empirical",
        "limit --family freesum --q 1 --k 2 --degree 3 --mode empirical",
        "oracle --family S --d 3 --t-max 4 --json",
    ] {
        let out = run(args);
        let text = stdout(&out);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string(&v).unwrap() + "\n", text, "{args:?}");
    }
}

#[test]
fn large_coefficients_stay_exact_in_json() {
    let out = run("hstar --family bidiagonal --m 7 --d 9 --json");
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["volume"].to_string(), 7u64.pow(7).to_string());
}
