use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_singular-weyl"))
        .args(args)
        .env_remove("SINGULAR_WEYL_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn admissible_pairs_of_75() {
    let o = run(&["admissible", "--n", "3", "--lambda", "75"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "(5,2) (3,9) (1,36)");
}

#[test]
fn admissible_values_up_to_10() {
    let o = run(&["admissible", "--n", "4", "--lambda-max", "10"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "4 6 8 10");
}

#[test]
fn non_admissible_lambda_is_a_note() {
    let o = run(&["admissible", "--n", "2", "--lambda", "3"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o) + &stderr(&o);
    assert!(text.contains("not admissible"));
    assert!(!text.contains('('));
}

#[test]
fn admissible_json_and_csv() {
    let o = run(&["admissible", "--n", "3", "--lambda", "75", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.to_string().contains("36"));
    let o = run(&["admissible", "--n", "4", "--lambda-max", "10", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 5);
}

#[test]
fn verify_n3_schrodinger() {
    let o = run(&["verify", "--n", "3", "--q", "0", "--preset", "schrodinger", "--lambda-max", "60"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["summary"]["failed"], 0);
    assert!(report["summary"]["warned"].as_u64().unwrap() > 0);
    assert!(report["summary"]["max_residual"]["pde"].as_f64().unwrap() < 1e-6);
}

#[test]
fn verify_n1() {
    assert_eq!(code(&run(&["verify", "--n", "1", "--q", "1", "--lambda-max", "10"])), 0);
}

#[test]
fn zero_s_is_rejected() {
    let o = run(&["verify", "--n", "3", "--q", "0", "--s", "0"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("s must be nonzero"));
}

#[test]
fn invalid_options_exit_2() {
    for args in [
        &["admissible", "--n", "0"][..],
        &["verify", "--n", "3", "--lambda", "4"],
        &["ktypes", "--n", "3", "--m-min", "5", "--m-max", "1"],
        &["verify", "--n", "2", "--tol-pde", "-1"],
        &["admissible", "--n", "3", "--s", "abc"],
        &["structure", "--n", "3", "--format", "csv"],
    ] {
        assert_eq!(code(&run(args)), 2, "{args:?}");
    }
}

#[test]
fn failed_checks_exit_1() {
    let o = run(&["verify", "--n", "2", "--q", "0", "--lambda-max", "6", "--tol-pde", "1e-18"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("FAIL"));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(report["summary"]["failed"].as_u64().unwrap() > 0);
}

#[test]
fn unwritable_output_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("out.csv");
    let o = run(&["plot-data", "--figure", "levels", "--n", "3", "--output", path.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ktypes.csv");
    let args = ["ktypes", "--n", "3", "--lambda-max", "10", "--format", "csv"];
    let direct = run(&args);
    let mut with_file = args.to_vec();
    with_file.extend(["--output", path.to_str().unwrap()]);
    let o = run(&with_file);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
    assert!(stdout(&direct).starts_with("m,l,k,lambda,"));
}

#[test]
fn structure_chains() {
    let o = run(&["structure", "--n", "3", "--q", "3"]);
    assert!(stdout(&o).contains("case (2)"));
    let o = run(&["structure", "--n", "2", "--q", "2"]);
    assert!(stdout(&o).contains("case (4)"));
    let o = run(&["structure", "--n", "3", "--q", "0", "--lambda", "75"]);
    let text = stdout(&o);
    for h in ["H_{5,2}", "H_{3,9}", "H_{1,36}"] {
        assert!(text.contains(h), "{text}");
    }
    assert_eq!(text.matches("irreducible").count(), 4);
}

#[test]
fn plot_data_figures() {
    let o = run(&["plot-data", "--figure", "levels", "--n", "3", "--lambda-max", "100"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("lambda,l,k\n"));

    let o = run(&["plot-data", "--figure", "lattice", "--n", "3", "--q", "0", "--lambda", "75", "--m-max", "20"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let ks: std::collections::BTreeSet<i64> =
        v["nodes"].as_array().unwrap().iter().map(|n| n["index"]["k"].as_i64().unwrap()).collect();
    assert_eq!(ks.into_iter().collect::<Vec<_>>(), vec![2, 9, 36]);

    let o = run(&["plot-data", "--figure", "heisenberg", "--n", "3", "--q", "0", "--lambda-max", "30"]);
    assert!(stdout(&o).starts_with("digraph"));
}

#[test]
fn outputs_are_deterministic() {
    let args = ["verify", "--n", "2", "--q", "1", "--lambda-max", "12", "--seed", "7"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = ["plot-data", "--figure", "heisenberg", "--n", "3", "--q", "0", "--format", "json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn seed_variable_overrides_flag() {
    let args = ["verify", "--n", "2", "--q", "1", "--lambda-max", "12"];
    let with_env = |seed: &str, extra: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_singular-weyl"))
            .args(args)
            .args(extra)
            .env("SINGULAR_WEYL_SEED", seed)
            .output()
            .unwrap()
            .stdout
    };
    let by_flag = run(&[&args[..], &["--seed", "5"]].concat()).stdout;
    assert_eq!(with_env("5", &["--seed", "9"]), by_flag);
    assert_ne!(with_env("6", &[]), by_flag);
}
