use std::process::Command;

use serde_json::Value;
use stochgame::gamefile::{bundled_file, GameFile};
use stochgame::numerics::parse_rational;

struct Run {
    code: i32,
    stdout: Value,
    stderr: String,
}

fn stochgame(args: &[&str]) -> Run {
    stochgame_env(args, &[])
}

fn stochgame_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_stochgame"));
    cmd.args(args).env_remove("BNE_TOLERANCE");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    let text = String::from_utf8(out.stdout).unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: serde_json::from_str(&text).unwrap_or(Value::Null),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn exact(v: &Value) -> &str {
    v["exact"].as_str().unwrap_or_else(|| panic!("no exact field in {v}"))
}

fn error_kind(run: &Run) -> String {
    let err: Value = serde_json::from_str(run.stderr.trim()).expect("structured error");
    err["error"]["kind"].as_str().unwrap().to_string()
}

#[test]
fn absorbing_pair_is_nash_at_three_fifths() {
    let run = stochgame(&["verify-nash", "ex-sec-set.json", "--f", "1,0;1", "--g", "1,0;1", "--beta", "3/5"]);
    assert_eq!(run.code, 0);
    let nash = &run.stdout["nash"];
    assert_eq!(nash["is_nash"], true);
    let v1: Vec<&str> = nash["values"]["p1"].as_array().unwrap().iter().map(exact).collect();
    assert_eq!(v1, ["10", "15/2"]);
    assert_eq!(run.stdout["command"], "verify-nash");
    assert_eq!(exact(&run.stdout["inputs"]["discount"]["beta"]), "3/5");
}

#[test]
fn below_threshold_reports_a_deviation() {
    let run = stochgame(&["verify-nash", "ex-sec-set", "--f", "1,0;1", "--g", "1,0;1", "--beta", "1/2"]);
    assert_eq!(run.code, 1);
    let w = &run.stdout["nash"]["witness"];
    assert_eq!(w["player"], 2);
    assert_eq!(exact(&w["gain"]), "1/5");
}

#[test]
fn rate_certificate_of_the_absorbing_example() {
    let run = stochgame(&[
        "certify", "ct-ex2.json", "--set", "N", "--alpha-hat", "2/3", "--f", "1,0;1", "--g", "1,0;1",
    ]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let cert = &run.stdout["certificate"];
    assert_eq!(cert["certified"], true);
    assert_eq!(exact(&cert["alpha0"]), "2/3");
    assert_eq!(exact(&cert["player_alpha0"]["p1"]), "1");
    assert_eq!(cert["condition_set"], "N");
}

#[test]
fn state_independent_rate_certificate() {
    let run = stochgame(&["certify", "ct-ex3", "--set", "m", "--f", "1,0;1", "--g", "0,1;1"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert_eq!(exact(&run.stdout["inputs"]["reference"]["alpha_hat"]), "1/2");
    assert_eq!(exact(&run.stdout["certificate"]["alpha0"]), "1/2");
}

#[test]
fn failed_shape_condition_exits_one() {
    let run = stochgame(&[
        "certify", "ct-ex2", "--set", "M", "--alpha-hat", "2/3", "--f", "1,0;1", "--g", "1,0;1",
    ]);
    assert_eq!(run.code, 1);
    let verdicts = run.stdout["certificate"]["verdicts"].as_array().unwrap();
    let m2 = verdicts.iter().find(|v| v["condition"] == "M2").unwrap();
    assert_eq!(m2["holds"], false);
}

#[test]
fn discrete_certificate_uses_default_reference() {
    let run = stochgame(&["certify", "ex-sec-set", "--set", "D", "--f", "1,0;1", "--g", "1,0;1"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert_eq!(exact(&run.stdout["inputs"]["reference"]["beta_hat"]), "3/5");
    assert_eq!(exact(&run.stdout["certificate"]["beta0"]), "3/5");
}

#[test]
fn non_additive_game_has_a_rectangle_witness() {
    let run = stochgame(&["sc-ar", "ex1-discrete.json"]);
    assert_eq!(run.code, 1);
    assert_eq!(run.stdout["sc_ar"], false);
    let w = &run.stdout["witness"];
    assert_eq!(w["kind"], "rectangle");
    assert_eq!(exact(&w["rectangle"]["diagonal_sum"]), "8");
    assert_eq!(exact(&w["rectangle"]["anti_diagonal_sum"]), "11");
}

#[test]
fn additive_game_construction_succeeds() {
    let run = stochgame(&["sc-ar", "ex-additive-check"]);
    assert_eq!(run.code, 0);
    let eq = &run.stdout["equilibrium"];
    assert_eq!(eq["controller"], "Player2");
    assert_eq!(eq["f"][0], 0);
}

#[test]
fn mixed_solution_in_continuous_time() {
    let run = stochgame(&["mixed-ne-2x2", "ct-ex1", "--alpha", "1"]);
    assert_eq!(run.code, 0);
    assert_eq!(exact(&run.stdout["p"]), "5/19");
    assert_eq!(exact(&run.stdout["q"]), "2/3");
    assert_eq!(run.stdout["g"], "2/3,1/3;1");
}

#[test]
fn best_response_to_a_fixed_player() {
    let run = stochgame(&["best-response", "ct-ex3", "--fix", "1:1,0;1", "--alpha", "1/2"]);
    assert_eq!(run.code, 0);
    assert_eq!(run.stdout["player"], 2);
    assert_eq!(run.stdout["policy"], serde_json::json!([1, 0]));
    let v: Vec<&str> = run.stdout["value"].as_array().unwrap().iter().map(exact).collect();
    assert_eq!(v, ["22/3", "8"]);
}

#[test]
fn enumeration_lists_pure_equilibria() {
    let run = stochgame(&["enumerate-pure", "ex-sec-set", "--beta", "3/5"]);
    assert_eq!(run.code, 0);
    let found = run.stdout["equilibria"].as_array().unwrap();
    assert!(found.iter().any(|e| e["f"] == serde_json::json!([0, 0]) && e["g"] == serde_json::json!([0, 0])));
    assert_eq!(run.stdout["count"], found.len());
}

#[test]
fn average_criterion_accepts_the_mixed_pair() {
    let run = stochgame(&["verify-nash", "ex1-discrete", "--average", "--f", "1/3,2/3;1", "--g", "2/3,1/3;1"]);
    assert_eq!(run.code, 0);
    let run = stochgame(&["verify-nash", "ex1-discrete", "--average", "--f", "1,0;1", "--g", "1,0;1"]);
    assert_eq!(run.code, 1);
}

#[test]
fn float_values_track_exact_ones() {
    let args = ["value", "ct-ex3", "--f", "1,0;1", "--g", "0,1;1", "--alpha", "1/2"];
    let exact_run = stochgame(&args);
    let mut float_args = args.to_vec();
    float_args.push("--float");
    let float_run = stochgame_env(&float_args, &[("BNE_TOLERANCE", "1e-12")]);
    assert_eq!(float_run.code, 0);
    for p in ["p1", "p2"] {
        let e = exact_run.stdout["values"][p].as_array().unwrap();
        let f = float_run.stdout["values"][p].as_array().unwrap();
        for (x, y) in e.iter().zip(f) {
            assert!((x["decimal"].as_f64().unwrap() - y["decimal"].as_f64().unwrap()).abs() < 1e-9);
        }
    }
}

#[test]
fn exact_report_values_round_trip() {
    let run = stochgame(&["value", "ct-ex2", "--f", "1,0;1", "--g", "1,0;1", "--alpha", "2/3"]);
    let values = run.stdout["values"]["p2"].as_array().unwrap();
    let parsed: Vec<_> = values.iter().map(|v| parse_rational(exact(v)).unwrap()).collect();
    assert_eq!(parsed, [parse_rational("33/5").unwrap(), parse_rational("6").unwrap()]);
    for (v, q) in values.iter().zip(&parsed) {
        let d = stochgame::numerics::OrderedField::to_f64(q);
        assert_eq!(v["decimal"].as_f64().unwrap(), d);
    }
}

#[test]
fn reproduce_examples_matches_every_row() {
    let run = stochgame(&["reproduce-examples"]);
    assert_eq!(run.code, 0);
    let rows = run.stdout["rows"].as_array().unwrap();
    assert!(rows.len() >= 40);
    assert!(rows.iter().all(|r| r["matches"] == true));
    assert_eq!(run.stdout["matched"], run.stdout["total"]);
}

#[test]
fn pretty_table_for_reproduction() {
    let out = Command::new(env!("CARGO_BIN_EXE_stochgame"))
        .args(["reproduce-examples", "--pretty"])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().next().unwrap().starts_with("example"));
    assert!(!text.contains("MISMATCH"));
}

#[test]
fn game_file_from_disk_round_trips() {
    let file = bundled_file("ct-ex3").unwrap();
    let path = std::env::temp_dir().join(format!("stochgame-cli-{}.json", std::process::id()));
    std::fs::write(&path, file.to_json_pretty()).unwrap();
    let reread = GameFile::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(reread, file);
    let run = stochgame(&["verify-nash", path.to_str().unwrap(), "--f", "1,0;1", "--g", "0,1;1", "--alpha", "1/2"]);
    std::fs::remove_file(&path).ok();
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert_eq!(run.stdout["game"]["kind"], "continuous");
}

#[test]
fn input_errors_exit_two_with_structured_json() {
    let cases: &[&[&str]] = &[
        &["verify-nash", "ex-sec-set", "--f", "1,x;1", "--g", "1,0;1", "--beta", "3/5"],
        &["verify-nash", "ex-sec-set", "--f", "1/2,1/3;1", "--g", "1,0;1", "--beta", "3/5"],
        &["verify-nash", "ex-sec-set", "--f", "1,0", "--g", "1,0;1", "--beta", "3/5"],
        &["value", "no-such-game", "--f", "1", "--g", "1", "--beta", "1/2"],
        &["value", "ex-sec-set", "--f", "1,0;1", "--g", "1,0;1", "--alpha", "1/2"],
        &["value", "ex-sec-set", "--f", "1,0;1", "--g", "1,0;1", "--beta", "1"],
        &["certify", "ct-ex2", "--set", "C", "--f", "1,0;1", "--g", "1,0;1"],
        &["certify", "ex-sec-set", "--set", "D", "--f", "1/2,1/2;1", "--g", "1,0;1"],
        &["best-response", "ex-sec-set", "--fix", "3:1", "--beta", "1/2"],
    ];
    for args in cases {
        let run = stochgame(args);
        assert_eq!(run.code, 2, "{args:?}");
        assert_eq!(error_kind(&run), "input", "{args:?}");
        assert_eq!(run.stdout, Value::Null);
    }
    let run = stochgame(&["certify", "ex-sec-set", "--set", "Q"]);
    assert_eq!(run.code, 2);
    assert_eq!(error_kind(&run), "usage");
}

#[test]
fn malformed_tolerance_is_an_input_error() {
    let run = stochgame_env(
        &["value", "ct-ex3", "--f", "1,0;1", "--g", "0,1;1", "--alpha", "1/2", "--float"],
        &[("BNE_TOLERANCE", "abc")],
    );
    assert_eq!(run.code, 2);
    assert_eq!(error_kind(&run), "input");
}

#[test]
fn malformed_game_file_is_an_input_error() {
    let path = std::env::temp_dir().join(format!("stochgame-bad-{}.json", std::process::id()));
    let mut doc: Value = serde_json::from_str(&bundled_file("ex-sec-set").unwrap().to_json_pretty()).unwrap();
    doc["transitions"][0][0][0] = serde_json::json!(["1/2", "1/4"]);
    std::fs::write(&path, doc.to_string()).unwrap();
    let run = stochgame(&["enumerate-pure", path.to_str().unwrap(), "--beta", "1/2"]);
    std::fs::remove_file(&path).ok();
    assert_eq!(run.code, 2);
    assert_eq!(error_kind(&run), "input");
}
