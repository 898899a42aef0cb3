//! End-to-end tests of the `stepval` binary: JSON outputs, exit codes, and
//! the round-trip guarantee of the textual form.

use std::process::{Command, Output};

use serde_json::Value;

fn stepval(args: &[&str]) -> (Value, Output) {
    let out = Command::new(env!("CARGO_BIN_EXE_stepval"))
        .args(args)
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8(out.stdout.clone()).expect("utf8 stdout");
    let json: Value = serde_json::from_str(stdout.trim()).unwrap_or_else(|e| {
        panic!("output is not one JSON object: {e}\n{stdout}");
    });
    (json, out)
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn blim_of_the_square_wave() {
    let (json, out) = stepval(&["blim", "periodic(2; [0,1)=1, [1,2)=0)"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(json["value"], "1/2");
    assert_eq!(json["exact"], true);
    assert_eq!(json["command"], "blim");
}

#[test]
fn eval_and_boundary_convention() {
    let (json, out) = stepval(&["eval", "indicator([0,1))", "--at", "0"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(json["value"], "1");
    let (json, _) = stepval(&["eval", "indicator([0,1))", "--at", "1"]);
    assert_eq!(json["value"], "0");
    let (json, _) = stepval(&["eval", "const(-3/2)", "--at", "7/3"]);
    assert_eq!(json["value"], "-3/2");
}

#[test]
fn eval_dump_samples() {
    let (json, out) = stepval(&[
        "eval",
        "periodic(2; [0,1)=1, [1,2)=0)",
        "--dump-samples",
        "0,2,1/2",
    ]);
    assert_eq!(exit_code(&out), 0);
    let samples = json["samples"].as_array().expect("samples array");
    assert_eq!(samples.len(), 5);
    assert_eq!(samples[0][0], "0");
    assert_eq!(samples[0][1], "1");
    assert_eq!(samples[2][1], "0"); // at x = 1
}

#[test]
fn cesaro_point_and_limit() {
    let (json, _) = stepval(&["cesaro", "periodic(2; [0,1)=1, [1,2)=0)", "--at", "3"]);
    assert_eq!(json["value"], "2/3");
    let (json, _) = stepval(&["cesaro", "periodic(2; [0,1)=1, [1,2)=0)", "--limit"]);
    assert_eq!(json["value"], "1/2");
    assert!(json["error_bound"]["certificate_numerator"].is_string());
}

#[test]
fn ultralimit_reports_candidates() {
    let (json, out) = stepval(&["ultralimit", "periodic(2; [0,1)=1, [1,2)=0)"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(json["determined"], false);
    assert_eq!(json["candidates"], serde_json::json!(["0", "1"]));
    let (json, _) = stepval(&["ultralimit", "const(3)"]);
    assert_eq!(json["determined"], true);
    assert_eq!(json["value"], "3");
}

#[test]
fn valuate_series_emits_certified_interval() {
    let (json, out) = stepval(&[
        "valuate",
        "periodic(2; [0,1)=1, [1,2)=0)",
        "--spec",
        "series(poly(1/2):1/2, poly(1/4):1/4; tail=1/4)",
    ]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(json["value"], "3/8");
    assert_eq!(json["exact"], false);
    assert_eq!(json["error_bound"], "1/4");
    let (json, _) = stepval(&["valuate", "const(5)", "--spec", "blim(id)"]);
    assert_eq!(json["value"], "5");
    assert_eq!(json["exact"], true);
}

#[test]
fn check_passes_and_exit_zero() {
    let (json, out) = stepval(&[
        "check",
        "--suite",
        "vanish_compact_support",
        "--samples",
        "100",
        "--seed",
        "7",
    ]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(json["passed"], true);
    assert_eq!(json["seed"], 7);
    let reports = json["reports"].as_array().unwrap();
    assert_eq!(reports[0]["property_id"], "vanish_compact_support");
    assert_eq!(reports[0]["samples_run"], 100);
}

#[test]
fn failing_check_exits_one_with_counterexample() {
    let (json, out) = stepval(&[
        "check",
        "--suite",
        "monotonicity",
        "--samples",
        "300",
        "--seed",
        "3",
        "--spec",
        "blim(abs0)",
    ]);
    assert_eq!(exit_code(&out), 1);
    assert_eq!(json["passed"], false);
    assert!(json["counterexample"]["inputs"].is_object());
    assert!(json["counterexample"]["observed"].is_string());
}

#[test]
fn parse_errors_exit_two_with_position() {
    let (json, out) = stepval(&["eval", "const(1", "--at", "0"]);
    assert_eq!(exit_code(&out), 2);
    assert_eq!(json["error"]["kind"], "parse");
    assert_eq!(json["error"]["line"], 1);
    assert_eq!(json["error"]["col"], 8);

    let (json, out) = stepval(&["check", "--suite", "banana", "--samples", "5"]);
    assert_eq!(exit_code(&out), 2);
    assert_eq!(json["error"]["kind"], "evaluation");
    assert!(json["error"]["message"]
        .as_str()
        .unwrap()
        .contains("unknown suite"));

    let (_, out) = stepval(&["eval", "const(1)"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn usage_errors_exit_two_as_json() {
    let (json, out) = stepval(&["frobnicate"]);
    assert_eq!(exit_code(&out), 2);
    assert_eq!(json["error"]["kind"], "usage");
}

#[test]
fn ndim_ratio_methods() {
    let (json, _) = stepval(&["ndim-ratio", "--dim", "1", "--x", "10", "--t", "1"]);
    let ratio = json["ratio"].as_f64().unwrap();
    assert!((ratio - 0.95).abs() < 1e-12);

    let (json, _) = stepval(&[
        "ndim-ratio", "--dim", "2", "--x", "1", "--t", "1,0", "--method", "layers",
    ]);
    let layers = json["ratio"].as_f64().unwrap();
    let expect = (2.0 * std::f64::consts::PI / 3.0 - 3.0f64.sqrt() / 2.0) / std::f64::consts::PI;
    assert!((layers - expect).abs() < 1e-6);

    let (json, _) = stepval(&[
        "ndim-ratio", "--dim", "2", "--x", "1", "--t", "0,1", "--method", "mc", "--points",
        "200000", "--seed", "5",
    ]);
    let mc = json["ratio"].as_f64().unwrap();
    let err = json["error_bound"].as_f64().unwrap();
    assert!((mc - expect).abs() < 5.0 * err);

    let (json, out) = stepval(&["ndim-ratio", "--dim", "2", "--x", "1", "--t", "1,2,3"]);
    assert_eq!(exit_code(&out), 2);
    assert!(json["error"]["message"].as_str().unwrap().contains("components"));
}

#[test]
fn printed_canonical_forms_round_trip_through_the_cli() {
    for src in [
        "step{const(0), [[-1,0)=5, [0,2)=-1/3], periodic(3; [0,1)=2, [1,3)=0)}",
        "translate(periodic(2; [0,1)=1, [1,2)=0), 7/2)",
        "add(indicator([0,1) u [2,3)), scale(-2, const(1/3)))",
    ] {
        let (json, _) = stepval(&["eval", src, "--at", "1/2"]);
        let canon = json["inputs"]["fn"].as_str().unwrap().to_string();
        let (json2, _) = stepval(&["eval", &canon, "--at", "1/2"]);
        assert_eq!(json2["inputs"]["fn"].as_str().unwrap(), canon);
        assert_eq!(json["value"], json2["value"]);
    }
}

#[test]
fn check_is_deterministic_modulo_elapsed() {
    let strip = |mut v: Value| {
        let reports = v["reports"].as_array_mut().unwrap();
        for r in reports {
            r["elapsed_ms"] = Value::from(0);
        }
        v["elapsed_ms"] = Value::from(0);
        v
    };
    let (a, _) = stepval(&["check", "--suite", "valuation_identity", "--samples", "120", "--seed", "9"]);
    let (b, _) = stepval(&["check", "--suite", "valuation_identity", "--samples", "120", "--seed", "9"]);
    assert_eq!(
        serde_json::to_string(&strip(a)).unwrap(),
        serde_json::to_string(&strip(b)).unwrap()
    );
}
