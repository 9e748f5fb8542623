use std::process::Command;

use planefol_cli::run;
use serde_json::Value;

fn call(args: &[&str]) -> (i32, Value) {
    let mut argv = vec!["planefol"];
    argv.extend_from_slice(args);
    let (code, text) = run(argv);
    (code, serde_json::from_str(&text).unwrap_or(Value::String(text)))
}

#[test]
fn classify_example_2_3() {
    let (code, v) = call(&["classify", "--form", "(x*y+y^2) dx - x^2 dy", "--separatrix", "x*y"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["second_type"], false);
    assert_eq!(v["generalized_curve"], false);
    assert_eq!(v["newton_equal"], false);
    assert_eq!(v["blowups"], 1);
}

#[test]
fn classify_with_declared_root() {
    let (code, v) = call(&[
        "classify",
        "--alg",
        "b: b^2 - 2 ~ 1.414",
        "--form",
        "((b-1)*x*y - y^3) dx + (x*y - b*x^2 + x*y^2) dy",
        "--separatrix",
        "x*y*(x-y)",
    ]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["second_type"], true);
    assert_eq!(v["generalized_curve"], false);
    assert_eq!(v["newton_equal"], true);
}

#[test]
fn cuspidal_example() {
    let (code, v) = call(&["cuspidal", "--p", "6", "--q", "3", "--delta", "x*y"]);
    assert_eq!(code, 0);
    assert_eq!(v["ph"], 10);
    assert_eq!(v["intersection"], 9);
    assert_eq!(v["second_type"], true);
    assert_eq!(v["same_reduction"], true);
    assert_eq!(v["generalized_curve"], Value::Null);

    let (code, v) = call(&["cuspidal", "--p", "6", "--q", "3", "--delta", "x*y", "--oracle"]);
    assert_eq!(code, 0);
    assert_eq!(v["method"], "reduction-oracle");
    assert!(v["generalized_curve"].is_boolean());

    let (_, v) = call(&["cuspidal", "--p", "2", "--q", "3", "--delta", "0"]);
    assert_eq!(v["intersection"], "inf");
    assert_eq!(v["generalized_curve"], true);
}

#[test]
fn dicritical_and_depth() {
    let (code, v) = call(&["reduce", "--form", "x dy - y dx"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"], "dicritical");
    let (code, v) = call(&["reduce", "--form", "-5*x^4 dx + 2*y dy", "--max-depth", "1"]);
    assert_eq!(code, 3, "{v}");
    assert_eq!(v["error"], "depth-exceeded");
}

#[test]
fn parse_errors() {
    let (code, v) = call(&["polygon", "--form", "x dz"]);
    assert_eq!(code, 4);
    assert_eq!(v["error"], "parse");
    assert!(v["position"].is_number());
    let (code, v) = call(&["classify"]);
    assert_eq!(code, 4);
    assert_eq!(v["error"], "usage");
}

#[test]
fn gsv_and_pullback() {
    let (code, v) = call(&["gsv", "--p", "2", "--q", "3", "--delta", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["total"], -1);
    let (_, v) = call(&["gsv", "--p", "6", "--q", "3", "--delta", "x^2*y"]);
    assert_eq!(v["per_branch"], serde_json::json!([4, 4, 4]));
    assert_eq!(v["total"], 0);
    let (code, v) = call(&["pullback", "--form", "x dy - y^2 dx", "--gamma", "t^2, t^3"]);
    assert_eq!(code, 0);
    assert_eq!(v["order"], 4);
}

#[test]
fn renderings() {
    let (code, v) = call(&["polygon", "--form", "(x*y+y^2) dx - x^2 dy"]);
    assert_eq!(code, 0);
    assert_eq!(v["vertices"], serde_json::json!([[1, 2], [2, 1]]));
    let (_, svg) = run(["planefol", "polygon", "--form", "x dy - y^2 dx", "--format", "svg"]);
    assert!(svg.starts_with("<svg") && svg.contains("<circle"));
    let (code, dot) = run(["planefol", "reduce", "--form", "(y^2 - x^3) dx + x*y dy", "--format", "dot"]);
    assert_eq!(code, 0, "{dot}");
    assert!(dot.starts_with("digraph"));
}

#[test]
fn byte_identical_reruns() {
    let cases: &[&[&str]] = &[
        &["reduce", "--form", "(3*x^2*y - y^3) dx + (x^3 - 3*x*y^2) dy"],
        &["cuspidal", "--p", "6", "--q", "4", "--delta", "x*y^2 + x^3", "--oracle"],
        &["reduce", "--form", "(x^3 + x*y^2) dy - (y^3) dx"],
    ];
    for args in cases {
        let mut argv = vec!["planefol"];
        argv.extend_from_slice(args);
        let first = run(argv.clone());
        assert_eq!(first.0, 0, "{}", first.1);
        for _ in 0..3 {
            assert_eq!(run(argv.clone()), first);
        }
    }
}

#[test]
fn binary_streams() {
    let bin = env!("CARGO_BIN_EXE_planefol");
    let out = Command::new(bin)
        .args(["reduce", "--form", "x dy - y dx"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "dicritical");
    let out = Command::new(bin)
        .args(["cuspidal", "--p", "6", "--q", "3", "--delta", "x*y"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], 1);
}
