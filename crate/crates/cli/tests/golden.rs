use std::process::Command;

use ncham_cli::expr::{eval, parse, Vocabulary};
use ncham_core::models::cuntz;

fn ncham(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_ncham"))
        .args(args)
        .output()
        .expect("run ncham");
    (
        String::from_utf8(out.stdout).unwrap().trim_end().to_string(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap(),
    )
}

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn torus_bracket() {
    let (out, _, code) = ncham(&["--model", "torus:p=2", "bracket", "u^2 v^2", "u^2 v^4"]);
    assert_eq!((out.as_str(), code), ("-4 u^4 v^6", 0));
}

#[test]
fn cuntz_bracket_equals_unit_difference() {
    let (out, _, code) = ncham(&["--model", "cuntz:n=2", "bracket", "s1 s2*", "s2 s1*"]);
    assert_eq!(code, 0);
    // the printed normal form uses s2 s2* = 1 - s1 s1*
    assert_eq!(out, "-1 + 2 s1 s1*");
    let c = cuntz::calculus(2).unwrap();
    let v = Vocabulary::of(&c);
    let got = eval(&c, &parse(&out, &v).unwrap()).unwrap();
    let want = eval(&c, &parse("s1 s1* - s2 s2*", &v).unwrap()).unwrap();
    assert_eq!(got, want);
}

#[test]
fn u_is_not_hamiltonian() {
    let (out, _, code) = ncham(&["--model", "torus:p=2", "is-hamiltonian", "u"]);
    assert_eq!((out.as_str(), code), ("NOT_HAMILTONIAN (relative to ansatz B=3)", 1));
    let (out, _, code) = ncham(&["--model", "torus:p=2", "is-hamiltonian", "u^2 v^-2"]);
    assert_eq!((out.as_str(), code), ("HAMILTONIAN (relative to ansatz B=3)", 0));
}

#[test]
fn matrix_check_is_green() {
    let (out, _, code) = ncham(&["--model", "matrix:n=2", "check", "--cases", "20"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.lines().skip(1).take_while(|l| l.starts_with('[')).all(|l| l.starts_with("[ok  ]")));
    assert!(out.ends_with("checks passed (242 cases)"), "{out}");
}

#[test]
fn check_is_reproducible_and_seeded() {
    let a = ncham(&["--model", "cuntz:n=2", "check", "--cases", "5", "--seed", "7"]);
    let b = ncham(&["--model", "cuntz:n=2", "check", "--cases", "5", "--seed", "7"]);
    assert_eq!(a, b);
    assert!(a.0.starts_with("model cuntz:n=2  seed 7"));
}

#[test]
fn vector_fields_and_flows() {
    let (out, _, _) = ncham(&["hamvec", "u^2 v^2"]);
    assert_eq!(out, "u -> 2 u^3 v^2, v -> -2 u^2 v^3");
    let (out, _, _) = ncham(&["flow", "u^2 v^2", "u^2", "--order", "2"]);
    assert_eq!(out, "u^2 + t (4 u^4 v^2) + t^2 (8 u^6 v^4)");
    let (out, _, _) = ncham(&["--model", "cuntz:n=2", "hamvec", "s1 s2*"]);
    assert_eq!(out, "s1 -> 0, s2 -> s1, s1* -> -s2*, s2* -> 0");
    let (out, _, code) = ncham(&["flow", "u", "v"]);
    assert_eq!((out.as_str(), code), ("NOT_HAMILTONIAN (relative to ansatz B=3)", 1));
}

#[test]
fn calculus_commands() {
    let (out, _, _) = ncham(&["d", "u v"]);
    // q = -1 at p = 2, and dv precedes du
    assert_eq!(out, "-dv u + du v");
    let (out, _, _) = ncham(&["iprod", "u -> u", "du dv"]);
    assert_eq!(out, "-dv u");
    let (out, _, _) = ncham(&["lie", "X[u^2 v^2]", "u^-1 du dv v^-1"]);
    assert_eq!(out, "0");
    let (out, _, _) = ncham(&["--model", "matrix:n=2", "iprod", "ad[E12 - E21]", "E11 dE12"]);
    // E11 θ(E12) with θ(E12) = E11 - E22
    assert_eq!(out, "E11");
    let (out, _, _) = ncham(&["--model", "cuntz:n=2", "d", "s1 s1"]);
    assert_eq!(out, "d(s1^2)");
}

#[test]
fn usage_errors_exit_2() {
    let (_, err, code) = ncham(&["normalize", "du^-1"]);
    assert_eq!(code, 2);
    assert!(err.contains("differentials are not invertible at position 3"), "{err}");
    assert_eq!(ncham(&["--model", "sphere", "check"]).2, 2);
    assert_eq!(ncham(&["iprod", "u -> u", "u"]).2, 2);
    assert_eq!(ncham(&["frobnicate"]).2, 2);
    assert_eq!(ncham(&["--model", "matrix", "normalize", "E11⊗E12"]).2, 2);
}

#[test]
fn json_reports() {
    let (out, _, code) = ncham(&["--format", "json", "is-hamiltonian", "u"]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["hamiltonian"], false);
    assert_eq!(v["ansatz"], "B=3");
    let (out, _, _) = ncham(&["--format", "json", "bracket", "u^2 v^2", "u^2 v^4"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["result"], "-4 u^4 v^6");
    assert_eq!(v["degree"], 0);
}

#[test]
fn presentation_file_model() {
    let f = data("torus2.pres");
    let (out, _, code) = ncham(&["--presentation", &f, "bracket", "u^2 v^2", "u^2 v^4"]);
    assert_eq!((out.as_str(), code), ("-4 u^4 v^6", 0));
    let (out, _, code) = ncham(&["--presentation", &f, "confluence"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("locally confluent"));
    let (out, _, code) = ncham(&["--presentation", &f, "check", "--cases", "5"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(ncham(&["--presentation", &f, "--ansatz", "B=2", "check"]).2, 2);
    assert_eq!(ncham(&["--presentation", "/nonexistent.pres", "check"]).2, 2);
}

#[test]
fn cuntz_form_rules_are_reported_but_not_binding() {
    let (out, _, code) = ncham(&["--model", "cuntz:n=2", "confluence"]);
    assert_eq!(code, 0);
    assert!(out.contains("algebra: 4 critical pairs, 4 joinable"));
    assert!(out.contains("calculus (not used for rewriting)"));
}
