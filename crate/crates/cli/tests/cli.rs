use std::path::PathBuf;
use std::process::{Command, Output};

use kdv5::expr::{expr_from_json, expr_to_json, parse, SymbolTable};
use kdv5::JetSpace;

fn dir(sub: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join(sub)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kdv5")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn config(name: &str) -> String {
    dir("configs").join(name).display().to_string()
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(dir("golden").join(name)).unwrap()
}

#[test]
fn adjoint_golden() {
    let o = run(&["adjoint"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("adjoint.txt"));
    let o = run(&["adjoint", "--output", "latex"]);
    assert_eq!(stdout(&o), golden("adjoint.tex"));
}

#[test]
fn adjoint_text_parses_back_to_display() {
    let o = run(&["adjoint"]);
    let line = stdout(&o).lines().find(|l| l.starts_with("F*: ")).unwrap().to_string();
    let js = JetSpace::default();
    let got = parse(&line[4..], &mut SymbolTable::new(), &js).unwrap();
    let want = parse(
        "v*Q(t) + (u_x*v_xx + u_xx*v_x)*F(t) - u*v_x*E(t) - v_xxx*B(t) - v_xxxxx - u*v_xxx - 3*u_x*v_xx - 3*u_xx*v_x - v_t",
        &mut SymbolTable::new(),
        &js,
    )
    .unwrap();
    assert_eq!(got, want);
}

#[test]
fn verify_divergence_f2() {
    let o = run(&["verify-divergence", "--case", "f2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("verify_divergence_f2.txt"));
    assert!(stdout(&o).contains("residual: 0"));
}

#[test]
fn output_is_deterministic() {
    for args in [&["conslaw", "--case", "f3"][..], &["determining"], &["reduce", "--output", "json"]] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn json_expressions_round_trip() {
    let o = run(&["reduce", "--output", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let mut seen = 0;
    for section in doc["sections"].as_array().unwrap() {
        for entry in section["entries"].as_array().unwrap() {
            let v = &entry["value"];
            if v.get("terms").is_some() {
                let e = expr_from_json(v).unwrap();
                assert_eq!(&expr_to_json(&e), v);
                seen += 1;
            }
        }
    }
    assert!(seen >= 12);
    assert_eq!(doc["status"], "ok");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["self-adjoint", "--config", &config("f2.toml")]).status.code(), Some(0));
    assert_eq!(run(&["self-adjoint", "--config", &config("unknown_key.toml")]).status.code(), Some(2));
    assert_eq!(run(&["self-adjoint", "--config", &config("bad_expr.toml")]).status.code(), Some(2));
    assert_eq!(run(&["verify-symmetries", "--config", &config("scaling.toml")]).status.code(), Some(1));
    assert_eq!(run(&["verify-symmetries", "--config", &config("translation.toml")]).status.code(), Some(0));
    assert_eq!(run(&["adjoint", "--config", &config("translation.toml")]).status.code(), Some(2));
    assert_eq!(run(&["conslaw", "--case", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["adjoint", "--max-jet-order", "3"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn nonzero_residuals_are_printed() {
    let o = run(&["verify-symmetries", "--config", &config("scaling.toml")]);
    let out = stdout(&o);
    assert!(out.contains("residual: E(t)*u*u_x + F(t)*u_x*u_xx + u*u_xxx"), "{out}");
    assert!(out.contains("status: nonzero residual"));
}

#[test]
fn parse_errors_carry_positions() {
    let o = run(&["self-adjoint", "--config", &config("bad_expr.toml")]);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("offset 7"), "{err}");
}

#[test]
fn symmetry_cases() {
    let o = run(&["verify-symmetries"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for case in ["general", "f0", "fconst", "degenerate"] {
        assert!(out.contains(&format!("== case {case}")));
    }
    assert_eq!(out.matches("residual: 0").count(), 4);
}

#[test]
fn self_adjoint_cases() {
    let o = run(&["self-adjoint", "--case", "f3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("residual: 0"));
    let o = run(&["self-adjoint", "--case", "f2", "--output", "json"]);
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["status"], "ok");
}

#[test]
fn check_paper_reports_every_display() {
    let o = run(&["check-paper"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.matches("computed residual: 0").count(), 4);
    assert!(out.contains("reading: corrupted: mismatch"));
    assert!(out.contains("corrupted density residual: 2/5*c2*k2*exp(intt(Q(t)))"));
    let o = run(&["check-paper", "--fixtures", &dir("configs").display().to_string()]);
    assert_eq!(o.status.code(), Some(2));
}
