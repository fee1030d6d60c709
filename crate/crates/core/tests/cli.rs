use std::path::PathBuf;
use std::process::{Command, Output};

use fpc_checker::cli::{cmd_selftest, EXIT_ACCEPTED, EXIT_ERROR, EXIT_REJECTED};
use fpc_checker::fpc;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn fpc_check(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fpc-check")).args(args).output().unwrap()
}

fn check(file: &str, claim: &str, cert: &str) -> i32 {
    let problem = data(file);
    let out = fpc_check(&["check", "--problem", problem.to_str().unwrap(), "--goal", claim, "--cert", cert]);
    out.status.code().unwrap()
}

fn witness(file: &str, claim: &str) -> (i32, String) {
    let problem = data(file);
    let out = fpc_check(&["witness", "--problem", problem.to_str().unwrap(), "--goal", claim]);
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn exit_codes() {
    assert_eq!(check("small.graph", "reach a c", "(path (b))"), EXIT_ACCEPTED);
    assert_eq!(check("small.graph", "reach a c", "(path (c))"), EXIT_REJECTED);
    assert_eq!(check("branching.lts", "unsim 6 1", "(hml (dia a (and (dia b tt) (dia c tt))))"), EXIT_ACCEPTED);
    assert_eq!(check("branching.lts", "unsim 6 10", "(hml (dia a (not (dia b tt))))"), EXIT_ERROR);
    assert_eq!(check("branching.lts", "reach 1 2", "(path ())"), EXIT_ERROR);
    assert_eq!(check("small.graph", "reach a zz", "(path ())"), EXIT_ERROR);
    assert_eq!(check("missing.graph", "reach a c", "(path (b))"), EXIT_ERROR);
}

#[test]
fn trace_output_ends_with_verdict() {
    let problem = data("small.graph");
    let out = fpc_check(&[
        "check", "--problem", problem.to_str().unwrap(), "--goal", "reach a c", "--cert", "(path (b))",
        "--trace", "rules",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines.len() > 1);
    assert_eq!(lines.last(), Some(&"accepted"));
}

#[test]
fn witnesses_round_trip_through_check() {
    let claims = [
        ("small.graph", "reach a c"),
        ("small.graph", "unreach d a"),
        ("small.graph", "unreach b d"),
        ("branching.lts", "sim 1 6"),
        ("branching.lts", "unsim 6 1"),
        ("branching.lts", "unbisim 6 10"),
        ("cycles.lts", "sim 21 23"),
    ];
    for (file, claim) in claims {
        let (code, cert) = witness(file, claim);
        assert_eq!(code, EXIT_ACCEPTED, "{claim}");
        assert_eq!(check(file, claim, cert.trim()), EXIT_ACCEPTED, "{claim} with {cert}");
    }
    assert_eq!(witness("small.graph", "reach d a").0, EXIT_REJECTED);
    assert_eq!(witness("branching.lts", "bisim 6 10").0, EXIT_REJECTED);
}

#[test]
fn selftest_passes_and_detects_a_wrong_table() {
    let out = fpc_check(&["selftest"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let mut sink = Vec::new();
    assert!(!cmd_selftest(&|_| Box::new(fpc::common_table()), &mut sink));
    assert!(String::from_utf8(sink).unwrap().contains("FAIL"));
}
