use super::*;
use crate::encode::{goal, parse_problem, Claim, ProblemFile};
use crate::fpc::{common_table, parse_cert, CertMode};
use crate::terms::parse_formula;

const SMALL: &str = include_str!("../../data/small.graph");
const BRANCHING: &str = include_str!("../../data/branching.lts");
const CYCLES: &str = include_str!("../../data/cycles.lts");

const INV_BD: &str =
    "(inv (lam (x y) (imp (or (and+ (= x b) (= y d)) (and+ (= x c) (= y d))) false-)) (bipole 1))";
const COINV_21_23: &str =
    "(coinv (lam (x y) (or (and+ (= x 21) (= y 23)) (and+ (= x 22) (= y 24)))) (bipole 1))";

fn run(problem: &str, claim: &str, cert: &str) -> Result<Verdict, CheckError> {
    let ProblemFile { problem, .. } = parse_problem(problem).unwrap();
    let claim = Claim::parse(claim).unwrap();
    let cert = parse_cert(cert, claim.kind.cert_mode()).unwrap();
    let g = goal(&claim, &problem).unwrap();
    check(claim.kind.table().as_ref(), &cert, &g, &CheckConfig::default())
}

fn accepted(problem: &str, claim: &str, cert: &str) -> bool {
    match run(problem, claim, cert) {
        Ok(v) => v.is_accepted(),
        Err(e) => panic!("{claim} with {cert}: {e}"),
    }
}

#[test]
fn reachability() {
    assert!(accepted(SMALL, "reach a c", "(path (b))"));
    assert!(accepted(SMALL, "reach a c", "(path (b c b))"));
    assert!(!accepted(SMALL, "reach a c", "(path (c))"));
    assert!(accepted(SMALL, "unreach d a", "(async stop)"));
    assert!(accepted(SMALL, "unreach b d", INV_BD));
    assert!(!accepted(SMALL, "unreach a d", INV_BD));
}

#[test]
fn simulation() {
    assert!(accepted(BRANCHING, "sim 1 6", "decproc"));
    assert!(accepted(CYCLES, "sim 21 23", COINV_21_23));
    assert!(!accepted(CYCLES, "sim 23 21", COINV_21_23));
}

#[test]
fn non_simulation() {
    assert!(accepted(BRANCHING, "unsim 6 1", "(hml (dia a (and (dia b tt) (dia c tt))))"));
    assert!(!accepted(BRANCHING, "unsim 6 1", "(hml (dia a tt))"));
    assert!(accepted(BRANCHING, "unbisim 6 10", "(hml (dia a (not (dia b tt))))"));
    assert!(!accepted(BRANCHING, "unbisim 6 6", "(hml (dia a (not (dia b tt))))"));
    assert!(!accepted(BRANCHING, "unbisim 6 6", "(hml (dia a tt))"));
}

fn subset(extra: &str, sub: &str) -> Result<Verdict, CheckError> {
    let g = parse_formula(&format!(
        "(forall (x) (imp (or {sub}) (or (= x 1) (= x 2) {extra})))"
    ))
    .unwrap();
    check(&common_table(), &Cert::Decproc, &g, &CheckConfig::default())
}

#[test]
fn finite_subset() {
    let v = subset("(= x 3)", "(= x 1) (= x 3)").unwrap();
    let proof = v.proof().expect("subset accepted");
    assert_eq!(proof.derivation.count_rule(Rule::OrL), 1);
    assert_eq!(proof.derivation.count_rule(Rule::EqR), 2);
    assert!(!subset("(= x 3)", "(= x 1) (= x 4)").unwrap().is_accepted());
    assert!(!subset("(= x 4)", "(= x 1) (= x 3)").unwrap().is_accepted());
}

#[test]
fn unsim_rejects_negated_diamonds() {
    assert!(parse_cert("(hml (dia a (not (dia b tt))))", CertMode::Unsim).is_err());
}

fn permissive(problem: &str, claim: &str) -> Result<Verdict, CheckError> {
    let ProblemFile { problem, .. } = parse_problem(problem).unwrap();
    let g = goal(&Claim::parse(claim).unwrap(), &problem).unwrap();
    let config = CheckConfig {
        depth_bound: 200,
        enforce_restriction: false,
        ..CheckConfig::default()
    };
    check(&crate::fpc::Permissive, &crate::fpc::Cert::Stop, &g, &config)
}

#[test]
fn permissive_table_is_sound_but_not_useless() {
    for claim in ["reach d a", "reach b a", "unreach a c"] {
        match permissive(SMALL, claim) {
            Ok(Verdict::Accepted(_)) => panic!("{claim} accepted"),
            Ok(Verdict::Rejected) | Err(CheckError::ResourceExhausted { .. }) => {}
            Err(e) => panic!("{claim}: {e}"),
        }
    }
    let v = permissive(SMALL, "reach a b").unwrap();
    let proof = v.proof().expect("one edge is found by blind search");
    validate(&proof.derivation).unwrap();
}
