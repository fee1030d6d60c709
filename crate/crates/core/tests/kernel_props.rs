mod common;

use common::systems::{random_graph, random_lts};
use fpc_checker::encode::{goal, Claim, ClaimKind, Problem};
use fpc_checker::fpc::{Cert, FpcTable, Permissive};
use fpc_checker::kernel::{check, erase, validate, CheckConfig, CheckError, Sequent, Verdict};
use fpc_checker::witness::certificate;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn instance(seed: u64, kind: ClaimKind) -> (Claim, Problem) {
    let mut rng = StdRng::seed_from_u64(seed);
    let (names, problem) = if kind.on_graph() {
        let g = random_graph(&mut rng);
        (g.nodes.clone(), Problem::Graph(g))
    } else {
        let l = random_lts(&mut rng);
        (l.states.clone(), Problem::Lts(l))
    };
    let x = &names[rng.gen_range(0..names.len())];
    let y = &names[rng.gen_range(0..names.len())];
    (Claim::new(kind, x, y), problem)
}

/// Certificates to try: the generated one if the claim holds, plus generic ones.
fn certs(claim: &Claim, problem: &Problem) -> Vec<Cert> {
    let mut out = vec![Cert::bipole(1), Cert::async_(Cert::Stop), Cert::Decproc];
    out.extend(certificate(claim, problem));
    out
}

fn store_typed(s: &Sequent) -> bool {
    match s {
        Sequent::Async { n, p, .. } => {
            n.iter().all(|f| f.is_negative()) && p.iter().all(|f| !f.is_negative())
        }
        _ => true,
    }
}

fn kind() -> impl Strategy<Value = ClaimKind> {
    prop::sample::select(ClaimKind::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn accepted_proofs_are_sound_typed_and_repeatable(seed in any::<u64>(), kind in kind()) {
        let (claim, problem) = instance(seed, kind);
        let g = goal(&claim, &problem).unwrap();
        let table = kind.table();
        let config = CheckConfig { step_budget: 100_000, ..CheckConfig::default() };
        for cert in certs(&claim, &problem) {
            let first = check(table.as_ref(), &cert, &g, &config);
            let second = check(table.as_ref(), &cert, &g, &config);
            match (&first, &second) {
                (Ok(Verdict::Accepted(a)), Ok(Verdict::Accepted(b))) => {
                    prop_assert_eq!(a.trace.lines(), b.trace.lines());
                    prop_assert_eq!(erase(&a.trace).unwrap(), a.derivation.clone());
                    prop_assert!(validate(&a.derivation).is_ok());
                    prop_assert_eq!(a.derivation.phase_switch_violations(), 0);
                    prop_assert!(a.derivation.nodes().iter().all(|d| store_typed(&d.conclusion)));
                }
                (Ok(Verdict::Rejected), Ok(Verdict::Rejected)) => {}
                (Err(CheckError::ResourceExhausted { .. }), Err(CheckError::ResourceExhausted { .. })) => {}
                _ => prop_assert!(false, "{} with {}: {:?} then {:?}", claim, cert, first, second),
            }
        }
    }

    #[test]
    fn permissive_table_never_proves_a_false_reachability(seed in any::<u64>()) {
        let (claim, problem) = instance(seed, ClaimKind::Reach);
        let Problem::Graph(g) = &problem else { unreachable!() };
        prop_assume!(!common::systems::reaches(g, &claim.left, &claim.right));
        let config = CheckConfig {
            depth_bound: 100,
            step_budget: 50_000,
            enforce_restriction: false,
        };
        let table: &dyn FpcTable = &Permissive;
        let v = check(table, &Cert::Stop, &goal(&claim, &problem).unwrap(), &config);
        prop_assert!(!matches!(v, Ok(Verdict::Accepted(_))), "{} on {:?}", claim, g);
    }
}
