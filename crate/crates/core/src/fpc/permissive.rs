use std::sync::Arc;

use crate::terms::{FixBody, Formula, PredExpr, Side};

use super::{
    Cert, CertAbs, Clerk, ClerkAbs, ClerkSplit, Expert, ExpertChoice, ExpertSplit, ExpertWitness,
    FpcTable, Induction, Witness,
};

/// Says yes to everything: every clerk and expert succeeds with `stop` as
/// continuation, both branches are offered, witnesses are unconstrained, and
/// the trivial invariants are proposed. Used to exercise kernel soundness.
#[derive(Clone, Copy, Debug, Default)]
pub struct Permissive;

fn arity_of(f: &Formula) -> u32 {
    match f {
        Formula::Mu(fb, _) | Formula::Nu(fb, _) => FixBody::arity(fb),
        _ => 0,
    }
}

fn constant_preds(arity: u32, bodies: [Formula; 2]) -> Vec<Arc<PredExpr>> {
    bodies
        .into_iter()
        .map(|b| Arc::new(PredExpr::new(arity, b).expect("closed")))
        .collect()
}

impl FpcTable for Permissive {
    fn name(&self) -> &str {
        "permissive"
    }

    fn clerk(&self, _kind: Clerk, _cert: &Cert) -> Vec<Cert> {
        vec![Cert::Stop]
    }

    fn clerk_split(&self, _kind: ClerkSplit, _cert: &Cert) -> Vec<(Cert, Cert)> {
        vec![(Cert::Stop, Cert::Stop)]
    }

    fn clerk_abs(&self, _kind: ClerkAbs, _cert: &Cert) -> Vec<CertAbs> {
        vec![CertAbs::constant(Cert::Stop)]
    }

    fn ind(&self, _cert: &Cert, fixed_point: &Formula) -> Vec<Induction> {
        constant_preds(arity_of(fixed_point), [Formula::FalseNeg, Formula::TrueNeg])
            .into_iter()
            .map(|s| Induction {
                invariant: s,
                closure: CertAbs::constant(Cert::Stop),
                cont: Cert::Stop,
            })
            .collect()
    }

    fn coind(&self, _cert: &Cert, fixed_point: &Formula) -> Vec<Induction> {
        constant_preds(arity_of(fixed_point), [Formula::TruePos, Formula::FalsePos])
            .into_iter()
            .map(|s| Induction {
                invariant: s,
                closure: CertAbs::constant(Cert::Stop),
                cont: Cert::Stop,
            })
            .collect()
    }

    fn expert(&self, _kind: Expert, _cert: &Cert) -> Vec<Cert> {
        vec![Cert::Stop]
    }

    fn expert_split(&self, _kind: ExpertSplit, _cert: &Cert) -> Vec<(Cert, Cert)> {
        vec![(Cert::Stop, Cert::Stop)]
    }

    fn expert_choice(&self, _kind: ExpertChoice, _cert: &Cert) -> Vec<(Cert, u8)> {
        vec![(Cert::Stop, 1), (Cert::Stop, 2)]
    }

    fn expert_witness(&self, _kind: ExpertWitness, _cert: &Cert) -> Vec<(Cert, Witness)> {
        vec![(Cert::Stop, Witness::Fresh)]
    }

    fn decide(&self, _side: Side, _cert: &Cert, _stored: &Formula) -> Vec<Cert> {
        vec![Cert::Stop]
    }
}
