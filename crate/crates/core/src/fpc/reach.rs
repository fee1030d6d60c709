use crate::terms::{Formula, Side, Term};

use super::common::common_table;
use super::{
    Cert, CertAbs, Clerk, ClerkAbs, ClerkSplit, Common, Expert, ExpertChoice, ExpertSplit,
    ExpertWitness, FpcTable, Induction, Witness,
};

/// Reachability: a `(path L)` certificate lists the intermediate nodes, each
/// instantiating one existential of the path definition. Steps are checked
/// by `sync stop`.
#[derive(Clone, Copy, Debug)]
pub struct Reach {
    common: Common,
}

pub fn reach_table() -> Reach {
    Reach {
        common: common_table(),
    }
}

impl FpcTable for Reach {
    fn name(&self) -> &str {
        "reach"
    }

    fn clerk(&self, kind: Clerk, cert: &Cert) -> Vec<Cert> {
        match (kind, cert) {
            (Clerk::StoreR, Cert::Path(_)) => vec![cert.clone()],
            _ => self.common.clerk(kind, cert),
        }
    }

    fn clerk_split(&self, kind: ClerkSplit, cert: &Cert) -> Vec<(Cert, Cert)> {
        self.common.clerk_split(kind, cert)
    }

    fn clerk_abs(&self, kind: ClerkAbs, cert: &Cert) -> Vec<CertAbs> {
        self.common.clerk_abs(kind, cert)
    }

    fn ind(&self, cert: &Cert, fixed_point: &Formula) -> Vec<Induction> {
        self.common.ind(cert, fixed_point)
    }

    fn coind(&self, cert: &Cert, fixed_point: &Formula) -> Vec<Induction> {
        self.common.coind(cert, fixed_point)
    }

    fn expert(&self, kind: Expert, cert: &Cert) -> Vec<Cert> {
        match (kind, cert) {
            (Expert::MuUnfoldR, Cert::Path(_)) => vec![cert.clone()],
            _ => self.common.expert(kind, cert),
        }
    }

    fn expert_split(&self, kind: ExpertSplit, cert: &Cert) -> Vec<(Cert, Cert)> {
        match (kind, cert) {
            (ExpertSplit::AndPosR, Cert::Path(_)) => {
                vec![(Cert::sync(Cert::Stop), cert.clone())]
            }
            _ => self.common.expert_split(kind, cert),
        }
    }

    fn expert_choice(&self, kind: ExpertChoice, cert: &Cert) -> Vec<(Cert, u8)> {
        match (kind, cert) {
            (ExpertChoice::OrR, Cert::Path(nodes)) if nodes.is_empty() => {
                vec![(Cert::sync(Cert::Stop), 1)]
            }
            (ExpertChoice::OrR, Cert::Path(_)) => vec![(cert.clone(), 2)],
            _ => self.common.expert_choice(kind, cert),
        }
    }

    fn expert_witness(&self, kind: ExpertWitness, cert: &Cert) -> Vec<(Cert, Witness)> {
        match (kind, cert) {
            (ExpertWitness::ExistsR, Cert::Path(nodes)) => match nodes.split_first() {
                Some((x, rest)) => vec![(
                    Cert::Path(rest.to_vec()),
                    Witness::Term(Term::Const(x.clone(), Vec::new())),
                )],
                None => Vec::new(),
            },
            _ => self.common.expert_witness(kind, cert),
        }
    }

    fn decide(&self, side: Side, cert: &Cert, stored: &Formula) -> Vec<Cert> {
        match (side, cert) {
            (Side::Right, Cert::Path(_)) => vec![cert.clone()],
            _ => self.common.decide(side, cert, stored),
        }
    }
}
