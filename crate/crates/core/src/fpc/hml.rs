use crate::terms::{Formula, Side, Term};

use super::common::common_table;
use super::{
    Assertion, Cert, CertAbs, Clerk, ClerkAbs, ClerkSplit, Common, DiaItem, Expert, ExpertChoice,
    ExpertSplit, ExpertWitness, FpcTable, Induction, Witness,
};

/// Non-simulation and non-bisimulation: an assertion that the left process
/// satisfies and the right one does not drives the refutation.
#[derive(Clone, Copy, Debug)]
pub struct Hml {
    bisim: bool,
    common: Common,
}

pub fn nonsim_table() -> Hml {
    Hml {
        bisim: false,
        common: common_table(),
    }
}

/// Accepts negated diamonds; a negated diamond selects the second conjunct
/// of the bisimulation body.
pub fn nonbisim_table() -> Hml {
    Hml {
        bisim: true,
        common: common_table(),
    }
}

impl Hml {
    fn allows(&self, item: &DiaItem) -> bool {
        self.bisim || matches!(item, DiaItem::Dia(..))
    }
}

impl FpcTable for Hml {
    fn name(&self) -> &str {
        if self.bisim {
            "nonbisim"
        } else {
            "nonsim"
        }
    }

    fn clerk(&self, kind: Clerk, cert: &Cert) -> Vec<Cert> {
        match cert {
            Cert::Hml(a) => {
                let mut out = vec![cert.clone()];
                // Only the goal's own implication is introduced on the right,
                // so this offers the other orientation once, at the root.
                if self.bisim && kind == Clerk::ImpR && a.0.len() == 1 && a.has_neg_dia() {
                    out.push(Cert::Hml(Assertion(vec![a.0[0].negated()])));
                }
                out
            }
            _ => self.common.clerk(kind, cert),
        }
    }

    fn clerk_split(&self, kind: ClerkSplit, cert: &Cert) -> Vec<(Cert, Cert)> {
        match cert {
            Cert::Hml(_) => vec![(cert.clone(), cert.clone())],
            _ => self.common.clerk_split(kind, cert),
        }
    }

    fn clerk_abs(&self, kind: ClerkAbs, cert: &Cert) -> Vec<CertAbs> {
        match cert {
            Cert::Hml(_) => vec![CertAbs::constant(cert.clone())],
            _ => self.common.clerk_abs(kind, cert),
        }
    }

    fn ind(&self, _cert: &Cert, _fixed_point: &Formula) -> Vec<Induction> {
        Vec::new()
    }

    fn coind(&self, _cert: &Cert, _fixed_point: &Formula) -> Vec<Induction> {
        Vec::new()
    }

    fn expert(&self, kind: Expert, cert: &Cert) -> Vec<Cert> {
        match (kind, cert) {
            (Expert::NuUnfoldL, Cert::HmlDia(item)) if self.allows(item) => vec![cert.clone()],
            (Expert::ReleaseL, Cert::Hml(_)) => vec![cert.clone()],
            _ => self.common.expert(kind, cert),
        }
    }

    fn expert_split(&self, kind: ExpertSplit, cert: &Cert) -> Vec<(Cert, Cert)> {
        match (kind, cert) {
            (ExpertSplit::ImpL, Cert::Hml(_)) => vec![(Cert::sync(Cert::Stop), cert.clone())],
            _ => self.common.expert_split(kind, cert),
        }
    }

    fn expert_choice(&self, kind: ExpertChoice, cert: &Cert) -> Vec<(Cert, u8)> {
        match (kind, cert) {
            (ExpertChoice::AndNegL, Cert::HmlDia(item)) if self.bisim => match item {
                DiaItem::Dia(..) => vec![(cert.clone(), 1)],
                DiaItem::NegDia(..) => vec![(Cert::HmlDia(item.negated()), 2)],
            },
            _ => self.common.expert_choice(kind, cert),
        }
    }

    fn expert_witness(&self, kind: ExpertWitness, cert: &Cert) -> Vec<(Cert, Witness)> {
        match (kind, cert) {
            (ExpertWitness::ForallL, Cert::HmlDia(DiaItem::Dia(label, a))) => vec![(
                Cert::Hml(a.clone()),
                Witness::Term(Term::Const(label.clone(), Vec::new())),
            )],
            (ExpertWitness::ForallL, Cert::Hml(_)) => vec![(cert.clone(), Witness::Fresh)],
            _ => self.common.expert_witness(kind, cert),
        }
    }

    fn decide(&self, side: Side, cert: &Cert, stored: &Formula) -> Vec<Cert> {
        match (side, cert) {
            (Side::Left, Cert::Hml(a)) => a
                .0
                .iter()
                .filter(|item| self.allows(item))
                .map(|item| Cert::HmlDia(item.clone()))
                .collect(),
            _ => self.common.decide(side, cert, stored),
        }
    }
}
