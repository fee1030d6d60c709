use std::fmt;
use std::sync::Arc;

use sha2::{Digest, Sha256};

use crate::fpc::Cert;
use crate::terms::{Eigen, PredExpr, Term};
use crate::unify::BindingStore;

use super::Sequent;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    // asynchronous, left
    EqL,
    TruePosL,
    FalsePosL,
    AndPosL,
    OrL,
    ExistsL,
    Ind,
    MuUnfoldL,
    StoreL,
    // asynchronous, right
    NeqR,
    TrueNegR,
    FalseNegR,
    ImpR,
    AndNegR,
    ForallR,
    CoInd,
    NuUnfoldR,
    StoreR,
    // phase switches
    DecideL,
    DecideR,
    ReleaseL,
    ReleaseR,
    // synchronous, right
    EqR,
    TruePosR,
    AndPosR,
    OrR,
    ExistsR,
    MuUnfoldR,
    // synchronous, left
    NeqL,
    FalseNegL,
    ImpL,
    AndNegL,
    ForallL,
    NuUnfoldL,
}

impl Rule {
    pub fn name(self) -> &'static str {
        use Rule::*;
        match self {
            EqL => "eq-l",
            TruePosL => "true+-l",
            FalsePosL => "false+-l",
            AndPosL => "and+-l",
            OrL => "or-l",
            ExistsL => "exists-l",
            Ind => "ind",
            MuUnfoldL => "mu-unfold-l",
            StoreL => "store-l",
            NeqR => "neq-r",
            TrueNegR => "true--r",
            FalseNegR => "false--r",
            ImpR => "imp-r",
            AndNegR => "and--r",
            ForallR => "forall-r",
            CoInd => "coind",
            NuUnfoldR => "nu-unfold-r",
            StoreR => "store-r",
            DecideL => "decide-l",
            DecideR => "decide-r",
            ReleaseL => "release-l",
            ReleaseR => "release-r",
            EqR => "eq-r",
            TruePosR => "true+-r",
            AndPosR => "and+-r",
            OrR => "or-r",
            ExistsR => "exists-r",
            MuUnfoldR => "mu-unfold-r",
            NeqL => "neq-l",
            FalseNegL => "false--l",
            ImpL => "imp-l",
            AndNegL => "and--l",
            ForallL => "forall-l",
            NuUnfoldL => "nu-unfold-l",
        }
    }

    pub fn is_phase_switch(self) -> bool {
        matches!(
            self,
            Rule::DecideL | Rule::DecideR | Rule::ReleaseL | Rule::ReleaseR
        )
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Rule-specific data needed to re-check a step without the certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Info {
    None,
    /// Most general unifier used by a unifying `=`-left or `≠`-right.
    Theta(Vec<(Eigen, Term)>),
    /// `=`-left or `≠`-right closing on non-unifiable terms.
    Clash,
    Eigen(Eigen),
    Invariant(Arc<PredExpr>, Vec<Eigen>),
    Witness(Term),
    Branch(u8),
}

impl Info {
    fn resolve(&self, store: &BindingStore) -> Info {
        match self {
            Info::Theta(theta) => Info::Theta(
                theta
                    .iter()
                    .map(|(e, t)| (*e, store.resolve(t)))
                    .collect(),
            ),
            Info::Witness(t) => Info::Witness(store.resolve(t)),
            other => other.clone(),
        }
    }
}

/// One rule application, recorded in preorder.
#[derive(Clone, Debug)]
pub struct Step {
    pub rule: Rule,
    pub conclusion: Sequent,
    pub cert: Cert,
    pub premises: usize,
    pub info: Info,
}

impl Step {
    pub(super) fn resolve(&self, store: &BindingStore) -> Step {
        Step {
            rule: self.rule,
            conclusion: self.conclusion.resolve(store),
            cert: self.cert.clone(),
            premises: self.premises,
            info: self.info.resolve(store),
        }
    }
}

/// The rule applications of an accepted check, in preorder.
#[derive(Clone, Debug, Default)]
pub struct Trace {
    pub steps: Vec<Step>,
}

pub fn digest(text: &str) -> String {
    let hash = Sha256::digest(text.as_bytes());
    hash.iter().take(6).map(|b| format!("{b:02x}")).collect()
}

impl Trace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `<rule-name> <sequent-digest> <cert-digest>` per step.
    pub fn lines(&self) -> Vec<String> {
        self.steps
            .iter()
            .map(|s| {
                format!(
                    "{} {} {}",
                    s.rule,
                    digest(&s.conclusion.to_string()),
                    digest(&s.cert.to_string())
                )
            })
            .collect()
    }

    /// Like [`Trace::lines`], followed by the sequent and certificate.
    pub fn full_lines(&self) -> Vec<String> {
        self.lines()
            .into_iter()
            .zip(&self.steps)
            .map(|(line, s)| format!("{line}\t{}\t{}", s.conclusion, s.cert))
            .collect()
    }

    pub fn rules(&self) -> Vec<Rule> {
        self.steps.iter().map(|s| s.rule).collect()
    }
}
