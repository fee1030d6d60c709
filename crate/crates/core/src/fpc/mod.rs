//! Certificates and the clerk/expert tables that interpret them.
//!
//! A table answers, for one certificate and one rule, which continuation
//! certificates (and, for synchronous rules, which branch or witness) the
//! kernel may use. Tables are untrusted: the kernel accepts nothing that is
//! not a valid proof, whatever a table says.

mod cert;
mod common;
mod hml;
mod permissive;
mod reach;
mod syntax;

use std::sync::Arc;

pub use cert::{Assertion, Cert, CertAbs, DiaItem};
pub use common::{common_table, nonreach_table, sim_table, Common};
pub use hml::{nonbisim_table, nonsim_table, Hml};
pub use permissive::Permissive;
pub use reach::{reach_table, Reach};
pub use syntax::{parse_assertion, parse_cert, CertError, CertMode};

use crate::terms::{Formula, PredExpr, Side, Term};

/// A witness emitted by an `∃`/`∀` expert.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Term(Term),
    /// Let the kernel allocate a fresh logic variable.
    Fresh,
}

/// One way to apply induction (on the left) or coinduction (on the right).
#[derive(Clone, Debug)]
pub struct Induction {
    pub invariant: Arc<PredExpr>,
    /// Certificate for the closure premise, over the fresh eigenvariables.
    pub closure: CertAbs,
    /// Certificate for the premise where the fixed point is replaced.
    pub cont: Cert,
}

/// Single-premise clerks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Clerk {
    EqL,
    NeqR,
    TruePosL,
    FalseNegR,
    AndPosL,
    ImpR,
    StoreL,
    StoreR,
    MuUnfoldL,
    NuUnfoldR,
}

/// Two-premise clerks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClerkSplit {
    OrL,
    AndNegR,
}

/// Eigenvariable clerks, which return certificate abstractions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClerkAbs {
    ExistsL,
    ForallR,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Expert {
    MuUnfoldR,
    NuUnfoldL,
    ReleaseL,
    ReleaseR,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExpertSplit {
    AndPosR,
    ImpL,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExpertChoice {
    OrR,
    AndNegL,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExpertWitness {
    ExistsR,
    ForallL,
}

/// The clerk and expert relations of one certificate format. Every method
/// returns the alternatives in the order the kernel should try them; an
/// empty vector means the rule is not permitted.
pub trait FpcTable: Sync {
    fn name(&self) -> &str;

    fn clerk(&self, kind: Clerk, cert: &Cert) -> Vec<Cert>;
    fn clerk_split(&self, kind: ClerkSplit, cert: &Cert) -> Vec<(Cert, Cert)>;
    fn clerk_abs(&self, kind: ClerkAbs, cert: &Cert) -> Vec<CertAbs>;

    /// Induction on a left `μ`; `fixed_point` is the formula being refuted.
    fn ind(&self, cert: &Cert, fixed_point: &Formula) -> Vec<Induction>;
    /// Coinduction on a right `ν`.
    fn coind(&self, cert: &Cert, fixed_point: &Formula) -> Vec<Induction>;

    fn expert(&self, kind: Expert, cert: &Cert) -> Vec<Cert>;
    fn expert_split(&self, kind: ExpertSplit, cert: &Cert) -> Vec<(Cert, Cert)>;
    fn expert_choice(&self, kind: ExpertChoice, cert: &Cert) -> Vec<(Cert, u8)>;
    fn expert_witness(&self, kind: ExpertWitness, cert: &Cert) -> Vec<(Cert, Witness)>;

    /// Focus on the only stored formula `stored`, kept on `side`.
    fn decide(&self, side: Side, cert: &Cert, stored: &Formula) -> Vec<Cert>;
}
