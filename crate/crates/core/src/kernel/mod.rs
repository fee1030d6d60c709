//! The trusted checker.
//!
//! [`check`] reconstructs a focused proof of a goal, asking an [`FpcTable`]
//! at every rule which continuations a certificate allows. Acceptance is
//! only reported after the erased derivation passes [`validate`], so a table
//! can make the kernel slow or incomplete but never unsound.

mod derivation;
mod machine;
mod sequent;
mod trace;

use thiserror::Error;

pub use derivation::{erase, validate, Derivation, ValidationError};
pub use sequent::Sequent;
pub use trace::{digest, Info, Rule, Step, Trace};

use crate::fpc::{Cert, FpcTable};
use crate::terms::{Formula, Side};
use machine::{Machine, Outcome};

#[derive(Clone, Debug)]
pub struct CheckConfig {
    /// Maximum number of rule applications along one branch.
    pub depth_bound: u32,
    /// Maximum number of goals expanded in total, across backtracking.
    pub step_budget: u64,
    /// Treat (co)induction in a context with synchronous formulas as an
    /// error rather than a legal step.
    pub enforce_restriction: bool,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            depth_bound: 10_000,
            step_budget: 2_000_000,
            enforce_restriction: true,
        }
    }
}

impl CheckConfig {
    pub fn with_depth(depth_bound: u32) -> CheckConfig {
        CheckConfig {
            depth_bound,
            ..CheckConfig::default()
        }
    }
}

#[derive(Clone, Debug)]
pub enum Verdict {
    Accepted(Proof),
    Rejected,
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted(_))
    }

    pub fn proof(&self) -> Option<&Proof> {
        match self {
            Verdict::Accepted(p) => Some(p),
            Verdict::Rejected => None,
        }
    }
}

/// An accepted check: the trace and its validated erasure.
#[derive(Clone, Debug)]
pub struct Proof {
    pub trace: Trace,
    pub derivation: Derivation,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("search bound reached after {steps} steps without a proof")]
    ResourceExhausted { steps: u64 },
    #[error("kernel invariant violated: {0}")]
    InvariantViolation(String),
    #[error("goal is not switchable")]
    NotSwitchable,
    #[error("ill-formed formula: {0}")]
    IllFormed(String),
}

/// Checks `cert` against `goal` under `table`.
pub fn check(
    table: &dyn FpcTable,
    cert: &Cert,
    goal: &Formula,
    config: &CheckConfig,
) -> Result<Verdict, CheckError> {
    goal.check_well_formed()
        .map_err(|e| CheckError::IllFormed(e.to_string()))?;
    if !goal.is_switchable(Side::Right) {
        return Err(CheckError::NotSwitchable);
    }
    check_sequent(table, cert, Sequent::goal(goal.clone()), config)
}

/// Like [`check`] for an arbitrary root sequent, without the switchability
/// precondition.
pub fn check_sequent(
    table: &dyn FpcTable,
    cert: &Cert,
    root: Sequent,
    config: &CheckConfig,
) -> Result<Verdict, CheckError> {
    match Machine::new(table, config).run(root, cert.clone())? {
        Outcome::Proved(steps) => {
            let trace = Trace { steps };
            let derivation =
                erase(&trace).map_err(|e| CheckError::InvariantViolation(e.to_string()))?;
            validate(&derivation).map_err(|e| CheckError::InvariantViolation(e.to_string()))?;
            if derivation.phase_switch_violations() > 0 {
                return Err(CheckError::InvariantViolation(
                    "phase switch on a sequent with several formulas".into(),
                ));
            }
            Ok(Verdict::Accepted(Proof { trace, derivation }))
        }
        Outcome::Failed {
            depth_hit: true,
            steps,
        } => Err(CheckError::ResourceExhausted { steps }),
        Outcome::Failed { depth_hit: false, .. } => Ok(Verdict::Rejected),
    }
}

#[cfg(test)]
mod tests;
