//! Terms, polarized fixed-point formulas, and their syntax.

mod formula;
mod syntax;
mod term;

pub use formula::{FixBody, FixKind, Formula, FormulaError, Polarity, PredExpr, PredRef, Side};
pub use syntax::{
    parse_formula, parse_formula_in, parse_pred_expr, pred_expr_from_sexp, term_from_sexp, FixEnv,
};
pub use term::{Eigen, Symbol, Term, Var};
