use std::sync::Arc;

use thiserror::Error;

use super::term::Term;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FixKind {
    Mu,
    Nu,
}

impl FixKind {
    pub fn polarity(self) -> Polarity {
        match self {
            FixKind::Mu => Polarity::Positive,
            FixKind::Nu => Polarity::Negative,
        }
    }
}

/// Which side of the turnstile a formula occurrence sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("arity mismatch: expected {expected} arguments, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("not a fixed-point expression")]
    NotFixedPoint,
    #[error("ill-formed formula: {0}")]
    IllFormed(String),
}

/// Body of a fixed point: an abstraction over one predicate variable
/// (index 0 of the predicate scope) and `arity` term parameters
/// (indices `arity-1 .. 0`, first parameter outermost).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixBody {
    arity: u32,
    body: Formula,
    closed: bool,
}

impl FixBody {
    pub fn new(arity: u32, body: Formula) -> FixBody {
        let (terms, preds) = body.free_extent(arity, 1);
        FixBody {
            arity,
            body,
            closed: terms == 0 && preds == 0,
        }
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn body(&self) -> &Formula {
        &self.body
    }

    /// No free term or predicate variables beyond its own binders.
    pub fn is_closed(&self) -> bool {
        self.closed
    }
}

/// A closed predicate `λx₁…xₙ. body`, used for invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredExpr {
    arity: u32,
    body: Formula,
}

impl PredExpr {
    pub fn new(arity: u32, body: Formula) -> Result<PredExpr, FormulaError> {
        let (terms, preds) = body.free_extent(arity, 0);
        if terms != 0 || preds != 0 {
            return Err(FormulaError::IllFormed(
                "predicate expression has free variables".into(),
            ));
        }
        Ok(PredExpr { arity, body })
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn body(&self) -> &Formula {
        &self.body
    }

    /// Instantiates the parameters with closed terms.
    pub fn apply(&self, args: &[Term]) -> Result<Formula, FormulaError> {
        if args.len() != self.arity as usize {
            return Err(FormulaError::ArityMismatch {
                expected: self.arity as usize,
                found: args.len(),
            });
        }
        let inst = Inst { terms: args, pred: None };
        Ok(inst.formula(&self.body, 0, 0).normalize_top())
    }

    pub fn polarity(&self) -> Polarity {
        self.body.polarity()
    }

    pub fn is_purely_positive(&self) -> bool {
        self.body.is_purely_positive()
    }

    pub fn is_purely_negative(&self) -> bool {
        self.body.is_purely_negative()
    }

    pub fn dual(&self) -> PredExpr {
        PredExpr {
            arity: self.arity,
            body: self.body.dual(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PredRef {
    /// de Bruijn index into enclosing fixed-point bodies, with the
    /// polarity of the fixed point it stands for.
    Var {
        index: u32,
        arity: u32,
        polarity: Polarity,
    },
    Expr(Arc<PredExpr>),
}

impl PredRef {
    pub fn arity(&self) -> u32 {
        match self {
            PredRef::Var { arity, .. } => *arity,
            PredRef::Expr(e) => e.arity,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    TruePos,
    FalsePos,
    TrueNeg,
    FalseNeg,
    AndPos(Arc<Formula>, Arc<Formula>),
    AndNeg(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Imp(Arc<Formula>, Arc<Formula>),
    Eq(Term, Term),
    Neq(Term, Term),
    Exists(Arc<Formula>),
    Forall(Arc<Formula>),
    Mu(Arc<FixBody>, Vec<Term>),
    Nu(Arc<FixBody>, Vec<Term>),
    PredApp(PredRef, Vec<Term>),
}

impl Formula {
    pub fn and_pos(a: Formula, b: Formula) -> Formula {
        Formula::AndPos(Arc::new(a), Arc::new(b))
    }

    pub fn and_neg(a: Formula, b: Formula) -> Formula {
        Formula::AndNeg(Arc::new(a), Arc::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Arc::new(a), Arc::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Arc::new(a), Arc::new(b))
    }

    pub fn negate(a: Formula) -> Formula {
        Formula::imp(a, Formula::FalseNeg)
    }

    pub fn fix(kind: FixKind, body: Arc<FixBody>, args: Vec<Term>) -> Formula {
        match kind {
            FixKind::Mu => Formula::Mu(body, args),
            FixKind::Nu => Formula::Nu(body, args),
        }
    }

    /// Right-nested disjunction; the empty disjunction is `false⁺`.
    pub fn disjunction(items: Vec<Formula>) -> Formula {
        let mut it = items.into_iter().rev();
        match it.next() {
            None => Formula::FalsePos,
            Some(last) => it.fold(last, |acc, f| Formula::or(f, acc)),
        }
    }

    /// Right-nested positive conjunction; the empty one is `true⁺`.
    pub fn conjunction_pos(items: Vec<Formula>) -> Formula {
        let mut it = items.into_iter().rev();
        match it.next() {
            None => Formula::TruePos,
            Some(last) => it.fold(last, |acc, f| Formula::and_pos(f, acc)),
        }
    }

    pub fn polarity(&self) -> Polarity {
        use Formula::*;
        match self {
            TruePos | FalsePos | AndPos(..) | Or(..) | Eq(..) | Exists(_) | Mu(..) => {
                Polarity::Positive
            }
            TrueNeg | FalseNeg | AndNeg(..) | Imp(..) | Neq(..) | Forall(_) | Nu(..) => {
                Polarity::Negative
            }
            PredApp(PredRef::Var { polarity, .. }, _) => *polarity,
            PredApp(PredRef::Expr(e), _) => e.polarity(),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.polarity() == Polarity::Positive
    }

    pub fn is_negative(&self) -> bool {
        self.polarity() == Polarity::Negative
    }

    pub fn is_purely_positive(&self) -> bool {
        self.is_pure(Polarity::Positive)
    }

    pub fn is_purely_negative(&self) -> bool {
        self.is_pure(Polarity::Negative)
    }

    // Positive connectives exactly at even implication depth (want = Positive)
    // or exactly at odd depth (want = Negative). Only antecedents count.
    fn is_pure(&self, want: Polarity) -> bool {
        use Formula::*;
        if self.polarity() != want {
            return false;
        }
        match self {
            AndPos(a, b) | AndNeg(a, b) | Or(a, b) => a.is_pure(want) && b.is_pure(want),
            Imp(a, b) => a.is_pure(want.flip()) && b.is_pure(want),
            Exists(body) | Forall(body) => body.is_pure(want),
            Mu(fb, _) | Nu(fb, _) => fb.body.is_pure(want),
            PredApp(PredRef::Expr(e), _) => e.body.is_pure(want),
            _ => true,
        }
    }

    /// Whether an occurrence of this formula on `side` is switchable.
    pub fn is_switchable(&self, side: Side) -> bool {
        match side {
            Side::Right => self.switchable_in(false),
            Side::Left => Formula::negate(self.clone()).switchable_in(false),
        }
    }

    fn switchable_in(&self, negative: bool) -> bool {
        use Formula::*;
        match self {
            AndPos(c, d) => {
                (!negative || c.is_purely_positive() || d.is_purely_positive())
                    && c.switchable_in(negative)
                    && d.switchable_in(negative)
            }
            Imp(c, d) => {
                (negative || c.is_purely_positive() || d.is_purely_negative())
                    && c.switchable_in(!negative)
                    && d.switchable_in(negative)
            }
            AndNeg(a, b) | Or(a, b) => a.switchable_in(negative) && b.switchable_in(negative),
            Exists(body) | Forall(body) => body.switchable_in(negative),
            Mu(fb, _) | Nu(fb, _) => fb.body.switchable_in(negative),
            PredApp(PredRef::Expr(e), _) => e.body.switchable_in(negative),
            _ => true,
        }
    }

    /// De Morgan dual, with `(A ⊃ B)^⊥ = A ∧⁺ B^⊥`.
    pub fn dual(&self) -> Formula {
        use Formula::*;
        match self {
            TruePos => FalseNeg,
            FalseNeg => TruePos,
            FalsePos => TrueNeg,
            TrueNeg => FalsePos,
            AndPos(a, b) => Imp(a.clone(), Arc::new(b.dual())),
            Imp(a, b) => AndPos(a.clone(), Arc::new(b.dual())),
            AndNeg(a, b) => Or(Arc::new(a.dual()), Arc::new(b.dual())),
            Or(a, b) => AndNeg(Arc::new(a.dual()), Arc::new(b.dual())),
            Eq(s, t) => Neq(s.clone(), t.clone()),
            Neq(s, t) => Eq(s.clone(), t.clone()),
            Exists(body) => Forall(Arc::new(body.dual())),
            Forall(body) => Exists(Arc::new(body.dual())),
            Mu(fb, args) => Nu(Arc::new(FixBody::new(fb.arity, fb.body.dual())), args.clone()),
            Nu(fb, args) => Mu(Arc::new(FixBody::new(fb.arity, fb.body.dual())), args.clone()),
            PredApp(PredRef::Var { index, arity, polarity }, args) => PredApp(
                PredRef::Var {
                    index: *index,
                    arity: *arity,
                    polarity: polarity.flip(),
                },
                args.clone(),
            ),
            PredApp(PredRef::Expr(e), args) => {
                PredApp(PredRef::Expr(Arc::new(e.dual())), args.clone())
            }
        }
    }

    /// `B(μB) t̄` for `μB t̄`, dually for ν.
    pub fn unfold(&self) -> Result<Formula, FormulaError> {
        let (kind, fb, args) = match self {
            Formula::Mu(fb, args) => (FixKind::Mu, fb, args),
            Formula::Nu(fb, args) => (FixKind::Nu, fb, args),
            _ => return Err(FormulaError::NotFixedPoint),
        };
        if args.len() != fb.arity as usize {
            return Err(FormulaError::ArityMismatch {
                expected: fb.arity as usize,
                found: args.len(),
            });
        }
        let inst = Inst {
            terms: args,
            pred: Some(PredRepl::Fix(kind, fb)),
        };
        Ok(inst.formula(&fb.body, 0, 0).normalize_top())
    }

    /// `B S t̄`: the body of this fixed point with its recursive occurrence
    /// replaced by `s` and its parameters by `args`.
    pub fn body_with(&self, s: &Arc<PredExpr>, args: &[Term]) -> Result<Formula, FormulaError> {
        let fb = match self {
            Formula::Mu(fb, _) | Formula::Nu(fb, _) => fb,
            _ => return Err(FormulaError::NotFixedPoint),
        };
        if args.len() != fb.arity as usize || s.arity != fb.arity {
            return Err(FormulaError::ArityMismatch {
                expected: fb.arity as usize,
                found: args.len().min(s.arity as usize),
            });
        }
        let inst = Inst {
            terms: args,
            pred: Some(PredRepl::Expr(s)),
        };
        Ok(inst.formula(&fb.body, 0, 0).normalize_top())
    }

    /// Instantiates the body of a quantifier with a closed term.
    pub fn instantiate(body: &Formula, t: &Term) -> Formula {
        let inst = Inst {
            terms: std::slice::from_ref(t),
            pred: None,
        };
        inst.formula(body, 0, 0).normalize_top()
    }

    /// Beta-reduces a top-level application of a predicate expression.
    pub fn normalize_top(self) -> Formula {
        let mut f = self;
        while let Formula::PredApp(PredRef::Expr(e), args) = &f {
            if args.len() != e.arity as usize || !args.iter().all(Term::is_closed) {
                break;
            }
            let inst = Inst { terms: args, pred: None };
            f = inst.formula(&e.body, 0, 0);
        }
        f
    }

    /// Applies `f` to every variable leaf of every term. Closed fixed-point
    /// bodies and predicate expressions are shared, not traversed.
    pub fn map_terms(&self, f: &impl Fn(&Term) -> Option<Term>) -> Formula {
        use Formula::*;
        let arc = |a: &Arc<Formula>| Arc::new(a.map_terms(f));
        let terms = |ts: &[Term]| ts.iter().map(|t| t.map_leaves(f)).collect::<Vec<_>>();
        match self {
            TruePos | FalsePos | TrueNeg | FalseNeg => self.clone(),
            AndPos(a, b) => AndPos(arc(a), arc(b)),
            AndNeg(a, b) => AndNeg(arc(a), arc(b)),
            Or(a, b) => Or(arc(a), arc(b)),
            Imp(a, b) => Imp(arc(a), arc(b)),
            Eq(s, t) => Eq(s.map_leaves(f), t.map_leaves(f)),
            Neq(s, t) => Neq(s.map_leaves(f), t.map_leaves(f)),
            Exists(b) => Exists(arc(b)),
            Forall(b) => Forall(arc(b)),
            Mu(fb, args) => Mu(map_body(fb, f), terms(args)),
            Nu(fb, args) => Nu(map_body(fb, f), terms(args)),
            PredApp(p, args) => PredApp(p.clone(), terms(args)),
        }
    }

    pub fn for_each_term(&self, f: &mut impl FnMut(&Term)) {
        use Formula::*;
        match self {
            TruePos | FalsePos | TrueNeg | FalseNeg => {}
            AndPos(a, b) | AndNeg(a, b) | Or(a, b) | Imp(a, b) => {
                a.for_each_term(f);
                b.for_each_term(f);
            }
            Eq(s, t) | Neq(s, t) => {
                f(s);
                f(t);
            }
            Exists(b) | Forall(b) => b.for_each_term(f),
            Mu(fb, args) | Nu(fb, args) => {
                fb.body.for_each_term(f);
                args.iter().for_each(&mut *f);
            }
            PredApp(p, args) => {
                if let PredRef::Expr(e) = p {
                    e.body.for_each_term(f);
                }
                args.iter().for_each(&mut *f);
            }
        }
    }

    pub fn mentions_eigen(&self, id: u32) -> bool {
        let mut found = false;
        self.for_each_term(&mut |t| found |= t.mentions_eigen(id));
        found
    }

    /// Replaces the truth/falsity units by equalities over the two distinct
    /// constants `a` and `b`: `true⁺ = (a = a)`, `false⁺ = (a = b)`,
    /// `false⁻ = (a ≠ a)`, `true⁻ = (a ≠ b)`.
    pub fn units_as_equalities(&self, a: &Term, b: &Term) -> Formula {
        use Formula::*;
        let arc = |x: &Arc<Formula>| Arc::new(x.units_as_equalities(a, b));
        match self {
            TruePos => Eq(a.clone(), a.clone()),
            FalsePos => Eq(a.clone(), b.clone()),
            FalseNeg => Neq(a.clone(), a.clone()),
            TrueNeg => Neq(a.clone(), b.clone()),
            AndPos(x, y) => AndPos(arc(x), arc(y)),
            AndNeg(x, y) => AndNeg(arc(x), arc(y)),
            Or(x, y) => Or(arc(x), arc(y)),
            Imp(x, y) => Imp(arc(x), arc(y)),
            Exists(x) => Exists(arc(x)),
            Forall(x) => Forall(arc(x)),
            Mu(fb, args) => Mu(
                Arc::new(FixBody::new(fb.arity, fb.body.units_as_equalities(a, b))),
                args.clone(),
            ),
            Nu(fb, args) => Nu(
                Arc::new(FixBody::new(fb.arity, fb.body.units_as_equalities(a, b))),
                args.clone(),
            ),
            other => other.clone(),
        }
    }

    /// Checks predicate arities and that no bound index escapes.
    pub fn check_well_formed(&self) -> Result<(), FormulaError> {
        let (terms, preds) = self.free_extent(0, 0);
        if terms != 0 || preds != 0 {
            return Err(FormulaError::IllFormed("free bound variable".into()));
        }
        self.check_arities()
    }

    fn check_arities(&self) -> Result<(), FormulaError> {
        use Formula::*;
        match self {
            AndPos(a, b) | AndNeg(a, b) | Or(a, b) | Imp(a, b) => {
                a.check_arities()?;
                b.check_arities()
            }
            Exists(b) | Forall(b) => b.check_arities(),
            Mu(fb, args) | Nu(fb, args) => {
                if args.len() != fb.arity as usize {
                    return Err(FormulaError::ArityMismatch {
                        expected: fb.arity as usize,
                        found: args.len(),
                    });
                }
                fb.body.check_arities()
            }
            PredApp(p, args) => {
                if args.len() != p.arity() as usize {
                    return Err(FormulaError::ArityMismatch {
                        expected: p.arity() as usize,
                        found: args.len(),
                    });
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// `(term extent, predicate extent)` of indices escaping `td`/`pd` binders.
    pub(crate) fn free_extent(&self, td: u32, pd: u32) -> (u32, u32) {
        use Formula::*;
        let terms = |ts: &[Term], d: u32| ts.iter().map(|t| t.free_extent(d)).max().unwrap_or(0);
        match self {
            TruePos | FalsePos | TrueNeg | FalseNeg => (0, 0),
            AndPos(a, b) | AndNeg(a, b) | Or(a, b) | Imp(a, b) => {
                let (x1, y1) = a.free_extent(td, pd);
                let (x2, y2) = b.free_extent(td, pd);
                (x1.max(x2), y1.max(y2))
            }
            Eq(s, t) | Neq(s, t) => (s.free_extent(td).max(t.free_extent(td)), 0),
            Exists(b) | Forall(b) => b.free_extent(td + 1, pd),
            Mu(fb, args) | Nu(fb, args) => {
                let (x, y) = if fb.closed {
                    (0, 0)
                } else {
                    fb.body.free_extent(td + fb.arity, pd + 1)
                };
                (x.max(terms(args, td)), y)
            }
            PredApp(p, args) => {
                let y = match p {
                    PredRef::Var { index, .. } if *index >= pd => index - pd + 1,
                    _ => 0,
                };
                (terms(args, td), y)
            }
        }
    }
}

fn map_body(fb: &Arc<FixBody>, f: &impl Fn(&Term) -> Option<Term>) -> Arc<FixBody> {
    if fb.closed {
        fb.clone()
    } else {
        Arc::new(FixBody::new(fb.arity, fb.body.map_terms(f)))
    }
}

enum PredRepl<'a> {
    Fix(FixKind, &'a Arc<FixBody>),
    Expr(&'a Arc<PredExpr>),
}

/// Simultaneous substitution of closed terms for the innermost term
/// binders, and optionally of a predicate for the innermost predicate
/// binder. Replacements are closed, so no index shifting is needed on them.
struct Inst<'a> {
    terms: &'a [Term],
    pred: Option<PredRepl<'a>>,
}

impl Inst<'_> {
    fn term(&self, t: &Term, td: u32) -> Term {
        match t {
            Term::Bound(k) if *k >= td => {
                let n = self.terms.len() as u32;
                let j = k - td;
                if j < n {
                    self.terms[(n - 1 - j) as usize].clone()
                } else {
                    Term::Bound(k - n)
                }
            }
            Term::Const(name, args) if !args.is_empty() => {
                Term::Const(name.clone(), args.iter().map(|a| self.term(a, td)).collect())
            }
            other => other.clone(),
        }
    }

    fn terms(&self, ts: &[Term], td: u32) -> Vec<Term> {
        ts.iter().map(|t| self.term(t, td)).collect()
    }

    fn formula(&self, f: &Formula, td: u32, pd: u32) -> Formula {
        use Formula::*;
        let arc = |a: &Arc<Formula>, td| Arc::new(self.formula(a, td, pd));
        match f {
            TruePos | FalsePos | TrueNeg | FalseNeg => f.clone(),
            AndPos(a, b) => AndPos(arc(a, td), arc(b, td)),
            AndNeg(a, b) => AndNeg(arc(a, td), arc(b, td)),
            Or(a, b) => Or(arc(a, td), arc(b, td)),
            Imp(a, b) => Imp(arc(a, td), arc(b, td)),
            Eq(s, t) => Eq(self.term(s, td), self.term(t, td)),
            Neq(s, t) => Neq(self.term(s, td), self.term(t, td)),
            Exists(b) => Exists(arc(b, td + 1)),
            Forall(b) => Forall(arc(b, td + 1)),
            Mu(fb, args) => Mu(self.body(fb, td, pd), self.terms(args, td)),
            Nu(fb, args) => Nu(self.body(fb, td, pd), self.terms(args, td)),
            PredApp(PredRef::Var { index, arity, polarity }, args) => {
                let args = self.terms(args, td);
                match &self.pred {
                    Some(repl) if *index == pd => match repl {
                        PredRepl::Fix(kind, fb) => Formula::fix(*kind, (*fb).clone(), args),
                        PredRepl::Expr(e) => PredApp(PredRef::Expr((*e).clone()), args),
                    },
                    Some(_) if *index > pd => PredApp(
                        PredRef::Var {
                            index: index - 1,
                            arity: *arity,
                            polarity: *polarity,
                        },
                        args,
                    ),
                    _ => PredApp(
                        PredRef::Var {
                            index: *index,
                            arity: *arity,
                            polarity: *polarity,
                        },
                        args,
                    ),
                }
            }
            PredApp(p @ PredRef::Expr(_), args) => PredApp(p.clone(), self.terms(args, td)),
        }
    }

    fn body(&self, fb: &Arc<FixBody>, td: u32, pd: u32) -> Arc<FixBody> {
        if fb.closed {
            return fb.clone();
        }
        Arc::new(FixBody::new(
            fb.arity,
            self.formula(&fb.body, td + fb.arity, pd + 1),
        ))
    }
}
