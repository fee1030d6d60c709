//! Certificate-free derivations and a standalone rule checker for them.
//!
//! The checker here shares no code with the search in `machine`: it
//! recomputes the premises every rule instance must have and compares.

use std::collections::HashMap;

use thiserror::Error;

use crate::fpc::Cert;
use crate::terms::{Eigen, Formula, Term};

use super::{Info, Rule, Sequent, Step, Trace};

/// A proof tree with every certificate erased.
///
/// Derivations can be as deep as the depth bound, so cloning, comparison and
/// dropping are written without recursion.
#[derive(Debug)]
pub struct Derivation {
    pub rule: Rule,
    pub conclusion: Sequent,
    pub info: Info,
    pub premises: Vec<Derivation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("trace is not a complete preorder tree")]
    Shape,
    #[error("bad {rule} step on `{conclusion}`: {reason}")]
    Rule {
        rule: Rule,
        conclusion: String,
        reason: String,
    },
}

/// Rebuilds the tree from a preorder trace, dropping certificates.
pub fn erase(trace: &Trace) -> Result<Derivation, ValidationError> {
    let mut open: Vec<(Derivation, usize)> = Vec::new();
    let mut root = None;
    for step in &trace.steps {
        if root.is_some() {
            return Err(ValidationError::Shape);
        }
        let mut node = Derivation {
            rule: step.rule,
            conclusion: step.conclusion.clone(),
            info: step.info.clone(),
            premises: Vec::with_capacity(step.premises),
        };
        if step.premises > 0 {
            open.push((node, step.premises));
            continue;
        }
        loop {
            match open.last_mut() {
                None => {
                    root = Some(node);
                    break;
                }
                Some((parent, missing)) => {
                    parent.premises.push(node);
                    *missing -= 1;
                    if *missing > 0 {
                        break;
                    }
                    node = open.pop().unwrap().0;
                }
            }
        }
    }
    match (root, open.is_empty()) {
        (Some(d), true) => Ok(d),
        _ => Err(ValidationError::Shape),
    }
}

impl Clone for Derivation {
    fn clone(&self) -> Self {
        let steps: Vec<Step> = self
            .nodes()
            .into_iter()
            .map(|d| Step {
                rule: d.rule,
                conclusion: d.conclusion.clone(),
                info: d.info.clone(),
                premises: d.premises.len(),
                cert: Cert::Stop,
            })
            .collect();
        erase(&Trace { steps }).expect("preorder of a tree")
    }
}

impl PartialEq for Derivation {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = (self.nodes(), other.nodes());
        a.len() == b.len()
            && a.iter().zip(&b).all(|(x, y)| {
                x.rule == y.rule
                    && x.conclusion == y.conclusion
                    && x.info == y.info
                    && x.premises.len() == y.premises.len()
            })
    }
}

impl Eq for Derivation {}

impl Drop for Derivation {
    fn drop(&mut self) {
        let mut stack = std::mem::take(&mut self.premises);
        while let Some(mut d) = stack.pop() {
            stack.append(&mut d.premises);
        }
    }
}

impl Derivation {
    /// Every node, preorder.
    pub fn nodes(&self) -> Vec<&Derivation> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(d) = stack.pop() {
            out.push(d);
            stack.extend(d.premises.iter().rev());
        }
        out
    }

    pub fn size(&self) -> usize {
        self.nodes().len()
    }

    /// Number of decide/release steps whose conclusion does not hold
    /// exactly one formula.
    pub fn phase_switch_violations(&self) -> usize {
        self.nodes()
            .into_iter()
            .filter(|d| d.rule.is_phase_switch() && d.conclusion.formula_count() != 1)
            .count()
    }

    pub fn count_rule(&self, rule: Rule) -> usize {
        self.nodes().into_iter().filter(|d| d.rule == rule).count()
    }
}

/// Checks every rule instance of `d`.
pub fn validate(d: &Derivation) -> Result<(), ValidationError> {
    for node in d.nodes() {
        let fail = |reason: String| ValidationError::Rule {
            rule: node.rule,
            conclusion: node.conclusion.to_string(),
            reason,
        };
        let expected = expected_premises(node).map_err(fail)?;
        let actual: Vec<&Sequent> = node.premises.iter().map(|p| &p.conclusion).collect();
        if expected.len() != actual.len() {
            return Err(fail(format!(
                "expected {} premises, found {}",
                expected.len(),
                actual.len()
            )));
        }
        for (i, (want, got)) in expected.iter().zip(actual).enumerate() {
            if want != got {
                return Err(fail(format!("premise {i} is `{got}`, expected `{want}`")));
            }
        }
    }
    Ok(())
}

type Check<T> = Result<T, String>;

fn need(cond: bool, msg: &str) -> Check<()> {
    if cond {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

fn seq(n: &[Formula], gamma: Vec<Formula>, delta: Vec<Formula>, p: &[Formula]) -> Sequent {
    Sequent::Async {
        n: n.to_vec(),
        gamma,
        delta,
        p: p.to_vec(),
    }
}

fn cons(f: Formula, rest: &[Formula]) -> Vec<Formula> {
    let mut v = vec![f];
    v.extend_from_slice(rest);
    v
}

fn snoc(rest: &[Formula], f: Formula) -> Vec<Formula> {
    let mut v = rest.to_vec();
    v.push(f);
    v
}

fn fresh_for(node: &Sequent, eigens: &[Eigen]) -> Check<()> {
    for (i, e) in eigens.iter().enumerate() {
        need(!node.mentions_eigen(e.id), "eigenvariable is not fresh")?;
        need(
            eigens[..i].iter().all(|x| x.id != e.id),
            "eigenvariables are not distinct",
        )?;
    }
    Ok(())
}

fn expected_premises(d: &Derivation) -> Check<Vec<Sequent>> {
    use Rule::*;
    let c = &d.conclusion;
    match c {
        Sequent::Async { n, gamma, delta, p } => {
            need(n.iter().all(Formula::is_negative), "left store holds a positive formula")?;
            need(p.iter().all(Formula::is_positive), "right store holds a negative formula")?;
            match d.rule {
                DecideL | DecideR => {
                    need(gamma.is_empty() && delta.is_empty(), "decide before the asynchronous phase ended")?;
                    need(n.len() + p.len() == 1, "decide needs exactly one stored formula")?;
                    Ok(vec![if d.rule == DecideL {
                        need(n.len() == 1, "nothing stored on the left")?;
                        Sequent::FocusL(n[0].clone())
                    } else {
                        need(p.len() == 1, "nothing stored on the right")?;
                        Sequent::FocusR(p[0].clone())
                    }])
                }
                EqL | TruePosL | FalsePosL | AndPosL | OrL | ExistsL | Ind | MuUnfoldL | StoreL => {
                    let (first, rest) = gamma.split_first().ok_or("no left formula")?;
                    left_async(d, n, first.clone().normalize_top(), rest, delta, p)
                }
                _ => {
                    need(gamma.is_empty(), "left formulas are processed first")?;
                    let (last, rest) = delta.split_last().ok_or("no right formula")?;
                    right_async(d, n, rest, last.clone().normalize_top(), p)
                }
            }
        }
        Sequent::FocusR(f) => focus_right(d, f.clone().normalize_top()),
        Sequent::FocusL(f) => focus_left(d, f.clone().normalize_top()),
    }
}

fn left_async(
    d: &Derivation,
    n: &[Formula],
    f: Formula,
    rest: &[Formula],
    delta: &[Formula],
    p: &[Formula],
) -> Check<Vec<Sequent>> {
    use Formula as F;
    let mk = |gamma: Vec<Formula>| seq(n, gamma, delta.to_vec(), p);
    match (d.rule, &f) {
        (Rule::StoreL, f) if f.is_negative() => {
            Ok(vec![seq(&snoc(n, f.clone()), rest.to_vec(), delta.to_vec(), p)])
        }
        (Rule::EqL, F::Eq(s, t)) => equality(d, s, t, mk(rest.to_vec())),
        (Rule::TruePosL, F::TruePos) => Ok(vec![mk(rest.to_vec())]),
        (Rule::FalsePosL, F::FalsePos) => Ok(vec![]),
        (Rule::AndPosL, F::AndPos(a, b)) => {
            Ok(vec![mk(cons((**a).clone(), &cons((**b).clone(), rest)))])
        }
        (Rule::OrL, F::Or(a, b)) => Ok(vec![
            mk(cons((**a).clone(), rest)),
            mk(cons((**b).clone(), rest)),
        ]),
        (Rule::ExistsL, F::Exists(body)) => {
            let Info::Eigen(y) = &d.info else {
                return Err("missing eigenvariable".into());
            };
            fresh_for(&d.conclusion, &[*y])?;
            Ok(vec![mk(cons(Formula::instantiate(body, &Term::Eigen(*y)), rest))])
        }
        (Rule::Ind, F::Mu(_, args)) => {
            let Info::Invariant(s, ys) = &d.info else {
                return Err("missing invariant".into());
            };
            need(ys.len() == args.len(), "wrong number of eigenvariables")?;
            fresh_for(&d.conclusion, ys)?;
            let terms: Vec<Term> = ys.iter().map(|y| Term::Eigen(*y)).collect();
            let err = |e: crate::terms::FormulaError| e.to_string();
            Ok(vec![
                seq(&[], vec![f.body_with(s, &terms).map_err(err)?], vec![s.apply(&terms).map_err(err)?], &[]),
                mk(cons(s.apply(args).map_err(err)?, rest)),
            ])
        }
        (Rule::MuUnfoldL, F::Mu(..)) => Ok(vec![mk(cons(f.unfold().map_err(|e| e.to_string())?, rest))]),
        _ => Err(format!("rule does not apply to left formula `{f}`")),
    }
}

fn right_async(
    d: &Derivation,
    n: &[Formula],
    rest: &[Formula],
    f: Formula,
    p: &[Formula],
) -> Check<Vec<Sequent>> {
    use Formula as F;
    let mk = |delta: Vec<Formula>| seq(n, Vec::new(), delta, p);
    match (d.rule, &f) {
        (Rule::StoreR, f) if f.is_positive() => {
            Ok(vec![seq(n, Vec::new(), rest.to_vec(), &snoc(p, f.clone()))])
        }
        (Rule::NeqR, F::Neq(s, t)) => equality(d, s, t, mk(rest.to_vec())),
        (Rule::TrueNegR, F::TrueNeg) => Ok(vec![]),
        (Rule::FalseNegR, F::FalseNeg) => Ok(vec![mk(rest.to_vec())]),
        (Rule::ImpR, F::Imp(a, b)) => Ok(vec![seq(
            n,
            vec![(**a).clone()],
            snoc(rest, (**b).clone()),
            p,
        )]),
        (Rule::AndNegR, F::AndNeg(a, b)) => Ok(vec![
            mk(snoc(rest, (**a).clone())),
            mk(snoc(rest, (**b).clone())),
        ]),
        (Rule::ForallR, F::Forall(body)) => {
            let Info::Eigen(y) = &d.info else {
                return Err("missing eigenvariable".into());
            };
            fresh_for(&d.conclusion, &[*y])?;
            Ok(vec![mk(snoc(rest, Formula::instantiate(body, &Term::Eigen(*y))))])
        }
        (Rule::CoInd, F::Nu(_, args)) => {
            let Info::Invariant(s, ys) = &d.info else {
                return Err("missing invariant".into());
            };
            need(ys.len() == args.len(), "wrong number of eigenvariables")?;
            fresh_for(&d.conclusion, ys)?;
            let terms: Vec<Term> = ys.iter().map(|y| Term::Eigen(*y)).collect();
            let err = |e: crate::terms::FormulaError| e.to_string();
            Ok(vec![
                seq(&[], vec![s.apply(&terms).map_err(err)?], vec![f.body_with(s, &terms).map_err(err)?], &[]),
                mk(snoc(rest, s.apply(args).map_err(err)?)),
            ])
        }
        (Rule::NuUnfoldR, F::Nu(..)) => Ok(vec![mk(snoc(rest, f.unfold().map_err(|e| e.to_string())?))]),
        _ => Err(format!("rule does not apply to right formula `{f}`")),
    }
}

fn focus_right(d: &Derivation, f: Formula) -> Check<Vec<Sequent>> {
    use Formula as F;
    match (d.rule, &f) {
        (Rule::ReleaseR, f) if f.is_negative() => Ok(vec![Sequent::goal(f.clone())]),
        (Rule::EqR, F::Eq(s, t)) => need(s == t, "terms differ").map(|_| vec![]),
        (Rule::TruePosR, F::TruePos) => Ok(vec![]),
        (Rule::AndPosR, F::AndPos(a, b)) => Ok(vec![
            Sequent::FocusR((**a).clone()),
            Sequent::FocusR((**b).clone()),
        ]),
        (Rule::OrR, F::Or(a, b)) => match d.info {
            Info::Branch(1) => Ok(vec![Sequent::FocusR((**a).clone())]),
            Info::Branch(2) => Ok(vec![Sequent::FocusR((**b).clone())]),
            _ => Err("missing branch".into()),
        },
        (Rule::ExistsR, F::Exists(body)) => match &d.info {
            Info::Witness(t) if t.is_closed() => {
                Ok(vec![Sequent::FocusR(Formula::instantiate(body, t))])
            }
            _ => Err("missing witness".into()),
        },
        (Rule::MuUnfoldR, F::Mu(..)) => {
            Ok(vec![Sequent::FocusR(f.unfold().map_err(|e| e.to_string())?)])
        }
        _ => Err(format!("rule does not apply to right focus `{f}`")),
    }
}

fn focus_left(d: &Derivation, f: Formula) -> Check<Vec<Sequent>> {
    use Formula as F;
    match (d.rule, &f) {
        (Rule::ReleaseL, f) if f.is_positive() => {
            Ok(vec![seq(&[], vec![f.clone()], Vec::new(), &[])])
        }
        (Rule::NeqL, F::Neq(s, t)) => need(s == t, "terms differ").map(|_| vec![]),
        (Rule::FalseNegL, F::FalseNeg) => Ok(vec![]),
        (Rule::ImpL, F::Imp(a, b)) => Ok(vec![
            Sequent::FocusR((**a).clone()),
            Sequent::FocusL((**b).clone()),
        ]),
        (Rule::AndNegL, F::AndNeg(a, b)) => match d.info {
            Info::Branch(1) => Ok(vec![Sequent::FocusL((**a).clone())]),
            Info::Branch(2) => Ok(vec![Sequent::FocusL((**b).clone())]),
            _ => Err("missing branch".into()),
        },
        (Rule::ForallL, F::Forall(body)) => match &d.info {
            Info::Witness(t) if t.is_closed() => {
                Ok(vec![Sequent::FocusL(Formula::instantiate(body, t))])
            }
            _ => Err("missing witness".into()),
        },
        (Rule::NuUnfoldL, F::Nu(..)) => {
            Ok(vec![Sequent::FocusL(f.unfold().map_err(|e| e.to_string())?)])
        }
        _ => Err(format!("rule does not apply to left focus `{f}`")),
    }
}

/// `=`-left / `≠`-right: either the terms have no unifier (no premise), or
/// the recorded substitution is a most general unifier and the premise is
/// the rest of the sequent under it.
fn equality(d: &Derivation, s: &Term, t: &Term, rest: Sequent) -> Check<Vec<Sequent>> {
    let sigma = robinson(s, t);
    match &d.info {
        Info::Clash => need(sigma.is_none(), "terms are unifiable").map(|_| vec![]),
        Info::Theta(recorded) => {
            let sigma = sigma.ok_or("terms are not unifiable")?;
            let theta: HashMap<u32, Term> =
                recorded.iter().map(|(e, t)| (e.id, t.clone())).collect();
            need(subst(&theta, s) == subst(&theta, t), "substitution is not a unifier")?;
            let mut eigens: HashMap<u32, Eigen> = recorded.iter().map(|(e, _)| (e.id, *e)).collect();
            for x in [s, t] {
                x.for_each_eigen(&mut |e| {
                    eigens.insert(e.id, e);
                });
            }
            for e in eigens.into_values() {
                let e = Term::Eigen(e);
                let via = |m: &HashMap<u32, Term>| subst(m, &e);
                need(
                    subst(&theta, &via(&sigma)) == via(&theta)
                        && subst(&sigma, &via(&theta)) == via(&sigma),
                    "substitution is not most general",
                )?;
            }
            Ok(vec![rest.map_terms(&|leaf| match leaf {
                Term::Eigen(e) => theta.get(&e.id).cloned(),
                _ => None,
            })])
        }
        _ => Err("missing unification outcome".into()),
    }
}

fn subst(m: &HashMap<u32, Term>, t: &Term) -> Term {
    match t {
        Term::Eigen(e) => match m.get(&e.id) {
            Some(u) => subst(m, u),
            None => t.clone(),
        },
        Term::Const(f, args) => Term::Const(f.clone(), args.iter().map(|a| subst(m, a)).collect()),
        other => other.clone(),
    }
}

// Textbook Robinson unification with eigenvariables as the only unknowns;
// the result is kept triangular and read through `subst`.
fn robinson(s: &Term, t: &Term) -> Option<HashMap<u32, Term>> {
    let mut m = HashMap::new();
    let mut work = vec![(s.clone(), t.clone())];
    while let Some((a, b)) = work.pop() {
        let (a, b) = (subst(&m, &a), subst(&m, &b));
        if a == b {
            continue;
        }
        match (a, b) {
            (Term::Eigen(e), u) | (u, Term::Eigen(e)) => {
                if u.mentions_eigen(e.id) {
                    return None;
                }
                m.insert(e.id, u);
            }
            (Term::Const(f, xs), Term::Const(g, ys)) => {
                if f != g || xs.len() != ys.len() {
                    return None;
                }
                work.extend(xs.into_iter().zip(ys));
            }
            _ => return None,
        }
    }
    Some(m)
}
