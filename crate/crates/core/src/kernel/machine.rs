//! Depth-first proof reconstruction with chronological backtracking.

use std::rc::Rc;

use crate::fpc::{
    Cert, Clerk, ClerkAbs, ClerkSplit, Expert, ExpertChoice, ExpertSplit, ExpertWitness, FpcTable,
    Witness,
};
use crate::terms::{Eigen, Formula, Side, Term};
use crate::unify::{unify_eigens, BindingStore, Checkpoint, EigenUnification, Unification};

use super::{CheckConfig, CheckError, Info, Rule, Sequent, Step};

#[derive(Clone, Debug)]
struct Goal {
    seq: Sequent,
    cert: Cert,
    level: u32,
    depth: u32,
}

struct Node {
    goal: Goal,
    next: Goals,
}

type Goals = Option<Rc<Node>>;

struct Alt {
    step: Step,
    premises: Vec<Goal>,
}

struct ChoicePoint {
    mark: Checkpoint,
    trace_len: usize,
    rest: Goals,
    alts: std::vec::IntoIter<Alt>,
}

pub(super) enum Outcome {
    Proved(Vec<Step>),
    Failed { depth_hit: bool, steps: u64 },
}

pub(super) struct Machine<'a> {
    table: &'a dyn FpcTable,
    config: &'a CheckConfig,
    store: BindingStore,
    trace: Vec<Step>,
    choices: Vec<ChoicePoint>,
    level_counter: u32,
    steps: u64,
    depth_hit: bool,
}

fn push_all(premises: Vec<Goal>, mut goals: Goals) -> Goals {
    for goal in premises.into_iter().rev() {
        goals = Some(Rc::new(Node { goal, next: goals }));
    }
    goals
}

fn with(front: impl IntoIterator<Item = Formula>, rest: &[Formula]) -> Vec<Formula> {
    front.into_iter().chain(rest.iter().cloned()).collect()
}

fn async_seq(n: &[Formula], gamma: Vec<Formula>, delta: Vec<Formula>, p: &[Formula]) -> Sequent {
    Sequent::Async {
        n: n.to_vec(),
        gamma,
        delta,
        p: p.to_vec(),
    }
}

impl<'a> Machine<'a> {
    pub(super) fn new(table: &'a dyn FpcTable, config: &'a CheckConfig) -> Machine<'a> {
        Machine {
            table,
            config,
            store: BindingStore::new(),
            trace: Vec::new(),
            choices: Vec::new(),
            level_counter: 0,
            steps: 0,
            depth_hit: false,
        }
    }

    pub(super) fn run(mut self, seq: Sequent, cert: Cert) -> Result<Outcome, CheckError> {
        let root = Goal {
            seq,
            cert,
            level: 0,
            depth: 0,
        };
        let mut goals = push_all(vec![root], None);
        loop {
            let Some(node) = goals.clone() else {
                let steps = self.trace.iter().map(|s| s.resolve(&self.store)).collect();
                return Ok(Outcome::Proved(steps));
            };
            self.steps += 1;
            if self.steps > self.config.step_budget {
                return Err(CheckError::ResourceExhausted {
                    steps: self.steps - 1,
                });
            }
            let alts = if node.goal.depth >= self.config.depth_bound {
                self.depth_hit = true;
                Vec::new()
            } else {
                self.expand(&node.goal)?
            };
            let mut alts = alts.into_iter();
            goals = match alts.next() {
                Some(first) => {
                    if alts.len() > 0 {
                        self.choices.push(ChoicePoint {
                            mark: self.store.checkpoint(),
                            trace_len: self.trace.len(),
                            rest: node.next.clone(),
                            alts,
                        });
                    }
                    self.apply(first, node.next.clone())
                }
                None => match self.backtrack() {
                    Some(g) => g,
                    None => {
                        return Ok(Outcome::Failed {
                            depth_hit: self.depth_hit,
                            steps: self.steps,
                        })
                    }
                },
            };
        }
    }

    fn apply(&mut self, alt: Alt, rest: Goals) -> Goals {
        self.trace.push(alt.step);
        push_all(alt.premises, rest)
    }

    fn backtrack(&mut self) -> Option<Goals> {
        while let Some(cp) = self.choices.last_mut() {
            let next = cp.alts.next();
            let (mark, trace_len, rest, last) =
                (cp.mark, cp.trace_len, cp.rest.clone(), cp.alts.len() == 0);
            self.store.rollback(mark).expect("live checkpoint");
            self.trace.truncate(trace_len);
            if last {
                self.store.release(mark).expect("live checkpoint");
                self.choices.pop();
            }
            if let Some(alt) = next {
                return Some(self.apply(alt, rest));
            }
        }
        None
    }

    fn fresh_level(&mut self) -> u32 {
        self.level_counter += 1;
        self.level_counter
    }

    fn step(g: &Goal, rule: Rule, info: Info, premises: usize) -> Step {
        Step {
            rule,
            conclusion: g.seq.clone(),
            cert: g.cert.clone(),
            premises,
            info,
        }
    }

    fn alt(g: &Goal, rule: Rule, info: Info, premises: Vec<(Sequent, Cert)>) -> Alt {
        Self::alt_at(g, rule, info, g.level, premises)
    }

    fn alt_at(g: &Goal, rule: Rule, info: Info, level: u32, premises: Vec<(Sequent, Cert)>) -> Alt {
        Alt {
            step: Self::step(g, rule, info, premises.len()),
            premises: premises
                .into_iter()
                .map(|(seq, cert)| Goal {
                    seq,
                    cert,
                    level,
                    depth: g.depth + 1,
                })
                .collect(),
        }
    }

    fn closing(g: &Goal, rule: Rule) -> Vec<Alt> {
        vec![Self::alt(g, rule, Info::None, Vec::new())]
    }

    fn expand(&mut self, g: &Goal) -> Result<Vec<Alt>, CheckError> {
        match &g.seq {
            Sequent::Async { n, gamma, delta, p } => {
                if let Some((first, rest)) = gamma.split_first() {
                    let f = first.clone().normalize_top();
                    self.left_async(g, n, f, rest, delta, p)
                } else if let Some((last, rest)) = delta.split_last() {
                    let f = last.clone().normalize_top();
                    self.right_async(g, n, rest, f, p)
                } else {
                    self.decide(g, n, p)
                }
            }
            Sequent::FocusL(f) => self.focus_left(g, f.clone().normalize_top()),
            Sequent::FocusR(f) => self.focus_right(g, f.clone().normalize_top()),
        }
    }

    // ------------------------------------------------------------ async left

    fn left_async(
        &mut self,
        g: &Goal,
        n: &[Formula],
        f: Formula,
        rest: &[Formula],
        delta: &[Formula],
        p: &[Formula],
    ) -> Result<Vec<Alt>, CheckError> {
        let table = self.table;
        let premise = |gamma: Vec<Formula>| async_seq(n, gamma, delta.to_vec(), p);
        if f.is_negative() {
            let mut stored = n.to_vec();
            stored.push(f);
            let seq = async_seq(&stored, rest.to_vec(), delta.to_vec(), p);
            return Ok(table
                .clerk(Clerk::StoreL, &g.cert)
                .into_iter()
                .map(|c| Self::alt(g, Rule::StoreL, Info::None, vec![(seq.clone(), c)]))
                .collect());
        }
        Ok(match &f {
            Formula::Eq(s, t) => {
                self.eigen_equality(g, Rule::EqL, Clerk::EqL, s, t, premise(rest.to_vec()))
            }
            Formula::TruePos => table
                .clerk(Clerk::TruePosL, &g.cert)
                .into_iter()
                .map(|c| Self::alt(g, Rule::TruePosL, Info::None, vec![(premise(rest.to_vec()), c)]))
                .collect(),
            Formula::FalsePos => Self::closing(g, Rule::FalsePosL),
            Formula::AndPos(a, b) => {
                let seq = premise(with([(**a).clone(), (**b).clone()], rest));
                table
                    .clerk(Clerk::AndPosL, &g.cert)
                    .into_iter()
                    .map(|c| Self::alt(g, Rule::AndPosL, Info::None, vec![(seq.clone(), c)]))
                    .collect()
            }
            Formula::Or(a, b) => {
                let left = premise(with([(**a).clone()], rest));
                let right = premise(with([(**b).clone()], rest));
                table
                    .clerk_split(ClerkSplit::OrL, &g.cert)
                    .into_iter()
                    .map(|(c1, c2)| {
                        Self::alt(g, Rule::OrL, Info::None, vec![(left.clone(), c1), (right.clone(), c2)])
                    })
                    .collect()
            }
            Formula::Exists(body) => {
                let abs = table.clerk_abs(ClerkAbs::ExistsL, &g.cert);
                if abs.is_empty() {
                    return Ok(Vec::new());
                }
                let level = self.fresh_level();
                let y = self.store.fresh_eigen(level);
                let seq = premise(with([Formula::instantiate(body, &Term::Eigen(y))], rest));
                abs.into_iter()
                    .map(|a| {
                        let c = a.apply(&[Term::Eigen(y)]);
                        Self::alt_at(g, Rule::ExistsL, Info::Eigen(y), level, vec![(seq.clone(), c)])
                    })
                    .collect()
            }
            Formula::Mu(_, args) => {
                let mut alts = Vec::new();
                for ind in table.ind(&g.cert, &f) {
                    let s = &ind.invariant;
                    if s.arity() as usize != args.len() || !s.is_purely_negative() {
                        continue;
                    }
                    self.check_restriction(n, p, rest, delta, "induction")?;
                    let (level, ys) = self.fresh_eigens(args.len());
                    let terms: Vec<Term> = ys.iter().map(|y| Term::Eigen(*y)).collect();
                    let closure = async_seq(
                        &[],
                        vec![f.body_with(s, &terms).map_err(ill_formed)?],
                        vec![s.apply(&terms).map_err(ill_formed)?],
                        &[],
                    );
                    let replaced = premise(with([s.apply(args).map_err(ill_formed)?], rest));
                    let mut alt = Self::alt(
                        g,
                        Rule::Ind,
                        Info::Invariant(s.clone(), ys.clone()),
                        vec![(closure, ind.closure.apply(&terms)), (replaced, ind.cont)],
                    );
                    alt.premises[0].level = level;
                    alts.push(alt);
                }
                let unfolded = premise(with([f.unfold().map_err(ill_formed)?], rest));
                for c in table.clerk(Clerk::MuUnfoldL, &g.cert) {
                    alts.push(Self::alt(g, Rule::MuUnfoldL, Info::None, vec![(unfolded.clone(), c)]));
                }
                alts
            }
            other => return Err(ill_formed_formula(other)),
        })
    }

    // ----------------------------------------------------------- async right

    fn right_async(
        &mut self,
        g: &Goal,
        n: &[Formula],
        rest: &[Formula],
        f: Formula,
        p: &[Formula],
    ) -> Result<Vec<Alt>, CheckError> {
        let table = self.table;
        let premise = |last: Option<Formula>| {
            let mut delta = rest.to_vec();
            delta.extend(last);
            async_seq(n, Vec::new(), delta, p)
        };
        if f.is_positive() {
            let mut stored = p.to_vec();
            stored.push(f);
            let seq = async_seq(n, Vec::new(), rest.to_vec(), &stored);
            return Ok(table
                .clerk(Clerk::StoreR, &g.cert)
                .into_iter()
                .map(|c| Self::alt(g, Rule::StoreR, Info::None, vec![(seq.clone(), c)]))
                .collect());
        }
        Ok(match &f {
            Formula::Neq(s, t) => self.eigen_equality(g, Rule::NeqR, Clerk::NeqR, s, t, premise(None)),
            Formula::TrueNeg => Self::closing(g, Rule::TrueNegR),
            Formula::FalseNeg => table
                .clerk(Clerk::FalseNegR, &g.cert)
                .into_iter()
                .map(|c| Self::alt(g, Rule::FalseNegR, Info::None, vec![(premise(None), c)]))
                .collect(),
            Formula::Imp(a, b) => {
                let mut delta = rest.to_vec();
                delta.push((**b).clone());
                let seq = async_seq(n, vec![(**a).clone()], delta, p);
                table
                    .clerk(Clerk::ImpR, &g.cert)
                    .into_iter()
                    .map(|c| Self::alt(g, Rule::ImpR, Info::None, vec![(seq.clone(), c)]))
                    .collect()
            }
            Formula::AndNeg(a, b) => {
                let left = premise(Some((**a).clone()));
                let right = premise(Some((**b).clone()));
                table
                    .clerk_split(ClerkSplit::AndNegR, &g.cert)
                    .into_iter()
                    .map(|(c1, c2)| {
                        Self::alt(g, Rule::AndNegR, Info::None, vec![(left.clone(), c1), (right.clone(), c2)])
                    })
                    .collect()
            }
            Formula::Forall(body) => {
                let abs = table.clerk_abs(ClerkAbs::ForallR, &g.cert);
                if abs.is_empty() {
                    return Ok(Vec::new());
                }
                let level = self.fresh_level();
                let y = self.store.fresh_eigen(level);
                let seq = premise(Some(Formula::instantiate(body, &Term::Eigen(y))));
                abs.into_iter()
                    .map(|a| {
                        let c = a.apply(&[Term::Eigen(y)]);
                        Self::alt_at(g, Rule::ForallR, Info::Eigen(y), level, vec![(seq.clone(), c)])
                    })
                    .collect()
            }
            Formula::Nu(_, args) => {
                let mut alts = Vec::new();
                for ind in table.coind(&g.cert, &f) {
                    let s = &ind.invariant;
                    if s.arity() as usize != args.len() || !s.is_purely_positive() {
                        continue;
                    }
                    self.check_restriction(n, p, &[], rest, "coinduction")?;
                    let (level, ys) = self.fresh_eigens(args.len());
                    let terms: Vec<Term> = ys.iter().map(|y| Term::Eigen(*y)).collect();
                    let closure = async_seq(
                        &[],
                        vec![s.apply(&terms).map_err(ill_formed)?],
                        vec![f.body_with(s, &terms).map_err(ill_formed)?],
                        &[],
                    );
                    let replaced = premise(Some(s.apply(args).map_err(ill_formed)?));
                    let mut alt = Self::alt(
                        g,
                        Rule::CoInd,
                        Info::Invariant(s.clone(), ys.clone()),
                        vec![(closure, ind.closure.apply(&terms)), (replaced, ind.cont)],
                    );
                    alt.premises[0].level = level;
                    alts.push(alt);
                }
                let unfolded = premise(Some(f.unfold().map_err(ill_formed)?));
                for c in table.clerk(Clerk::NuUnfoldR, &g.cert) {
                    alts.push(Self::alt(g, Rule::NuUnfoldR, Info::None, vec![(unfolded.clone(), c)]));
                }
                alts
            }
            other => return Err(ill_formed_formula(other)),
        })
    }

    fn fresh_eigens(&mut self, k: usize) -> (u32, Vec<Eigen>) {
        let level = self.fresh_level();
        let ys = (0..k).map(|_| self.store.fresh_eigen(level)).collect();
        (level, ys)
    }

    /// (Co)induction may only fire when the rest of the sequent cannot
    /// trigger a synchronous rule.
    fn check_restriction(
        &self,
        n: &[Formula],
        p: &[Formula],
        gamma: &[Formula],
        delta: &[Formula],
        what: &str,
    ) -> Result<(), CheckError> {
        if !self.config.enforce_restriction {
            return Ok(());
        }
        let ok = n.is_empty()
            && p.is_empty()
            && gamma.iter().all(Formula::is_purely_positive)
            && delta.iter().all(Formula::is_purely_negative);
        if ok {
            Ok(())
        } else {
            Err(CheckError::InvariantViolation(format!(
                "{what} applied in a context with synchronous formulas"
            )))
        }
    }

    /// `=`-left and `≠`-right: eigenvariables are instantiated by the mgu.
    fn eigen_equality(
        &mut self,
        g: &Goal,
        rule: Rule,
        clerk: Clerk,
        s: &Term,
        t: &Term,
        rest: Sequent,
    ) -> Vec<Alt> {
        let certs = self.table.clerk(clerk, &g.cert);
        if certs.is_empty() {
            return Vec::new();
        }
        match unify_eigens(s, t, &self.store) {
            EigenUnification::Clash => vec![Self::alt(g, rule, Info::Clash, Vec::new())],
            EigenUnification::Stuck => Vec::new(),
            EigenUnification::Unified(theta) => {
                let resolved = rest.resolve(&self.store);
                if let Some(min) = theta.iter().map(|(e, _)| e.level).min() {
                    // a pending logic variable could still be bound to one of
                    // the substituted eigenvariables
                    let mut blocked = false;
                    resolved.for_each_var(&mut |v| blocked |= v.level >= min);
                    if blocked {
                        return Vec::new();
                    }
                }
                let seq = resolved.apply_eigens(&theta);
                certs
                    .into_iter()
                    .map(|c| Self::alt(g, rule, Info::Theta(theta.clone()), vec![(seq.clone(), c)]))
                    .collect()
            }
        }
    }

    // --------------------------------------------------------- phase switch

    fn decide(&mut self, g: &Goal, n: &[Formula], p: &[Formula]) -> Result<Vec<Alt>, CheckError> {
        match n.len() + p.len() {
            0 => return Ok(Vec::new()),
            1 => {}
            // Only reachable when (co)induction fired outside the restricted
            // fragment; no focused sequent holds more than one formula.
            _ if !self.config.enforce_restriction => return Ok(Vec::new()),
            k => {
                return Err(CheckError::InvariantViolation(format!(
                    "decide with {k} stored formulas in {}",
                    g.seq.resolve(&self.store)
                )))
            }
        }
        let (side, f, rule) = match n.first() {
            Some(f) => (Side::Left, f, Rule::DecideL),
            None => (Side::Right, &p[0], Rule::DecideR),
        };
        let seq = match side {
            Side::Left => Sequent::FocusL(f.clone()),
            Side::Right => Sequent::FocusR(f.clone()),
        };
        Ok(self
            .table
            .decide(side, &g.cert, f)
            .into_iter()
            .map(|c| Self::alt(g, rule, Info::None, vec![(seq.clone(), c)]))
            .collect())
    }

    // ---------------------------------------------------------- focus right

    fn focus_right(&mut self, g: &Goal, f: Formula) -> Result<Vec<Alt>, CheckError> {
        let table = self.table;
        if f.is_negative() {
            let seq = Sequent::goal(f);
            return Ok(table
                .expert(Expert::ReleaseR, &g.cert)
                .into_iter()
                .map(|c| Self::alt(g, Rule::ReleaseR, Info::None, vec![(seq.clone(), c)]))
                .collect());
        }
        let focus = |x: &Formula| Sequent::FocusR(x.clone());
        Ok(match &f {
            Formula::Eq(s, t) => match self.store.unify(s, t) {
                Unification::Unified => Self::closing(g, Rule::EqR),
                Unification::Clash => Vec::new(),
            },
            Formula::TruePos => Self::closing(g, Rule::TruePosR),
            Formula::FalsePos => Vec::new(),
            Formula::AndPos(a, b) => table
                .expert_split(ExpertSplit::AndPosR, &g.cert)
                .into_iter()
                .map(|(c1, c2)| {
                    Self::alt(g, Rule::AndPosR, Info::None, vec![(focus(a), c1), (focus(b), c2)])
                })
                .collect(),
            Formula::Or(a, b) => table
                .expert_choice(ExpertChoice::OrR, &g.cert)
                .into_iter()
                .filter_map(|(c, i)| {
                    let branch = match i {
                        1 => a,
                        2 => b,
                        _ => return None,
                    };
                    Some(Self::alt(g, Rule::OrR, Info::Branch(i), vec![(focus(branch), c)]))
                })
                .collect(),
            Formula::Exists(body) => {
                let ws = table.expert_witness(ExpertWitness::ExistsR, &g.cert);
                self.witness_alts(g, Rule::ExistsR, body, ws, Sequent::FocusR)
            }
            Formula::Mu(..) => {
                let seq = focus(&f.unfold().map_err(ill_formed)?);
                table
                    .expert(Expert::MuUnfoldR, &g.cert)
                    .into_iter()
                    .map(|c| Self::alt(g, Rule::MuUnfoldR, Info::None, vec![(seq.clone(), c)]))
                    .collect()
            }
            other => return Err(ill_formed_formula(other)),
        })
    }

    fn witness_alts(
        &mut self,
        g: &Goal,
        rule: Rule,
        body: &Formula,
        ws: Vec<(Cert, Witness)>,
        shape: fn(Formula) -> Sequent,
    ) -> Vec<Alt> {
        let mut alts = Vec::new();
        for (c, w) in ws {
            let t = match w {
                Witness::Term(t) if t.is_closed() => t,
                Witness::Term(_) => continue,
                Witness::Fresh => Term::Var(self.store.fresh_var(g.level)),
            };
            let seq = shape(Formula::instantiate(body, &t));
            alts.push(Self::alt(g, rule, Info::Witness(t), vec![(seq, c)]));
        }
        alts
    }

    // ----------------------------------------------------------- focus left

    fn focus_left(&mut self, g: &Goal, f: Formula) -> Result<Vec<Alt>, CheckError> {
        let table = self.table;
        if f.is_positive() {
            let seq = async_seq(&[], vec![f], Vec::new(), &[]);
            return Ok(table
                .expert(Expert::ReleaseL, &g.cert)
                .into_iter()
                .map(|c| Self::alt(g, Rule::ReleaseL, Info::None, vec![(seq.clone(), c)]))
                .collect());
        }
        Ok(match &f {
            Formula::Neq(s, t) => match self.store.unify(s, t) {
                Unification::Unified => Self::closing(g, Rule::NeqL),
                Unification::Clash => Vec::new(),
            },
            Formula::FalseNeg => Self::closing(g, Rule::FalseNegL),
            Formula::TrueNeg => Vec::new(),
            Formula::Imp(a, b) => table
                .expert_split(ExpertSplit::ImpL, &g.cert)
                .into_iter()
                .map(|(c1, c2)| {
                    Self::alt(
                        g,
                        Rule::ImpL,
                        Info::None,
                        vec![
                            (Sequent::FocusR((**a).clone()), c1),
                            (Sequent::FocusL((**b).clone()), c2),
                        ],
                    )
                })
                .collect(),
            Formula::AndNeg(a, b) => table
                .expert_choice(ExpertChoice::AndNegL, &g.cert)
                .into_iter()
                .filter_map(|(c, i)| {
                    let branch = match i {
                        1 => a,
                        2 => b,
                        _ => return None,
                    };
                    let seq = Sequent::FocusL((**branch).clone());
                    Some(Self::alt(g, Rule::AndNegL, Info::Branch(i), vec![(seq, c)]))
                })
                .collect(),
            Formula::Forall(body) => {
                let ws = table.expert_witness(ExpertWitness::ForallL, &g.cert);
                self.witness_alts(g, Rule::ForallL, body, ws, Sequent::FocusL)
            }
            Formula::Nu(..) => {
                let seq = Sequent::FocusL(f.unfold().map_err(ill_formed)?);
                table
                    .expert(Expert::NuUnfoldL, &g.cert)
                    .into_iter()
                    .map(|c| Self::alt(g, Rule::NuUnfoldL, Info::None, vec![(seq.clone(), c)]))
                    .collect()
            }
            other => return Err(ill_formed_formula(other)),
        })
    }
}

fn ill_formed(e: crate::terms::FormulaError) -> CheckError {
    CheckError::IllFormed(e.to_string())
}

fn ill_formed_formula(f: &Formula) -> CheckError {
    CheckError::IllFormed(format!("cannot decompose `{f}`"))
}
