//! Graphs and labeled transition systems as fixed-point definitions, and the
//! goal formulas for each kind of claim.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::fpc::{self, CertMode, FpcTable};
use crate::terms::{parse_formula_in, FixBody, FixEnv, FixKind, Formula, Symbol, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error("`{0}` claims need a {1}")]
    WrongProblem(ClaimKind, &'static str),
    #[error("bad claim `{0}`")]
    BadClaim(String),
}

/// A directed graph. Node order is declaration order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    pub nodes: Vec<Symbol>,
    pub edges: Vec<(Symbol, Symbol)>,
}

/// A labeled transition system.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Lts {
    pub states: Vec<Symbol>,
    pub labels: Vec<Symbol>,
    pub trans: Vec<(Symbol, Symbol, Symbol)>,
}

fn add(list: &mut Vec<Symbol>, s: &str) -> Symbol {
    match list.iter().find(|x| &***x == s) {
        Some(x) => x.clone(),
        None => {
            let sym = Symbol::from(s);
            list.push(sym.clone());
            sym
        }
    }
}

impl Graph {
    pub fn new() -> Graph {
        Graph::default()
    }

    pub fn add_node(&mut self, n: &str) {
        add(&mut self.nodes, n);
    }

    /// Adds an edge, declaring its endpoints if needed.
    pub fn add_edge(&mut self, a: &str, b: &str) {
        let a = add(&mut self.nodes, a);
        let b = add(&mut self.nodes, b);
        if !self.edges.contains(&(a.clone(), b.clone())) {
            self.edges.push((a, b));
        }
    }

    pub fn from_edges(nodes: &[&str], edges: &[(&str, &str)]) -> Graph {
        let mut g = Graph::new();
        nodes.iter().for_each(|n| g.add_node(n));
        edges.iter().for_each(|(a, b)| g.add_edge(a, b));
        g
    }

    pub fn has_node(&self, n: &str) -> bool {
        self.nodes.iter().any(|x| &**x == n)
    }

    pub fn successors<'a>(&'a self, n: &'a str) -> impl Iterator<Item = &'a Symbol> + 'a {
        self.edges.iter().filter(move |(a, _)| &**a == n).map(|(_, b)| b)
    }
}

impl Lts {
    pub fn new() -> Lts {
        Lts::default()
    }

    pub fn add_state(&mut self, s: &str) {
        add(&mut self.states, s);
    }

    pub fn add_trans(&mut self, p: &str, a: &str, q: &str) {
        let p = add(&mut self.states, p);
        let a = add(&mut self.labels, a);
        let q = add(&mut self.states, q);
        if !self.trans.contains(&(p.clone(), a.clone(), q.clone())) {
            self.trans.push((p, a, q));
        }
    }

    pub fn from_trans(states: &[&str], trans: &[(&str, &str, &str)]) -> Lts {
        let mut l = Lts::new();
        states.iter().for_each(|s| l.add_state(s));
        trans.iter().for_each(|(p, a, q)| l.add_trans(p, a, q));
        l
    }

    pub fn has_state(&self, s: &str) -> bool {
        self.states.iter().any(|x| &**x == s)
    }

    /// Successors of `p` under `a`, in declaration order.
    pub fn successors<'a>(&'a self, p: &'a str, a: &'a str) -> impl Iterator<Item = &'a Symbol> + 'a {
        self.trans
            .iter()
            .filter(move |(x, l, _)| &**x == p && &**l == a)
            .map(|(_, _, q)| q)
    }
}

fn constant(s: &Symbol) -> Term {
    Term::Const(s.clone(), Vec::new())
}

fn eqs(pairs: Vec<(Term, &Symbol)>) -> Formula {
    Formula::conjunction_pos(
        pairs
            .into_iter()
            .map(|(var, c)| Formula::Eq(var, constant(c)))
            .collect(),
    )
}

/// `step`: one disjunct `x = u ∧⁺ y = v` per edge, in edge order.
pub fn encode_step(g: &Graph) -> Arc<FixBody> {
    let body = Formula::disjunction(
        g.edges
            .iter()
            .map(|(u, v)| eqs(vec![(Term::Bound(1), u), (Term::Bound(0), v)]))
            .collect(),
    );
    Arc::new(FixBody::new(2, body))
}

fn fix_body(src: &str, env: &FixEnv) -> Arc<FixBody> {
    match parse_formula_in(src, env).expect("well-formed encoding") {
        Formula::Mu(fb, _) | Formula::Nu(fb, _) => fb,
        _ => unreachable!("encoding is a fixed point"),
    }
}

/// `path x z := step x z ∨ ∃y. step x y ∧⁺ path y z`.
pub fn encode_path(g: &Graph) -> Arc<FixBody> {
    let mut env = FixEnv::new();
    env.define("step", FixKind::Mu, encode_step(g));
    fix_body(
        "(mu (path x z) (or (step x z) (exists (y) (and+ (step x y) (path y z)))) u v)",
        &env,
    )
}

/// `one p a q`: one disjunct per transition.
pub fn encode_one(l: &Lts) -> Arc<FixBody> {
    let body = Formula::disjunction(
        l.trans
            .iter()
            .map(|(p, a, q)| {
                eqs(vec![
                    (Term::Bound(2), p),
                    (Term::Bound(1), a),
                    (Term::Bound(0), q),
                ])
            })
            .collect(),
    );
    Arc::new(FixBody::new(3, body))
}

fn lts_env(l: &Lts) -> FixEnv {
    let mut env = FixEnv::new();
    env.define("one", FixKind::Mu, encode_one(l));
    env
}

const SIM_CLAUSE: &str =
    "(forall (a p1) (imp (one p a p1) (exists (q1) (and+ (one q a q1) (S p1 q1)))))";

/// `sim p q := ∀a∀p'. one p a p' ⊃ ∃q'. one q a q' ∧⁺ sim p' q'`.
pub fn encode_sim(l: &Lts) -> Arc<FixBody> {
    fix_body(&format!("(nu (S p q) {SIM_CLAUSE} u v)"), &lts_env(l))
}

/// The simulation clause in both directions, joined by `∧⁻`.
pub fn encode_bisim(l: &Lts) -> Arc<FixBody> {
    fix_body(
        &format!(
            "(nu (S p q) (and- {SIM_CLAUSE} \
               (forall (a q1) (imp (one q a q1) (exists (p1) (and+ (one p a p1) (S q1 p1)))))) u v)"
        ),
        &lts_env(l),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClaimKind {
    Reach,
    Unreach,
    Sim,
    Unsim,
    Bisim,
    Unbisim,
}

impl ClaimKind {
    pub const ALL: [ClaimKind; 6] = [
        ClaimKind::Reach,
        ClaimKind::Unreach,
        ClaimKind::Sim,
        ClaimKind::Unsim,
        ClaimKind::Bisim,
        ClaimKind::Unbisim,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            ClaimKind::Reach => "reach",
            ClaimKind::Unreach => "unreach",
            ClaimKind::Sim => "sim",
            ClaimKind::Unsim => "unsim",
            ClaimKind::Bisim => "bisim",
            ClaimKind::Unbisim => "unbisim",
        }
    }

    pub fn from_keyword(s: &str) -> Option<ClaimKind> {
        ClaimKind::ALL.into_iter().find(|k| k.keyword() == s)
    }

    pub fn on_graph(self) -> bool {
        matches!(self, ClaimKind::Reach | ClaimKind::Unreach)
    }

    /// The certificate format checked for this kind of claim.
    pub fn table(self) -> Box<dyn FpcTable> {
        match self {
            ClaimKind::Reach => Box::new(fpc::reach_table()),
            ClaimKind::Unreach => Box::new(fpc::nonreach_table()),
            ClaimKind::Sim | ClaimKind::Bisim => Box::new(fpc::sim_table()),
            ClaimKind::Unsim => Box::new(fpc::nonsim_table()),
            ClaimKind::Unbisim => Box::new(fpc::nonbisim_table()),
        }
    }

    pub fn cert_mode(self) -> CertMode {
        match self {
            ClaimKind::Unsim => CertMode::Unsim,
            _ => CertMode::General,
        }
    }
}

impl fmt::Display for ClaimKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Claim {
    pub kind: ClaimKind,
    pub left: Symbol,
    pub right: Symbol,
}

impl Claim {
    pub fn new(kind: ClaimKind, left: &str, right: &str) -> Claim {
        Claim {
            kind,
            left: left.into(),
            right: right.into(),
        }
    }

    /// `"reach a c"` and the like.
    pub fn parse(s: &str) -> Result<Claim, EncodeError> {
        let words: Vec<&str> = s.split_whitespace().collect();
        match words.as_slice() {
            [k, a, b] => ClaimKind::from_keyword(k)
                .map(|kind| Claim::new(kind, a, b))
                .ok_or_else(|| EncodeError::BadClaim(s.to_string())),
            _ => Err(EncodeError::BadClaim(s.to_string())),
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.kind, self.left, self.right)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Problem {
    Graph(Graph),
    Lts(Lts),
}

/// The goal formula of `claim`; negative claims are `(·) ⊃ ⊥⁻`.
pub fn goal(claim: &Claim, problem: &Problem) -> Result<Formula, EncodeError> {
    let args = vec![constant(&claim.left), constant(&claim.right)];
    let check = |known: &dyn Fn(&str) -> bool| {
        for s in [&claim.left, &claim.right] {
            if !known(s) {
                return Err(EncodeError::UnknownConstant(s.to_string()));
            }
        }
        Ok(())
    };
    let positive = match (claim.kind, problem) {
        (ClaimKind::Reach | ClaimKind::Unreach, Problem::Graph(g)) => {
            check(&|s| g.has_node(s))?;
            Formula::Mu(encode_path(g), args)
        }
        (ClaimKind::Sim | ClaimKind::Unsim, Problem::Lts(l)) => {
            check(&|s| l.has_state(s))?;
            Formula::Nu(encode_sim(l), args)
        }
        (ClaimKind::Bisim | ClaimKind::Unbisim, Problem::Lts(l)) => {
            check(&|s| l.has_state(s))?;
            Formula::Nu(encode_bisim(l), args)
        }
        (kind, _) => {
            let need = if kind.on_graph() { "graph" } else { "transition system" };
            return Err(EncodeError::WrongProblem(kind, need));
        }
    };
    Ok(match claim.kind {
        ClaimKind::Unreach | ClaimKind::Unsim | ClaimKind::Unbisim => Formula::negate(positive),
        _ => positive,
    })
}

/// A problem file: the system plus any goal lines it lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemFile {
    pub problem: Problem,
    pub claims: Vec<Claim>,
}

/// Line-oriented format; `#` starts a comment. Directives: `node N`,
/// `edge A B`, `state S`, `trans P L Q`, and claim lines such as
/// `reach a c`.
pub fn parse_problem(src: &str) -> Result<ProblemFile, EncodeError> {
    let mut graph = Graph::new();
    let mut lts = Lts::new();
    let (mut is_graph, mut is_lts) = (false, false);
    let mut claims = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let words: Vec<&str> = line.split_whitespace().collect();
        let err = |msg: &str| EncodeError::Parse {
            line: i + 1,
            msg: msg.to_string(),
        };
        match words.as_slice() {
            [] => {}
            ["node", n] => {
                graph.add_node(n);
                is_graph = true;
            }
            ["edge", a, b] => {
                graph.add_edge(a, b);
                is_graph = true;
            }
            ["state", s] => {
                lts.add_state(s);
                is_lts = true;
            }
            ["trans", p, a, q] => {
                lts.add_trans(p, a, q);
                is_lts = true;
            }
            [k, a, b] if ClaimKind::from_keyword(k).is_some() => {
                claims.push(Claim::new(ClaimKind::from_keyword(k).unwrap(), a, b));
            }
            [d, ..] => {
                let known = ["node", "edge", "state", "trans"].contains(d)
                    || ClaimKind::from_keyword(d).is_some();
                return Err(err(&if known {
                    format!("wrong number of arguments to `{d}`")
                } else {
                    format!("unknown directive `{d}`")
                }));
            }
        }
        if is_graph && is_lts {
            return Err(err("graph and transition-system directives are mixed"));
        }
    }
    let problem = if is_lts {
        Problem::Lts(lts)
    } else {
        Problem::Graph(graph)
    };
    Ok(ProblemFile { problem, claims })
}
