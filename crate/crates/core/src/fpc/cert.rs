use std::fmt;
use std::sync::Arc;

use crate::terms::{PredExpr, Symbol, Term};

/// A certificate term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cert {
    /// Authorizes no search.
    Stop,
    Sync(Arc<Cert>),
    Async(Arc<Cert>),
    /// `n ≥ 1` nested `async(sync(·))` layers ending in `stop`.
    Bipole(u32),
    /// The unbounded `async(sync(decproc))`.
    Decproc,
    Inv(Arc<PredExpr>, Arc<Cert>),
    CoInv(Arc<PredExpr>, Arc<Cert>),
    /// Intermediate nodes of a path.
    Path(Vec<Symbol>),
    Hml(Assertion),
    /// Internal: focus state of an assertion after a diamond was chosen.
    HmlDia(DiaItem),
}

/// A conjunction of (possibly negated) diamonds; the empty one is `tt`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assertion(pub Vec<DiaItem>);

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DiaItem {
    Dia(Symbol, Assertion),
    NegDia(Symbol, Assertion),
}

impl Assertion {
    pub fn tt() -> Assertion {
        Assertion(Vec::new())
    }

    pub fn dia(label: &str, a: Assertion) -> Assertion {
        Assertion(vec![DiaItem::Dia(label.into(), a)])
    }

    pub fn neg_dia(label: &str, a: Assertion) -> Assertion {
        Assertion(vec![DiaItem::NegDia(label.into(), a)])
    }

    /// Conjunction, flattening nested conjunctions.
    pub fn and(parts: Vec<Assertion>) -> Assertion {
        Assertion(parts.into_iter().flat_map(|a| a.0).collect())
    }

    pub fn has_neg_dia(&self) -> bool {
        self.0.iter().any(|item| match item {
            DiaItem::Dia(_, a) => a.has_neg_dia(),
            DiaItem::NegDia(..) => true,
        })
    }

    pub fn size(&self) -> usize {
        self.0.iter().map(|item| 1 + item.body().size()).sum()
    }
}

impl DiaItem {
    pub fn label(&self) -> &Symbol {
        match self {
            DiaItem::Dia(l, _) | DiaItem::NegDia(l, _) => l,
        }
    }

    pub fn body(&self) -> &Assertion {
        match self {
            DiaItem::Dia(_, a) | DiaItem::NegDia(_, a) => a,
        }
    }

    pub fn negated(&self) -> DiaItem {
        match self {
            DiaItem::Dia(l, a) => DiaItem::NegDia(l.clone(), a.clone()),
            DiaItem::NegDia(l, a) => DiaItem::Dia(l.clone(), a.clone()),
        }
    }
}

impl Cert {
    pub fn sync(c: Cert) -> Cert {
        Cert::Sync(Arc::new(c))
    }

    pub fn async_(c: Cert) -> Cert {
        Cert::Async(Arc::new(c))
    }

    pub fn inv(s: PredExpr, k: Cert) -> Cert {
        Cert::Inv(Arc::new(s), Arc::new(k))
    }

    pub fn coinv(s: PredExpr, k: Cert) -> Cert {
        Cert::CoInv(Arc::new(s), Arc::new(k))
    }

    pub fn path(nodes: &[&str]) -> Cert {
        Cert::Path(nodes.iter().map(|n| Symbol::from(*n)).collect())
    }

    /// `bipole n` with `bipole 0 = stop`.
    pub fn bipole(n: u32) -> Cert {
        if n == 0 {
            Cert::Stop
        } else {
            Cert::Bipole(n)
        }
    }

    /// `n` explicit `async(sync(·))` layers around `stop`.
    pub fn nested_bipole(n: u32) -> Cert {
        (0..n).fold(Cert::Stop, |c, _| Cert::async_(Cert::sync(c)))
    }
}

/// A certificate abstracted over the eigenvariables of an `∃`-left,
/// `∀`-right, or (co)induction closure premise. Every shipped table uses a
/// constant abstraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertAbs {
    body: Cert,
}

impl CertAbs {
    pub fn constant(body: Cert) -> CertAbs {
        CertAbs { body }
    }

    pub fn apply(&self, _eigens: &[Term]) -> Cert {
        self.body.clone()
    }
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.as_slice() {
            [] => write!(f, "tt"),
            [item] => write!(f, "{item}"),
            items => {
                write!(f, "(and")?;
                for item in items {
                    write!(f, " {item}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for DiaItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiaItem::Dia(l, a) => write!(f, "(dia {l} {a})"),
            DiaItem::NegDia(l, a) => write!(f, "(not (dia {l} {a}))"),
        }
    }
}

impl fmt::Display for Cert {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cert::Stop => write!(f, "stop"),
            Cert::Sync(c) => write!(f, "(sync {c})"),
            Cert::Async(c) => write!(f, "(async {c})"),
            Cert::Bipole(n) => write!(f, "(bipole {n})"),
            Cert::Decproc => write!(f, "decproc"),
            Cert::Inv(s, k) => write!(f, "(inv {s} {k})"),
            Cert::CoInv(s, k) => write!(f, "(coinv {s} {k})"),
            Cert::Path(nodes) => {
                write!(f, "(path (")?;
                for (i, n) in nodes.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{n}")?;
                }
                write!(f, "))")
            }
            Cert::Hml(a) => write!(f, "(hml {a})"),
            Cert::HmlDia(item) => write!(f, "(hml-focus {item})"),
        }
    }
}
