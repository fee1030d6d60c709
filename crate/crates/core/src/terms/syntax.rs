//! Surface syntax for formulas and predicate expressions.
//!
//! ```text
//! F ::= true+ | false+ | true- | false-
//!     | (and+ F...) | (and- F...) | (or F...) | (imp F F) | (not F)
//!     | (= T T) | (!= T T) | (exists (x...) F) | (forall (x...) F)
//!     | (mu (P x...) F T...) | (nu (P x...) F T...)
//!     | (P T...) | ((lam (x...) F) T...)
//! T ::= symbol | (f T...)
//! ```
//! n-ary connectives nest to the right. The printer emits the same
//! syntax with binder names chosen to avoid every constant in the formula.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use super::formula::{FixBody, FixKind, Formula, PredExpr, PredRef, Polarity};
use super::term::Term;
use crate::sexp::{self, malformed, Sexp, SyntaxError};

/// Named closed fixed points that may be applied by name, e.g. `(path a c)`.
#[derive(Clone, Debug, Default)]
pub struct FixEnv {
    defs: HashMap<String, (FixKind, Arc<FixBody>)>,
}

impl FixEnv {
    pub fn new() -> FixEnv {
        FixEnv::default()
    }

    pub fn define(&mut self, name: &str, kind: FixKind, body: Arc<FixBody>) {
        self.defs.insert(name.to_string(), (kind, body));
    }

    pub fn get(&self, name: &str) -> Option<&(FixKind, Arc<FixBody>)> {
        self.defs.get(name)
    }
}

pub fn parse_formula(src: &str) -> Result<Formula, SyntaxError> {
    parse_formula_in(src, &FixEnv::new())
}

pub fn parse_formula_in(src: &str, env: &FixEnv) -> Result<Formula, SyntaxError> {
    let sx = sexp::parse(src)?;
    let f = Reader::new(env).formula(&sx)?;
    f.check_well_formed().map_err(|e| malformed(e.to_string()))?;
    Ok(f)
}

pub fn parse_pred_expr(src: &str) -> Result<PredExpr, SyntaxError> {
    let sx = sexp::parse(src)?;
    pred_expr_from_sexp(&sx)
}

pub fn pred_expr_from_sexp(sx: &Sexp) -> Result<PredExpr, SyntaxError> {
    Reader::new(&FixEnv::new()).pred_expr(sx)
}

pub fn term_from_sexp(sx: &Sexp) -> Result<Term, SyntaxError> {
    Reader::new(&FixEnv::new()).term(sx)
}

struct Reader<'a> {
    env: &'a FixEnv,
    terms: Vec<String>,
    preds: Vec<(String, u32, Polarity)>,
}

impl<'a> Reader<'a> {
    fn new(env: &'a FixEnv) -> Self {
        Reader {
            env,
            terms: Vec::new(),
            preds: Vec::new(),
        }
    }

    fn term(&self, sx: &Sexp) -> Result<Term, SyntaxError> {
        match sx {
            Sexp::Atom(name) => Ok(match self.terms.iter().rposition(|n| n == name) {
                Some(pos) => Term::Bound((self.terms.len() - 1 - pos) as u32),
                None => Term::constant(name),
            }),
            Sexp::List(items) => match items.split_first() {
                Some((Sexp::Atom(f), args)) if !args.is_empty() => Ok(Term::app(
                    f,
                    args.iter().map(|a| self.term(a)).collect::<Result<_, _>>()?,
                )),
                _ => Err(malformed(format!("bad term `{sx}`"))),
            },
        }
    }

    fn binder_names(sx: &Sexp) -> Result<Vec<String>, SyntaxError> {
        let items = sx
            .list()
            .ok_or_else(|| malformed(format!("expected binder list, got `{sx}`")))?;
        items
            .iter()
            .map(|s| {
                s.atom()
                    .map(str::to_string)
                    .ok_or_else(|| malformed("binder names must be symbols"))
            })
            .collect()
    }

    fn pred_expr(&mut self, sx: &Sexp) -> Result<PredExpr, SyntaxError> {
        let (head, rest) = sx
            .head()
            .ok_or_else(|| malformed(format!("expected (lam ...), got `{sx}`")))?;
        if head != "lam" || rest.len() != 2 {
            return Err(malformed(format!("expected (lam (x...) F), got `{sx}`")));
        }
        let names = Self::binder_names(&rest[0])?;
        let saved = std::mem::take(&mut self.terms);
        let saved_preds = std::mem::take(&mut self.preds);
        self.terms = names.clone();
        let body = self.formula(&rest[1]);
        self.terms = saved;
        self.preds = saved_preds;
        PredExpr::new(names.len() as u32, body?).map_err(|e| malformed(e.to_string()))
    }

    fn nary(
        &mut self,
        items: &[Sexp],
        unit: Formula,
        mk: fn(Formula, Formula) -> Formula,
    ) -> Result<Formula, SyntaxError> {
        let mut fs = items
            .iter()
            .map(|i| self.formula(i))
            .collect::<Result<Vec<_>, _>>()?;
        let Some(mut acc) = fs.pop() else {
            return Ok(unit);
        };
        while let Some(f) = fs.pop() {
            acc = mk(f, acc);
        }
        Ok(acc)
    }

    fn quantifier(
        &mut self,
        rest: &[Sexp],
        mk: fn(Arc<Formula>) -> Formula,
    ) -> Result<Formula, SyntaxError> {
        if rest.len() != 2 {
            return Err(malformed("quantifier expects (x...) and a body"));
        }
        let names = Self::binder_names(&rest[0])?;
        let n = names.len();
        self.terms.extend(names);
        let body = self.formula(&rest[1]);
        self.terms.truncate(self.terms.len() - n);
        let mut f = body?;
        for _ in 0..n {
            f = mk(Arc::new(f));
        }
        Ok(f)
    }

    fn fixed_point(&mut self, kind: FixKind, rest: &[Sexp]) -> Result<Formula, SyntaxError> {
        if rest.len() < 2 {
            return Err(malformed("fixed point expects (P x...) and a body"));
        }
        let mut names = Self::binder_names(&rest[0])?;
        if names.is_empty() {
            return Err(malformed("fixed point needs a predicate name"));
        }
        let pred = names.remove(0);
        let arity = names.len() as u32;
        self.terms.extend(names);
        self.preds.push((pred, arity, kind.polarity()));
        let body = self.formula(&rest[1]);
        self.preds.pop();
        self.terms.truncate(self.terms.len() - arity as usize);
        let args = rest[2..]
            .iter()
            .map(|a| self.term(a))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Formula::fix(kind, Arc::new(FixBody::new(arity, body?)), args))
    }

    fn formula(&mut self, sx: &Sexp) -> Result<Formula, SyntaxError> {
        if let Sexp::Atom(a) = sx {
            return match a.as_str() {
                "true+" => Ok(Formula::TruePos),
                "false+" => Ok(Formula::FalsePos),
                "true-" => Ok(Formula::TrueNeg),
                "false-" => Ok(Formula::FalseNeg),
                _ => self.application(a, &[]),
            };
        }
        let items = sx.list().unwrap();
        let Some((head, rest)) = items.split_first() else {
            return Err(malformed("empty formula"));
        };
        let head = match head {
            Sexp::Atom(h) => h.as_str(),
            lam @ Sexp::List(_) => {
                let e = self.pred_expr(lam)?;
                let args = rest
                    .iter()
                    .map(|a| self.term(a))
                    .collect::<Result<Vec<_>, _>>()?;
                return Ok(Formula::PredApp(PredRef::Expr(Arc::new(e)), args));
            }
        };
        let binary = |r: &mut Self, mk: fn(Formula, Formula) -> Formula| {
            if rest.len() != 2 {
                return Err(malformed(format!("`{head}` expects two arguments")));
            }
            Ok(mk(r.formula(&rest[0])?, r.formula(&rest[1])?))
        };
        match head {
            "and+" => self.nary(rest, Formula::TruePos, Formula::and_pos),
            "and-" => self.nary(rest, Formula::TrueNeg, Formula::and_neg),
            "or" => self.nary(rest, Formula::FalsePos, Formula::or),
            "imp" => binary(self, Formula::imp),
            "not" if rest.len() == 1 => Ok(Formula::negate(self.formula(&rest[0])?)),
            "=" | "!=" => {
                if rest.len() != 2 {
                    return Err(malformed(format!("`{head}` expects two terms")));
                }
                let (s, t) = (self.term(&rest[0])?, self.term(&rest[1])?);
                Ok(if head == "=" {
                    Formula::Eq(s, t)
                } else {
                    Formula::Neq(s, t)
                })
            }
            "exists" => self.quantifier(rest, Formula::Exists),
            "forall" => self.quantifier(rest, Formula::Forall),
            "mu" => self.fixed_point(FixKind::Mu, rest),
            "nu" => self.fixed_point(FixKind::Nu, rest),
            other => self.application(other, rest),
        }
    }

    fn application(&mut self, name: &str, rest: &[Sexp]) -> Result<Formula, SyntaxError> {
        let args = rest
            .iter()
            .map(|a| self.term(a))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(pos) = self.preds.iter().rposition(|(n, _, _)| n == name) {
            let (_, arity, polarity) = self.preds[pos];
            if arity as usize != args.len() {
                return Err(malformed(format!(
                    "`{name}` expects {arity} arguments, got {}",
                    args.len()
                )));
            }
            let index = (self.preds.len() - 1 - pos) as u32;
            return Ok(Formula::PredApp(PredRef::Var { index, arity, polarity }, args));
        }
        if let Some((kind, body)) = self.env.get(name) {
            if body.arity() as usize != args.len() {
                return Err(malformed(format!(
                    "`{name}` expects {} arguments, got {}",
                    body.arity(),
                    args.len()
                )));
            }
            return Ok(Formula::fix(*kind, body.clone(), args));
        }
        Err(malformed(format!("unknown connective or predicate `{name}`")))
    }
}

// ---------------------------------------------------------------- printing

const TERM_NAMES: [&str; 6] = ["x", "y", "z", "w", "u", "v"];
const PRED_NAMES: [&str; 6] = ["A", "B", "C", "D", "E", "F"];

struct Printer {
    reserved: BTreeSet<String>,
    terms: Vec<String>,
    preds: Vec<String>,
}

fn collect_constants(f: &Formula, out: &mut BTreeSet<String>) {
    f.for_each_term(&mut |t| {
        t.for_each_const(&mut |c| {
            out.insert(c.to_string());
        })
    });
}

impl Printer {
    fn for_formula(f: &Formula) -> Printer {
        let mut reserved = BTreeSet::new();
        collect_constants(f, &mut reserved);
        for w in ["true+", "false+", "true-", "false-", "lam", "mu", "nu"] {
            reserved.insert(w.to_string());
        }
        Printer {
            reserved,
            terms: Vec::new(),
            preds: Vec::new(),
        }
    }

    fn fresh(&self, pool: &[&str], scope: &[String]) -> String {
        (0..)
            .flat_map(|round| {
                pool.iter().map(move |base| {
                    if round == 0 {
                        base.to_string()
                    } else {
                        format!("{base}{round}")
                    }
                })
            })
            .find(|n| !self.reserved.contains(n) && !scope.contains(n))
            .unwrap()
    }

    fn bind_terms(&mut self, n: u32) -> Vec<String> {
        let mut names = Vec::new();
        for _ in 0..n {
            let name = self.fresh(&TERM_NAMES, &self.terms);
            self.terms.push(name.clone());
            names.push(name);
        }
        names
    }

    fn term(&self, t: &Term) -> String {
        match t {
            Term::Bound(k) => {
                let k = *k as usize;
                if k < self.terms.len() {
                    self.terms[self.terms.len() - 1 - k].clone()
                } else {
                    t.to_string()
                }
            }
            Term::Const(name, args) if !args.is_empty() => {
                let parts: Vec<String> = args.iter().map(|a| self.term(a)).collect();
                format!("({name} {})", parts.join(" "))
            }
            other => other.to_string(),
        }
    }

    fn args(&self, args: &[Term]) -> String {
        args.iter().map(|a| format!(" {}", self.term(a))).collect()
    }

    fn nary(&mut self, op: &str, f: &Formula) -> String {
        let mut parts = Vec::new();
        let mut cur = f;
        loop {
            match (op, cur) {
                ("and+", Formula::AndPos(a, b))
                | ("and-", Formula::AndNeg(a, b))
                | ("or", Formula::Or(a, b)) => {
                    parts.push(self.formula(a));
                    cur = b;
                }
                _ => {
                    parts.push(self.formula(cur));
                    break;
                }
            }
        }
        format!("({op} {})", parts.join(" "))
    }

    fn quantifier(&mut self, op: &str, f: &Formula) -> String {
        let mut n = 0;
        let mut cur = f;
        while let ("exists", Formula::Exists(b)) | ("forall", Formula::Forall(b)) = (op, cur) {
            n += 1;
            cur = b;
        }
        let names = self.bind_terms(n);
        let body = self.formula(cur);
        self.terms.truncate(self.terms.len() - n as usize);
        format!("({op} ({}) {body})", names.join(" "))
    }

    fn pred_expr(&mut self, e: &PredExpr) -> String {
        let saved = std::mem::take(&mut self.terms);
        let saved_preds = std::mem::take(&mut self.preds);
        let names = self.bind_terms(e.arity());
        let body = self.formula(e.body());
        self.terms = saved;
        self.preds = saved_preds;
        format!("(lam ({}) {body})", names.join(" "))
    }

    fn formula(&mut self, f: &Formula) -> String {
        use Formula::*;
        match f {
            TruePos => "true+".into(),
            FalsePos => "false+".into(),
            TrueNeg => "true-".into(),
            FalseNeg => "false-".into(),
            AndPos(..) => self.nary("and+", f),
            AndNeg(..) => self.nary("and-", f),
            Or(..) => self.nary("or", f),
            Imp(a, b) => format!("(imp {} {})", self.formula(a), self.formula(b)),
            Eq(s, t) => format!("(= {} {})", self.term(s), self.term(t)),
            Neq(s, t) => format!("(!= {} {})", self.term(s), self.term(t)),
            Exists(_) => self.quantifier("exists", f),
            Forall(_) => self.quantifier("forall", f),
            Mu(fb, args) | Nu(fb, args) => {
                let op = if matches!(f, Mu(..)) { "mu" } else { "nu" };
                let args = self.args(args);
                let pred = self.fresh(&PRED_NAMES, &self.preds);
                let names = self.bind_terms(fb.arity());
                self.preds.push(pred.clone());
                let body = self.formula(fb.body());
                self.preds.pop();
                self.terms.truncate(self.terms.len() - fb.arity() as usize);
                let mut binder = vec![pred];
                binder.extend(names);
                format!("({op} ({}) {body}{args})", binder.join(" "))
            }
            PredApp(PredRef::Var { index, .. }, args) => {
                let i = *index as usize;
                let name = if i < self.preds.len() {
                    self.preds[self.preds.len() - 1 - i].clone()
                } else {
                    format!("#P{i}")
                };
                format!("({name}{})", self.args(args))
            }
            PredApp(PredRef::Expr(e), args) => {
                format!("({}{})", self.pred_expr(e), self.args(args))
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", Printer::for_formula(self).formula(self))
    }
}

impl fmt::Display for PredExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", Printer::for_formula(self.body()).pred_expr(self))
    }
}
