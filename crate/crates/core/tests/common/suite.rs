//! Randomized end-to-end comparison of generators, kernel and oracles.

use std::collections::BTreeMap;

use fpc_checker::encode::{goal, Claim, ClaimKind, Graph, Lts, Problem};
use fpc_checker::fpc::{Assertion, Cert, DiaItem};
use fpc_checker::kernel::{check, CheckConfig, Verdict};
use fpc_checker::terms::{Formula, PredExpr, Symbol};
use fpc_checker::witness::{certificate, hat, reachable_from, PairSet};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use super::systems::{is_coinvariant, random_graph, random_lts, reaches, refutes, simulates};

#[derive(Default, Debug)]
pub struct Report {
    pub instances: BTreeMap<&'static str, usize>,
    pub true_claims: usize,
    pub checks: usize,
    pub traces: usize,
    pub phase_switch_violations: usize,
    pub mutations: usize,
    pub invalid_mutations: usize,
    pub failures: Vec<String>,
}

impl Report {
    fn run(&mut self, claim: &Claim, problem: &Problem, cert: &Cert) -> bool {
        let g = goal(claim, problem).unwrap();
        self.checks += 1;
        match check(claim.kind.table().as_ref(), cert, &g, &CheckConfig::default()) {
            Ok(Verdict::Accepted(proof)) => {
                self.traces += 1;
                self.phase_switch_violations += proof.derivation.phase_switch_violations();
                true
            }
            Ok(Verdict::Rejected) => false,
            Err(e) => {
                // Resource exhaustion is a non-acceptance; anything else is a bug.
                if !matches!(e, fpc_checker::kernel::CheckError::ResourceExhausted { .. }) {
                    self.failures.push(format!("{claim} with {cert}: {e}"));
                }
                false
            }
        }
    }
}

fn pick<'a>(rng: &mut impl Rng, xs: &'a [Symbol]) -> &'a Symbol {
    &xs[rng.gen_range(0..xs.len())]
}

fn truth(claim: &Claim, problem: &Problem) -> bool {
    let (x, y) = (&*claim.left, &*claim.right);
    match (claim.kind, problem) {
        (ClaimKind::Reach, Problem::Graph(g)) => reaches(g, x, y),
        (ClaimKind::Unreach, Problem::Graph(g)) => !reaches(g, x, y),
        (ClaimKind::Sim, Problem::Lts(l)) => simulates(l, x, y, false),
        (ClaimKind::Unsim, Problem::Lts(l)) => !simulates(l, x, y, false),
        (ClaimKind::Bisim, Problem::Lts(l)) => simulates(l, x, y, true),
        (ClaimKind::Unbisim, Problem::Lts(l)) => !simulates(l, x, y, true),
        _ => unreachable!(),
    }
}

fn is_path(g: &Graph, x: &Symbol, mid: &[Symbol], y: &Symbol) -> bool {
    let mut nodes = vec![x];
    nodes.extend(mid);
    nodes.push(y);
    nodes.windows(2).all(|w| g.edges.contains(&(w[0].clone(), w[1].clone())))
}

fn unreach_inv(set: &[Symbol], u: &Symbol) -> Cert {
    let pairs: PairSet = set.iter().map(|a| (a.clone(), u.clone())).collect();
    let s = PredExpr::new(2, Formula::negate(hat(&pairs).body().clone())).unwrap();
    Cert::inv(s, Cert::bipole(1))
}

fn valid_unreach_set(g: &Graph, t: &Symbol, u: &Symbol, set: &[Symbol]) -> bool {
    set.contains(t)
        && set.iter().all(|x| g.successors(x).all(|s| s != u && set.contains(s)))
}

/// Every assertion obtained by relabeling one item with another label.
fn relabelings(a: &Assertion, labels: &[Symbol]) -> Vec<Assertion> {
    let mut out = Vec::new();
    for (i, item) in a.0.iter().enumerate() {
        let with = |new: DiaItem| {
            let mut items = a.0.clone();
            items[i] = new;
            Assertion(items)
        };
        for l in labels.iter().filter(|l| *l != item.label()) {
            out.push(with(match item {
                DiaItem::Dia(_, b) => DiaItem::Dia(l.clone(), b.clone()),
                DiaItem::NegDia(_, b) => DiaItem::NegDia(l.clone(), b.clone()),
            }));
        }
        for inner in relabelings(item.body(), labels) {
            out.push(with(match item {
                DiaItem::Dia(l, _) => DiaItem::Dia(l.clone(), inner),
                DiaItem::NegDia(l, _) => DiaItem::NegDia(l.clone(), inner),
            }));
        }
    }
    out
}

fn witnesses(l: &Lts, p: &str, q: &str, a: &Assertion, bisim: bool) -> bool {
    refutes(l, p, q, a, bisim)
        || (bisim
            && a.0.len() == 1
            && a.has_neg_dia()
            && refutes(l, p, q, &Assertion(vec![a.0[0].negated()]), bisim))
}

/// Single-element mutations of an accepted certificate, each with whether
/// it still witnesses the claim.
fn mutations(claim: &Claim, problem: &Problem, cert: &Cert) -> Vec<(Cert, bool)> {
    let (x, y) = (&claim.left, &claim.right);
    match (cert, problem) {
        (Cert::Path(mid), Problem::Graph(g)) => (0..mid.len())
            .map(|i| {
                let mut m = mid.clone();
                m.remove(i);
                let ok = is_path(g, x, &m, y);
                (Cert::Path(m), ok)
            })
            .collect(),
        (Cert::Inv(..), Problem::Graph(g)) => {
            let set = reachable_from(g, x);
            (0..set.len())
                .map(|i| {
                    let mut s = set.clone();
                    s.remove(i);
                    let ok = valid_unreach_set(g, x, y, &s);
                    (unreach_inv(&s, y), ok)
                })
                .collect()
        }
        (Cert::CoInv(..), Problem::Lts(l)) => {
            let bisim = claim.kind == ClaimKind::Bisim;
            let Some(Cert::CoInv(..)) = certificate(claim, problem) else { unreachable!() };
            let pairs = generated_pairs(claim, l);
            (0..pairs.len())
                .map(|i| {
                    let mut s = pairs.clone();
                    s.remove(i);
                    let named: Vec<(String, String)> =
                        s.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
                    let ok = is_coinvariant(l, &named, x, y, bisim);
                    let set: PairSet = s.into_iter().collect();
                    (Cert::coinv(hat(&set), Cert::bipole(1)), ok)
                })
                .collect()
        }
        (Cert::Hml(a), Problem::Lts(l)) => {
            let bisim = claim.kind == ClaimKind::Unbisim;
            relabelings(a, &l.labels)
                .into_iter()
                .map(|m| {
                    let ok = witnesses(l, x, y, &m, bisim);
                    (Cert::Hml(m), ok)
                })
                .collect()
        }
        _ => Vec::new(),
    }
}

fn generated_pairs(claim: &Claim, l: &Lts) -> Vec<(Symbol, Symbol)> {
    let set = if claim.kind == ClaimKind::Bisim {
        fpc_checker::witness::bisim_coinvariant(l, &claim.left, &claim.right)
    } else {
        fpc_checker::witness::sim_coinvariant(l, &claim.left, &claim.right)
    };
    set.unwrap().into_iter().collect()
}

/// Certificates that a false claim must not be proved with.
fn decoys(rng: &mut impl Rng, claim: &Claim, problem: &Problem) -> Vec<Cert> {
    let (x, y) = (&claim.left, &claim.right);
    match problem {
        Problem::Graph(g) => vec![
            Cert::Path((0..rng.gen_range(0..3)).map(|_| pick(rng, &g.nodes).clone()).collect()),
            Cert::Path(Vec::new()),
            unreach_inv(&reachable_from(g, x), y),
            Cert::async_(Cert::Stop),
            Cert::bipole(2),
        ],
        Problem::Lts(l) => {
            let all: PairSet = l
                .states
                .iter()
                .flat_map(|p| l.states.iter().map(move |q| (p.clone(), q.clone())))
                .collect();
            let mut out = vec![Cert::coinv(hat(&all), Cert::bipole(1)), Cert::bipole(2)];
            if !l.labels.is_empty() {
                let lab = pick(rng, &l.labels);
                let inner = Assertion::dia(lab, Assertion::tt());
                out.push(Cert::Hml(Assertion::dia(pick(rng, &l.labels), inner.clone())));
                if claim.kind == ClaimKind::Unbisim {
                    out.push(Cert::Hml(Assertion::neg_dia(lab, Assertion::tt())));
                    out.push(Cert::Hml(Assertion::dia(lab, Assertion::neg_dia(lab, Assertion::tt()))));
                }
            }
            out
        }
    }
}

fn instance(rng: &mut impl Rng, kind: ClaimKind) -> (Claim, Problem) {
    if kind.on_graph() {
        let g = random_graph(rng);
        let (x, y) = (pick(rng, &g.nodes).clone(), pick(rng, &g.nodes).clone());
        (Claim::new(kind, &x, &y), Problem::Graph(g))
    } else {
        let l = random_lts(rng);
        let (x, y) = (pick(rng, &l.states).clone(), pick(rng, &l.states).clone());
        (Claim::new(kind, &x, &y), Problem::Lts(l))
    }
}

/// Mutations checked per true instance, sampled from all single mutations.
const MUTATIONS_PER_INSTANCE: usize = 4;

pub fn run_suite(seed: u64, per_kind: usize, kinds: &[ClaimKind]) -> Report {
    let mut report = Report::default();
    for &kind in kinds {
        let mut rng = StdRng::seed_from_u64(seed.wrapping_add(kind as u64));
        for _ in 0..per_kind {
            let (claim, problem) = instance(&mut rng, kind);
            *report.instances.entry(kind.keyword()).or_default() += 1;
            let holds = truth(&claim, &problem);
            let cert = certificate(&claim, &problem);
            if cert.is_some() != holds {
                report.failures.push(format!("{claim}: generator disagrees with oracle ({holds})"));
                continue;
            }
            match cert {
                Some(cert) => {
                    report.true_claims += 1;
                    if !report.run(&claim, &problem, &cert) {
                        report.failures.push(format!("{claim}: generated {cert} not accepted"));
                    }
                    let mut ms = mutations(&claim, &problem, &cert);
                    ms.shuffle(&mut rng);
                    for (m, ok) in ms.into_iter().take(MUTATIONS_PER_INSTANCE) {
                        report.mutations += 1;
                        if !ok {
                            report.invalid_mutations += 1;
                            if report.run(&claim, &problem, &m) {
                                report.failures.push(format!("{claim}: invalid mutation {m} accepted on {problem:?}"));
                            }
                        }
                    }
                }
                None => {
                    for d in decoys(&mut rng, &claim, &problem) {
                        if report.run(&claim, &problem, &d) {
                            report.failures.push(format!("false claim {claim} accepted with {d}"));
                        }
                    }
                }
            }
        }
    }
    report
}
