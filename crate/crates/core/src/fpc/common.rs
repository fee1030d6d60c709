use crate::terms::{Formula, Side};

use super::{
    Cert, CertAbs, Clerk, ClerkAbs, ClerkSplit, Expert, ExpertChoice, ExpertSplit, ExpertWitness,
    FpcTable, Induction, Witness,
};

/// The generic constructors: `stop`, `sync`, `async`, `bipole`, `decproc`,
/// `inv` and `coinv`.
#[derive(Clone, Copy, Debug)]
pub struct Common {
    name: &'static str,
}

pub fn common_table() -> Common {
    Common { name: "common" }
}

/// Non-reachability: `(async stop)` style exhaustion or `inv`.
pub fn nonreach_table() -> Common {
    Common { name: "nonreach" }
}

/// Simulation and bisimulation: `decproc` or `coinv`.
pub fn sim_table() -> Common {
    Common { name: "sim" }
}

/// The certificate an asynchronous certificate hands to `decide`.
pub(crate) fn async_inner(c: &Cert) -> Option<Cert> {
    match c {
        Cert::Async(x) => Some((**x).clone()),
        Cert::Bipole(n) => Some(Cert::sync(Cert::bipole(n - 1))),
        Cert::Decproc => Some(Cert::sync(Cert::Decproc)),
        _ => None,
    }
}

fn is_invariant(c: &Cert) -> bool {
    matches!(c, Cert::Inv(..) | Cert::CoInv(..))
}

impl FpcTable for Common {
    fn name(&self) -> &str {
        self.name
    }

    fn clerk(&self, kind: Clerk, cert: &Cert) -> Vec<Cert> {
        let unfold = matches!(kind, Clerk::MuUnfoldL | Clerk::NuUnfoldR);
        if async_inner(cert).is_some() || (is_invariant(cert) && !unfold) {
            vec![cert.clone()]
        } else {
            Vec::new()
        }
    }

    fn clerk_split(&self, _kind: ClerkSplit, cert: &Cert) -> Vec<(Cert, Cert)> {
        if async_inner(cert).is_some() || is_invariant(cert) {
            vec![(cert.clone(), cert.clone())]
        } else {
            Vec::new()
        }
    }

    fn clerk_abs(&self, _kind: ClerkAbs, cert: &Cert) -> Vec<CertAbs> {
        if async_inner(cert).is_some() || is_invariant(cert) {
            vec![CertAbs::constant(cert.clone())]
        } else {
            Vec::new()
        }
    }

    fn ind(&self, cert: &Cert, _fixed_point: &Formula) -> Vec<Induction> {
        match cert {
            Cert::Inv(s, k) => vec![Induction {
                invariant: s.clone(),
                closure: CertAbs::constant(Cert::Bipole(1)),
                cont: (**k).clone(),
            }],
            _ => Vec::new(),
        }
    }

    fn coind(&self, cert: &Cert, _fixed_point: &Formula) -> Vec<Induction> {
        match cert {
            Cert::CoInv(s, k) => vec![Induction {
                invariant: s.clone(),
                closure: CertAbs::constant(Cert::Bipole(1)),
                cont: (**k).clone(),
            }],
            _ => Vec::new(),
        }
    }

    fn expert(&self, kind: Expert, cert: &Cert) -> Vec<Cert> {
        let Cert::Sync(inner) = cert else {
            return Vec::new();
        };
        match kind {
            Expert::MuUnfoldR | Expert::NuUnfoldL => vec![cert.clone()],
            Expert::ReleaseL | Expert::ReleaseR => vec![(**inner).clone()],
        }
    }

    fn expert_split(&self, _kind: ExpertSplit, cert: &Cert) -> Vec<(Cert, Cert)> {
        match cert {
            Cert::Sync(_) => vec![(cert.clone(), cert.clone())],
            _ => Vec::new(),
        }
    }

    fn expert_choice(&self, _kind: ExpertChoice, cert: &Cert) -> Vec<(Cert, u8)> {
        match cert {
            Cert::Sync(_) => vec![(cert.clone(), 1), (cert.clone(), 2)],
            _ => Vec::new(),
        }
    }

    fn expert_witness(&self, _kind: ExpertWitness, cert: &Cert) -> Vec<(Cert, Witness)> {
        match cert {
            Cert::Sync(_) => vec![(cert.clone(), Witness::Fresh)],
            _ => Vec::new(),
        }
    }

    fn decide(&self, _side: Side, cert: &Cert, _stored: &Formula) -> Vec<Cert> {
        async_inner(cert).into_iter().collect()
    }
}
