//! The reference problems shipped with the checker and the expected verdict of
//! each example certificate on them.

pub const SMALL: &str = include_str!("../data/small.graph");
pub const BRANCHING: &str = include_str!("../data/branching.lts");
pub const CYCLES: &str = include_str!("../data/cycles.lts");

pub const INV_BD: &str =
    "(inv (lam (x y) (imp (or (and+ (= x b) (= y d)) (and+ (= x c) (= y d))) false-)) (bipole 1))";
pub const COINV_21_23: &str =
    "(coinv (lam (x y) (or (and+ (= x 21) (= y 23)) (and+ (= x 22) (= y 24)))) (bipole 1))";

/// `{1,3} ⊆ {1,2,3}` as a formula over numerals.
pub const SUBSET: &str =
    "(forall (x) (imp (or (= x 1) (= x 3)) (or (= x 1) (= x 2) (= x 3))))";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expect {
    Accept,
    Reject,
    /// The certificate does not parse for this kind of claim.
    BadCert,
}

#[derive(Clone, Copy, Debug)]
pub enum Subject {
    /// A claim about a problem file, checked with the claim's own table.
    Claim { problem: &'static str, claim: &'static str },
    /// A bare formula, checked with the common table.
    Formula(&'static str),
}

#[derive(Clone, Copy, Debug)]
pub struct Example {
    pub name: &'static str,
    pub subject: Subject,
    pub cert: &'static str,
    pub expect: Expect,
}

const fn claim(
    name: &'static str,
    problem: &'static str,
    claim: &'static str,
    cert: &'static str,
    expect: Expect,
) -> Example {
    Example {
        name,
        subject: Subject::Claim { problem, claim },
        cert,
        expect,
    }
}

pub const EXAMPLES: &[Example] = &[
    claim("reach-a-c", SMALL, "reach a c", "(path (b))", Expect::Accept),
    claim("reach-a-c-loop", SMALL, "reach a c", "(path (b c b))", Expect::Accept),
    claim("unreach-d-a", SMALL, "unreach d a", "(async stop)", Expect::Accept),
    claim("unreach-b-d", SMALL, "unreach b d", INV_BD, Expect::Accept),
    claim("sim-1-6", BRANCHING, "sim 1 6", "decproc", Expect::Accept),
    claim(
        "unsim-6-1",
        BRANCHING,
        "unsim 6 1",
        "(hml (dia a (and (dia b tt) (dia c tt))))",
        Expect::Accept,
    ),
    claim(
        "unbisim-6-10",
        BRANCHING,
        "unbisim 6 10",
        "(hml (dia a (not (dia b tt))))",
        Expect::Accept,
    ),
    claim("sim-21-23", CYCLES, "sim 21 23", COINV_21_23, Expect::Accept),
    Example {
        name: "subset",
        subject: Subject::Formula(SUBSET),
        cert: "decproc",
        expect: Expect::Accept,
    },
    claim("reach-a-c-bad-path", SMALL, "reach a c", "(path (c))", Expect::Reject),
    claim("unreach-a-d-misapplied", SMALL, "unreach a d", INV_BD, Expect::Reject),
    claim("unsim-6-1-weak", BRANCHING, "unsim 6 1", "(hml (dia a tt))", Expect::Reject),
    claim(
        "unbisim-6-6",
        BRANCHING,
        "unbisim 6 6",
        "(hml (dia a (not (dia b tt))))",
        Expect::Reject,
    ),
    claim("unbisim-6-6-dia", BRANCHING, "unbisim 6 6", "(hml (dia a tt))", Expect::Reject),
    claim(
        "unsim-neg-dia",
        BRANCHING,
        "unsim 6 10",
        "(hml (dia a (not (dia b tt))))",
        Expect::BadCert,
    ),
];
