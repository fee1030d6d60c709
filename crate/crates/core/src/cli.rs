//! The `fpc-check` command line.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::encode::{goal, parse_problem, Claim, ClaimKind, EncodeError};
use crate::fpc::{self, parse_cert, CertError, CertMode, FpcTable};
use crate::golden::{Example, Expect, Subject, EXAMPLES};
use crate::kernel::{check, CheckConfig, CheckError, Verdict};
use crate::terms::parse_formula;
use crate::witness::certificate;

pub const EXIT_ACCEPTED: i32 = 0;
pub const EXIT_REJECTED: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_EXHAUSTED: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "fpc-check", version, about = "Check proof certificates for graph and transition-system claims")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a certificate for a claim.
    Check(CheckArgs),
    /// Print a certificate for a claim, if the claim holds.
    Witness(WitnessArgs),
    /// Check the bundled examples.
    Selftest,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    /// Problem file describing a graph or a transition system.
    #[arg(long)]
    pub problem: PathBuf,
    /// Claim such as "reach a c" or "unbisim 6 10".
    #[arg(long)]
    pub goal: String,
    /// Certificate text.
    #[arg(long, required_unless_present = "cert_file", conflicts_with = "cert_file")]
    pub cert: Option<String>,
    /// File holding the certificate.
    #[arg(long)]
    pub cert_file: Option<PathBuf>,
    /// Bound on the number of rules along one branch.
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u32).range(1..))]
    pub depth: u32,
    /// Certificate format; by default chosen from the claim.
    #[arg(long, value_enum, default_value_t = TableChoice::Auto)]
    pub table: TableChoice,
    #[arg(long, value_enum, default_value_t = TraceLevel::None)]
    pub trace: TraceLevel,
}

#[derive(Args, Debug)]
pub struct WitnessArgs {
    #[arg(long)]
    pub problem: PathBuf,
    #[arg(long)]
    pub goal: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableChoice {
    Auto,
    Common,
    Reach,
    Nonreach,
    Sim,
    Nonsim,
    Nonbisim,
}

impl TableChoice {
    fn table(self, kind: ClaimKind) -> Box<dyn FpcTable> {
        match self {
            TableChoice::Auto => kind.table(),
            TableChoice::Common => Box::new(fpc::common_table()),
            TableChoice::Reach => Box::new(fpc::reach_table()),
            TableChoice::Nonreach => Box::new(fpc::nonreach_table()),
            TableChoice::Sim => Box::new(fpc::sim_table()),
            TableChoice::Nonsim => Box::new(fpc::nonsim_table()),
            TableChoice::Nonbisim => Box::new(fpc::nonbisim_table()),
        }
    }

    fn cert_mode(self, kind: ClaimKind) -> CertMode {
        match self {
            TableChoice::Auto => kind.cert_mode(),
            TableChoice::Nonsim => CertMode::Unsim,
            _ => CertMode::General,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TraceLevel {
    None,
    Rules,
    Full,
}

#[derive(Debug, Error)]
enum InputError {
    #[error("{0}: {1}")]
    Io(PathBuf, std::io::Error),
    #[error("problem: {0}")]
    Encode(#[from] EncodeError),
    #[error("certificate: {0}")]
    Cert(#[from] CertError),
}

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|e| InputError::Io(path.to_owned(), e))
}

/// Runs a parsed command line, returning the exit status.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match cli.command {
        Command::Check(args) => cmd_check(&args, out, err),
        Command::Witness(args) => cmd_witness(&args, out, err),
        Command::Selftest => {
            if cmd_selftest(&|k| k.table(), out) {
                0
            } else {
                1
            }
        }
    }
}

pub fn cmd_check(args: &CheckArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let prepared = (|| {
        let problem = parse_problem(&read(&args.problem)?)?.problem;
        let claim = Claim::parse(&args.goal)?;
        let text = match (&args.cert, &args.cert_file) {
            (Some(c), _) => c.clone(),
            (None, Some(p)) => read(p)?,
            (None, None) => unreachable!("clap requires one of the two"),
        };
        let cert = parse_cert(&text, args.table.cert_mode(claim.kind))?;
        let g = goal(&claim, &problem)?;
        Ok::<_, InputError>((claim, cert, g))
    })();
    let (claim, cert, g) = match prepared {
        Ok(x) => x,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_ERROR;
        }
    };
    let table = args.table.table(claim.kind);
    let config = CheckConfig::with_depth(args.depth);
    match check(table.as_ref(), &cert, &g, &config) {
        Ok(Verdict::Accepted(proof)) => {
            let lines = match args.trace {
                TraceLevel::None => Vec::new(),
                TraceLevel::Rules => proof.trace.lines(),
                TraceLevel::Full => proof.trace.full_lines(),
            };
            for line in lines {
                let _ = writeln!(out, "{line}");
            }
            let _ = writeln!(out, "accepted");
            EXIT_ACCEPTED
        }
        Ok(Verdict::Rejected) => {
            let _ = writeln!(out, "rejected");
            EXIT_REJECTED
        }
        Err(e @ CheckError::ResourceExhausted { .. }) => {
            let _ = writeln!(out, "undecided: {e}");
            EXIT_EXHAUSTED
        }
        Err(e @ CheckError::InvariantViolation(_)) => {
            let _ = writeln!(out, "rejected: {e}");
            EXIT_REJECTED
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

pub fn cmd_witness(args: &WitnessArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let prepared = (|| {
        let problem = parse_problem(&read(&args.problem)?)?.problem;
        let claim = Claim::parse(&args.goal)?;
        goal(&claim, &problem)?;
        Ok::<_, InputError>((claim, problem))
    })();
    match prepared {
        Ok((claim, problem)) => match certificate(&claim, &problem) {
            Some(c) => {
                let _ = writeln!(out, "{c}");
                EXIT_ACCEPTED
            }
            None => {
                let _ = writeln!(out, "claim is false");
                EXIT_REJECTED
            }
        },
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

/// Outcome of one bundled example under the given table choice.
pub fn run_example(
    ex: &Example,
    table_for: &dyn Fn(ClaimKind) -> Box<dyn FpcTable>,
    config: &CheckConfig,
) -> Result<Expect, String> {
    let (table, mode, g) = match ex.subject {
        Subject::Claim { problem, claim } => {
            let problem = parse_problem(problem).map_err(|e| e.to_string())?.problem;
            let claim = Claim::parse(claim).map_err(|e| e.to_string())?;
            let g = goal(&claim, &problem).map_err(|e| e.to_string())?;
            (table_for(claim.kind), claim.kind.cert_mode(), g)
        }
        Subject::Formula(src) => {
            let g = parse_formula(src).map_err(|e| e.to_string())?;
            (Box::new(fpc::common_table()) as Box<dyn FpcTable>, CertMode::General, g)
        }
    };
    let cert = match parse_cert(ex.cert, mode) {
        Ok(c) => c,
        Err(_) => return Ok(Expect::BadCert),
    };
    match check(table.as_ref(), &cert, &g, config) {
        Ok(v) if v.is_accepted() => Ok(Expect::Accept),
        Ok(_) => Ok(Expect::Reject),
        Err(e) => Err(e.to_string()),
    }
}

/// Runs every bundled example, printing one line each. True when all of
/// them give the expected verdict.
pub fn cmd_selftest(table_for: &dyn Fn(ClaimKind) -> Box<dyn FpcTable>, out: &mut dyn Write) -> bool {
    let config = CheckConfig::default();
    let mut ok = true;
    for ex in EXAMPLES {
        let got = run_example(ex, table_for, &config);
        let pass = got.as_ref() == Ok(&ex.expect);
        ok &= pass;
        let status = if pass { "ok" } else { "FAIL" };
        let detail = match got {
            Ok(v) => format!("{v:?}"),
            Err(e) => e,
        };
        let _ = writeln!(out, "{status:4} {:24} {detail}", ex.name);
    }
    ok
}
