use std::sync::Arc;

use thiserror::Error;

use crate::sexp::{self, Sexp, SyntaxError};
use crate::terms::{pred_expr_from_sexp, Symbol};

use super::{Assertion, Cert, DiaItem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("negated diamonds are not allowed in a non-simulation certificate")]
    NegDiaUnderUnsim,
    #[error("bipole depth must be a positive integer, got `{0}`")]
    BadBipole(String),
    #[error("unknown certificate `{0}`")]
    Unknown(String),
}

/// Grammar restriction applied while parsing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CertMode {
    #[default]
    General,
    /// Assertions must be built from diamonds and conjunctions only.
    Unsim,
}

pub fn parse_cert(src: &str, mode: CertMode) -> Result<Cert, CertError> {
    cert(&sexp::parse(src)?, mode)
}

pub fn parse_assertion(src: &str, mode: CertMode) -> Result<Assertion, CertError> {
    assertion(&sexp::parse(src)?, mode)
}

fn cert(sx: &Sexp, mode: CertMode) -> Result<Cert, CertError> {
    if let Some(a) = sx.atom() {
        return match a {
            "stop" => Ok(Cert::Stop),
            "decproc" => Ok(Cert::Decproc),
            "bipole" => Ok(Cert::Bipole(1)),
            _ => Err(CertError::Unknown(a.to_string())),
        };
    }
    let Some((head, rest)) = sx.head() else {
        return Err(CertError::Unknown(sx.to_string()));
    };
    match (head, rest) {
        ("sync", [c]) => Ok(Cert::sync(cert(c, mode)?)),
        ("async", [c]) => Ok(Cert::async_(cert(c, mode)?)),
        ("bipole", [n]) => {
            let text = n.to_string();
            match text.parse::<u32>() {
                Ok(n) if n >= 1 => Ok(Cert::Bipole(n)),
                _ => Err(CertError::BadBipole(text)),
            }
        }
        ("inv", [s, c]) => Ok(Cert::Inv(
            Arc::new(pred_expr_from_sexp(s)?),
            Arc::new(cert(c, mode)?),
        )),
        ("coinv", [s, c]) => Ok(Cert::CoInv(
            Arc::new(pred_expr_from_sexp(s)?),
            Arc::new(cert(c, mode)?),
        )),
        ("path", [nodes]) => {
            let items = nodes
                .list()
                .ok_or_else(|| sexp::malformed("path expects a list of nodes"))?;
            let names = items
                .iter()
                .map(|n| {
                    n.atom()
                        .map(Symbol::from)
                        .ok_or_else(|| sexp::malformed("path nodes must be names"))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Cert::Path(names))
        }
        ("hml", [a]) => Ok(Cert::Hml(assertion(a, mode)?)),
        _ => Err(CertError::Unknown(sx.to_string())),
    }
}

fn assertion(sx: &Sexp, mode: CertMode) -> Result<Assertion, CertError> {
    if sx.atom() == Some("tt") {
        return Ok(Assertion::tt());
    }
    let bad = || CertError::Syntax(sexp::malformed(format!("bad assertion `{sx}`")));
    let (head, rest) = sx.head().ok_or_else(bad)?;
    match (head, rest) {
        ("and", parts) => Ok(Assertion::and(
            parts
                .iter()
                .map(|p| assertion(p, mode))
                .collect::<Result<_, _>>()?,
        )),
        ("dia", [label, body]) => {
            let label = label.atom().ok_or_else(bad)?;
            Ok(Assertion::dia(label, assertion(body, mode)?))
        }
        ("not", [inner]) => {
            if mode == CertMode::Unsim {
                return Err(CertError::NegDiaUnderUnsim);
            }
            match inner.head() {
                Some(("dia", [label, body])) => {
                    let label = label.atom().ok_or_else(bad)?;
                    Ok(Assertion(vec![DiaItem::NegDia(
                        label.into(),
                        assertion(body, mode)?,
                    )]))
                }
                _ => Err(bad()),
            }
        }
        _ => Err(bad()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for src in [
            "stop",
            "decproc",
            "(async stop)",
            "(sync (async stop))",
            "(bipole 3)",
            "(path (b c b))",
            "(path ())",
            "(hml tt)",
            "(hml (dia a (and (dia b tt) (dia c tt))))",
            "(hml (dia a (not (dia b tt))))",
            "(inv (lam (x y) (imp (or (and+ (= x b) (= y d)) (and+ (= x c) (= y d))) false-)) (bipole 1))",
            "(coinv (lam (x y) (or (and+ (= x 21) (= y 23)) (and+ (= x 22) (= y 24)))) (bipole 1))",
        ] {
            let c = parse_cert(src, CertMode::General).unwrap();
            assert_eq!(c.to_string(), src);
        }
    }

    #[test]
    fn nested_conjunctions_flatten() {
        let a = parse_assertion("(and (dia a tt) (and (dia b tt) (and)))", CertMode::General);
        assert_eq!(a.unwrap().to_string(), "(and (dia a tt) (dia b tt))");
    }

    #[test]
    fn unsim_rejects_negation() {
        let src = "(hml (dia a (not (dia b tt))))";
        assert_eq!(
            parse_cert(src, CertMode::Unsim),
            Err(CertError::NegDiaUnderUnsim)
        );
        assert!(parse_cert("(hml (dia a (dia b tt)))", CertMode::Unsim).is_ok());
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(
            parse_cert("(bipole 0)", CertMode::General),
            Err(CertError::BadBipole(_))
        ));
        assert!(parse_cert("(inv (lam x (= x a)) stop)", CertMode::General).is_err());
        assert!(matches!(
            parse_cert("frob", CertMode::General),
            Err(CertError::Unknown(_))
        ));
    }
}
