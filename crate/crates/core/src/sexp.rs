//! Minimal s-expression reader shared by the formula, certificate and
//! goal syntaxes. `;` starts a comment running to end of line.

use std::fmt;

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("unexpected end of input")]
    UnexpectedEof,
    #[error("unexpected `)` at byte {0}")]
    UnexpectedClose(usize),
    #[error("trailing input after expression at byte {0}")]
    Trailing(usize),
    #[error("{0}")]
    Malformed(String),
}

impl Sexp {
    pub fn atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom(a) => Some(a),
            Sexp::List(_) => None,
        }
    }

    pub fn list(&self) -> Option<&[Sexp]> {
        match self {
            Sexp::List(items) => Some(items),
            Sexp::Atom(_) => None,
        }
    }

    /// `(head rest...)` with an atomic head.
    pub fn head(&self) -> Option<(&str, &[Sexp])> {
        match self {
            Sexp::List(items) => match items.split_first() {
                Some((Sexp::Atom(h), rest)) => Some((h, rest)),
                _ => None,
            },
            Sexp::Atom(_) => None,
        }
    }
}

impl fmt::Display for Sexp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sexp::Atom(a) => write!(f, "{a}"),
            Sexp::List(items) => {
                write!(f, "(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{item}")?;
                }
                write!(f, ")")
            }
        }
    }
}

pub fn malformed(msg: impl Into<String>) -> SyntaxError {
    SyntaxError::Malformed(msg.into())
}

/// Parses exactly one expression.
pub fn parse(src: &str) -> Result<Sexp, SyntaxError> {
    let mut all = parse_many(src)?;
    match all.len() {
        0 => Err(SyntaxError::UnexpectedEof),
        1 => Ok(all.pop().unwrap()),
        _ => Err(SyntaxError::Trailing(0)),
    }
}

pub fn parse_many(src: &str) -> Result<Vec<Sexp>, SyntaxError> {
    let mut stack: Vec<Vec<Sexp>> = vec![Vec::new()];
    let bytes = src.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b'(' => {
                stack.push(Vec::new());
                i += 1;
            }
            b')' => {
                if stack.len() < 2 {
                    return Err(SyntaxError::UnexpectedClose(i));
                }
                let done = stack.pop().unwrap();
                stack.last_mut().unwrap().push(Sexp::List(done));
                i += 1;
            }
            b';' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            c if c.is_ascii_whitespace() => i += 1,
            _ => {
                let start = i;
                while i < bytes.len()
                    && !bytes[i].is_ascii_whitespace()
                    && !matches!(bytes[i], b'(' | b')' | b';')
                {
                    i += 1;
                }
                stack
                    .last_mut()
                    .unwrap()
                    .push(Sexp::Atom(src[start..i].to_string()));
            }
        }
    }
    if stack.len() != 1 {
        return Err(SyntaxError::UnexpectedEof);
    }
    Ok(stack.pop().unwrap())
}
