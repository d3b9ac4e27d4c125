//! Concrete ASCII syntax.
//!
//! Precedence from tightest to loosest: prefix operators (`!`, `X`, `G`,
//! `F`, `up`, `down`, `edge`), `U` (right-assoc), `&`, `|` (both
//! left-assoc), `->` and `<->` (both right-assoc).

mod lexer;
mod parser;
mod render;

use std::fmt;

use thiserror::Error;

pub use parser::parse;
pub use render::render;

/// Character offsets `start..end` into the parsed text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        SourceSpan { start, end }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    InvalidIdentifier(String),
    ReservedWord(String),
    UnexpectedToken { found: String, expected: &'static str },
    UnexpectedEnd { expected: &'static str },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at {span}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: SourceSpan,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character {c:?}"),
            ParseErrorKind::InvalidIdentifier(s) => {
                write!(f, "invalid identifier `{s}` (atoms match [a-z][a-z0-9_]*)")
            }
            ParseErrorKind::ReservedWord(s) => write!(f, "reserved word `{s}` used as an atom"),
            ParseErrorKind::UnexpectedToken { found, expected } => {
                write!(f, "expected {expected}, found `{found}`")
            }
            ParseErrorKind::UnexpectedEnd { expected } => {
                write!(f, "expected {expected}, found end of input")
            }
        }
    }
}
