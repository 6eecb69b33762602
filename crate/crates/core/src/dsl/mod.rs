//! Instance files: a small declarative language for carriers, spaces,
//! simple functions and representations, plus directives that run the
//! checkers and computations and collect a JSON report.
//!
//! ```text
//! carrier X = {p, q, r};
//! space D = dirac(X, p);
//! check pms D;
//! integrate D [(2, [1,1,0]), (3, [0,1,1])];
//! ```

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod run;

use std::fmt;

use serde::Serialize;

pub use ast::{Pos, Program};
pub use parser::parse;
pub use run::{run, Mode, Report, RunConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    Lex,
    Syntax,
    Resolution,
    Arity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DslError {
    pub kind: ErrorKind,
    pub pos: Pos,
    pub message: String,
}

impl DslError {
    fn new(kind: ErrorKind, pos: Pos, message: String) -> Self {
        DslError { kind, pos, message }
    }

    pub(crate) fn lex(pos: Pos, message: String) -> Self {
        Self::new(ErrorKind::Lex, pos, message)
    }

    pub(crate) fn syntax(pos: Pos, message: String) -> Self {
        Self::new(ErrorKind::Syntax, pos, message)
    }

    pub(crate) fn resolution(pos: Pos, message: String) -> Self {
        Self::new(ErrorKind::Resolution, pos, message)
    }

    pub(crate) fn arity(pos: Pos, message: String) -> Self {
        Self::new(ErrorKind::Arity, pos, message)
    }
}

impl fmt::Display for DslError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ErrorKind::Lex => "lexical",
            ErrorKind::Syntax => "syntax",
            ErrorKind::Resolution => "resolution",
            ErrorKind::Arity => "arity",
        };
        write!(f, "{kind} error at {}: {}", self.pos, self.message)
    }
}

impl std::error::Error for DslError {}
