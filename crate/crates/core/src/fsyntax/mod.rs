//! Church-style System F: syntax, parsing, printing and type checking.

mod check;
pub(crate) mod lexer;
mod parse;
mod print;
mod term;
mod types;

use thiserror::Error;

pub use check::typecheck_f;
pub use parse::{parse_open_term, parse_term, parse_type, Parsed};
pub use print::{print_open_term, print_term, print_type};
pub use term::{FTerm, SizeMetric};
pub use types::{FType, IdGen, TermVar, TyVar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        Self { line, col, message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("type mismatch in application: expected `{expected}`, found `{found}`")]
    Mismatch { expected: String, found: String },
    #[error("applying a term of non-arrow type `{found}`")]
    NotAFunction { found: String },
    #[error("type application to a term of non-universal type `{found}`")]
    NotAForall { found: String },
    #[error("eigenvariable condition violated: `{tyvar}` occurs in the type of free variable `{var}`")]
    Eigenvariable { tyvar: String, var: String },
    #[error("occurrence of `{var}` annotated `{found}` but bound at `{declared}`")]
    AnnotationMismatch { var: String, declared: String, found: String },
}

/// Structural size of a term.
pub fn term_size(term: &FTerm) -> SizeMetric {
    term.size()
}

/// Capture-avoiding `t[u/binder]`.
pub fn subst_type(t: &FType, binder: &TyVar, u: &FType) -> FType {
    t.subst(binder, u)
}
