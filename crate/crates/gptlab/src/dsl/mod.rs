//! A small textual language for circuits (`.gpc` files), so experiments are
//! reproducible from fixtures.
//!
//! ```text
//! theory boxworld
//! system A:gbit
//! system B:gbit
//! prepare pr() -> A, B
//! measure fiducial(1) A -> a
//! measure fiducial(1) B -> b
//! accept a xor b == 1
//! ```
//!
//! Statements are separated by newlines or `;`. Keywords: `theory`, `system`,
//! `prepare`, `apply`, `measure`, `aux`, `accept`, `post-select`. Accept
//! expressions are Boolean over outcome variables with `xor`, `and`, `or`,
//! `not`, `==` and integer literals; `==` binds loosest, then `or`, `and`,
//! `xor`, `not`. Numeric constructor arguments are integers or rationals
//! `p/q`. `#` starts a line comment.

mod ast;
mod genast;
mod lexer;
mod parser;
mod printer;
mod resolve;
mod validate;

pub use ast::{Arg, BoolAst, CircuitAst, Ctor, Stmt, StmtKind};
pub use genast::random_ast;
pub use parser::{parse, parse_ctor};
pub use printer::print;
pub use resolve::{resolve_measurement, resolve_state};
pub use validate::{validate, validate_with_bindings};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DslError {
    #[error("{line}:{col}: lexical error: {msg}")]
    Lex {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("{line}:{col}: syntax error: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("line {line}: {kind}: {msg}")]
    Validate {
        line: usize,
        kind: ValidateKind,
        msg: String,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ValidateKind {
    UnknownSystem,
    UnknownGate,
    UnknownConstructor,
    TypeMismatch,
    UnboundVariable,
    DuplicateBinding,
    WireUnavailable,
    Unphysical,
    Arity,
}

impl std::fmt::Display for ValidateKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ValidateKind::UnknownSystem => "unknown system",
            ValidateKind::UnknownGate => "unknown gate",
            ValidateKind::UnknownConstructor => "unknown constructor",
            ValidateKind::TypeMismatch => "type mismatch",
            ValidateKind::UnboundVariable => "unbound variable",
            ValidateKind::DuplicateBinding => "duplicate binding",
            ValidateKind::WireUnavailable => "wire unavailable",
            ValidateKind::Unphysical => "unphysical state",
            ValidateKind::Arity => "arity mismatch",
        };
        write!(f, "{s}")
    }
}

#[cfg(test)]
mod tests;
