//! Concrete syntax: lexing, parsing and printing for LF signatures and
//! judgments and for hereditary Harrop programs.

mod hh_parser;
mod lexer;
mod lf_parser;
pub mod print;

use thiserror::Error;

pub use hh_parser::{
    parse_clause, parse_goal, parse_program, parse_simple_type, parse_sterm, HHScope, ParsedProgram,
};
pub use lexer::Pos;
pub use lf_parser::{
    parse_family, parse_judgment, parse_kind, parse_object, parse_signature, SourceSignature,
};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("expected {}, found {found}", .expected.join(" or "))]
    Syntax { expected: Vec<String>, found: String },
    #[error("unbound name `{0}`")]
    UnboundName(String),
    #[error("{0}")]
    Malformed(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub(crate) fn syntax(pos: Pos, expected: Vec<String>, found: String) -> Self {
        ParseError { line: pos.line, col: pos.col, kind: ParseErrorKind::Syntax { expected, found } }
    }

    pub(crate) fn unbound(pos: Pos, name: &str) -> Self {
        ParseError { line: pos.line, col: pos.col, kind: ParseErrorKind::UnboundName(name.to_string()) }
    }

    pub(crate) fn malformed(pos: Pos, msg: impl Into<String>) -> Self {
        ParseError { line: pos.line, col: pos.col, kind: ParseErrorKind::Malformed(msg.into()) }
    }

    pub fn is_unbound_name(&self) -> bool {
        matches!(self.kind, ParseErrorKind::UnboundName(_))
    }
}
