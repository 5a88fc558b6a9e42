//! The monitor script language: declarations of signal variables and edge
//! labels, a default domain, and named (optionally parameterised) formulas.
//!
//! ```text
//! signal { int nodeType; real battery; real temperature; }
//! space { edges { int hop; real dist; } }
//! domain boolean;
//! formula atom = (nodeType == 3);
//! formula Ppar(int k) = atom reach(hop)[0, k] (nodeType == 1);
//! ```
//!
//! `#` starts a comment running to the end of the line. Intervals accept
//! `[a b]` and `[a, b]`; `inf` is an unbounded upper end.

pub mod ast;
pub mod check;
pub mod instantiate;
pub mod lexer;
pub mod parser;
mod printer;

use std::fmt;

use thiserror::Error;

pub use ast::{Formula, FormulaDef, Script};
pub use check::{type_check, CheckError, CheckErrors, CheckedScript};
pub use instantiate::{instantiate_formula, FormulaArgs, InstantiateError};
pub use parser::{parse_formula, parse_script};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Lexical,
    Syntax,
    Duplicate,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParseErrorKind::Lexical => "lexical error",
            ParseErrorKind::Syntax => "syntax error",
            ParseErrorKind::Duplicate => "duplicate name",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}: {message} (at `{token}`)")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub message: String,
    pub line: usize,
    pub column: usize,
    pub token: String,
}

impl ParseError {
    pub fn new(
        kind: ParseErrorKind,
        message: impl Into<String>,
        line: usize,
        column: usize,
        token: impl Into<String>,
    ) -> Self {
        ParseError {
            kind,
            message: message.into(),
            line,
            column,
            token: token.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScriptError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Check(#[from] CheckErrors),
}

/// Parses and checks in one step.
pub fn load_script(src: &str) -> Result<CheckedScript, ScriptError> {
    Ok(type_check(parse_script(src)?)?)
}
