//! Text format for problem statements, canonical printing, and the JSON
//! result schema.
//!
//! A document declares three algebras — the two sides of the product and
//! the amalgam — and one embedding block per side:
//!
//! ```text
//! algebra A {
//!   summand a0 { kind = ifgf(2); weight = 1; }
//! }
//!
//! algebra B {
//!   summand b0 { kind = ifgf(2); weight = 1; }
//! }
//!
//! algebra D {
//!   summand d0 { kind = matrix(1); weight = 1; }
//! }
//!
//! embed D into A {
//!   d0 -> { a0: trace 1 };
//! }
//!
//! embed D into B {
//!   d0 -> { b0: trace 1 };
//! }
//! ```
//!
//! All numbers are exact: integers or rationals `p/q`; decimals are
//! rejected at the lexer. `inf` is accepted only as an `ifgf` parameter.
//! Parsing and printing are inverse on canonically formatted documents;
//! semantic rules (weights summing to 1, unital trace-compatible
//! embeddings) are enforced by the model's validation, not the grammar.

mod json;
mod lexer;
mod parser;
mod printer;

pub use json::result_to_json;
pub use lexer::Pos;
pub use parser::{
    parse_problem, AlgebraDecl, CellDecl, EmbedDecl, EmbedRow, ProblemDoc, SummandDecl,
};
pub use printer::print_problem;

use serde::Serialize;
use std::fmt;

/// A source-anchored parse failure; line and column are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub line: usize,
    pub col: usize,
    pub message: String,
    pub hint: Option<String>,
}

impl Diagnostic {
    pub fn new(pos: Pos, message: impl Into<String>) -> Self {
        Diagnostic {
            line: pos.line,
            col: pos.col,
            message: message.into(),
            hint: None,
        }
    }

    pub fn with_hint(mut self, hint: impl Into<String>) -> Self {
        self.hint = Some(hint.into());
        self
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)?;
        if let Some(h) = &self.hint {
            write!(f, "\n  hint: {h}")?;
        }
        Ok(())
    }
}
