//! Reading and writing the textual formats: the system format (sorts,
//! signature, rules), pattern-set files, term/constraint printing and JSON
//! export.

pub mod json;
pub mod lexer;
pub mod parser;
pub mod printer;

pub use lexer::SourceSpan;
pub use parser::{parse_constrained_pattern, parse_lctrs, parse_patterns, Diagnostic};
