//! Concrete syntax of AML: lexing, parsing and name resolution.

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod resolve;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("{line}:{col}: {msg}")]
    Lex { line: u32, col: u32, msg: String },
    #[error("{line}:{col}: expected {expected}, found {found}")]
    Parse { line: u32, col: u32, expected: String, found: String },
    #[error("{line}:{col}: {msg}")]
    Scope { line: u32, col: u32, msg: String },
}

/// Parses a whole file into top-level commands.
pub fn parse_file(src: &str) -> Result<Vec<ast::Top>, SyntaxError> {
    let toks = lexer::tokenize(src)?;
    parser::Parser::new(toks).file()
}
