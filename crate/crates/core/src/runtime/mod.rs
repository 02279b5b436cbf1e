//! The AML interpreter: bidirectional evaluation of judgment computations,
//! operations with deep handlers, dynamic variables and references.

mod builtins;
mod effects;
mod eval;
mod implicit;
mod pattern;
mod value;

pub use effects::{on_big_stack, Request};
pub use builtins::names as builtin_names;
pub use eval::{rec_values, Interp, Mode, State, DYNAMICS};
pub use value::{Env, Value};

use crate::nucleus::NucleusError;
use crate::stdlib::StdlibError;
use crate::syntax::lexer::Span;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ErrorKind {
    #[error(transparent)]
    Nucleus(#[from] NucleusError),
    #[error(transparent)]
    Stdlib(#[from] StdlibError),
    #[error("unbound variable {0}")]
    Unbound(String),
    #[error("unbound dynamic variable {0}")]
    UnboundDynamic(String),
    #[error("unhandled operation {0}")]
    UnhandledOperation(String),
    #[error("a continuation was resumed twice")]
    ContinuationReuse,
    #[error("yield outside of an operation clause")]
    YieldOutside,
    #[error("the handler of {op} answered with a bad witness: {msg}")]
    BadWitness { op: String, msg: String },
    #[error("cannot coerce {term} to {target}")]
    CoercionFailed { term: String, target: String },
    #[error("cannot show {0}")]
    NotEqual(String),
    #[error("{0} is not a product type")]
    NotAProduct(String),
    #[error("{0} is not an equality type")]
    NotAnEqType(String),
    #[error("no pattern matches {0}")]
    MatchFailure(String),
    #[error("expected {expected}, got {got}")]
    Expected { expected: &'static str, got: String },
    #[error("cannot infer the type of {0}")]
    CannotInfer(String),
    #[error("unresolved implicit argument of type {0}")]
    UnresolvedImplicit(String),
    #[error("evaluation nested too deeply")]
    TooDeep,
    #[error("{0}")]
    Failure(String),
    #[error("internal error: {0}")]
    Internal(String),
}

/// A runtime error with the innermost source position it arose at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Error {
    pub kind: ErrorKind,
    pub span: Option<Span>,
}

impl Error {
    pub fn new(kind: ErrorKind) -> Error {
        Error { kind, span: None }
    }

    pub fn at(mut self, span: Span) -> Error {
        if self.span.is_none() && span != Span::default() {
            self.span = Some(span);
        }
        self
    }
}

impl std::error::Error for Error {}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.span {
            Some(s) => write!(f, "{s}: {}", self.kind),
            None => write!(f, "{}", self.kind),
        }
    }
}

impl From<ErrorKind> for Error {
    fn from(k: ErrorKind) -> Error {
        Error::new(k)
    }
}

impl From<NucleusError> for Error {
    fn from(e: NucleusError) -> Error {
        Error::new(e.into())
    }
}

impl From<StdlibError> for Error {
    fn from(e: StdlibError) -> Error {
        Error::new(e.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Lexical and dynamic bindings of one evaluation.
#[derive(Clone, Default)]
pub struct Ctx {
    pub env: Env,
    pub dyns: Env,
}
