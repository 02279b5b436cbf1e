//! Equality checking and weak head-normalization driven by user hints.
//!
//! The prelude wires these into the global handlers for `equal`, `as_prod`,
//! `as_eq`, `coerce` and `coerce_fun`. Nothing here is trusted: every result is
//! an equation built by the nucleus.

mod engine;
mod hint;

pub use engine::Engine;
pub use hint::{spine as hint_spine, Hint, HintKind};

use crate::nucleus::{Name, NucleusError};
use std::collections::HashMap;
use std::rc::Rc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StdlibError {
    #[error(transparent)]
    Nucleus(#[from] NucleusError),
    #[error("step budget of {0} exhausted")]
    Budget(u64),
    #[error("equality checking nested too deeply")]
    TooDeep,
    #[error("malformed hint: {0}")]
    MalformedHint(String),
}

impl StdlibError {
    /// Errors that end the whole computation rather than one attempt.
    fn is_fatal(&self) -> bool {
        matches!(self, StdlibError::Budget(_) | StdlibError::TooDeep)
    }
}

pub type Result<T> = std::result::Result<T, StdlibError>;

/// The hint stores and reduction strategies in effect for one call.
#[derive(Clone, Default)]
pub struct Hints {
    pub betas: Vec<Rc<Hint>>,
    pub etas: Vec<Rc<Hint>>,
    pub general: Vec<Rc<Hint>>,
    /// Per constant, one flag per argument: `true` for eager.
    pub reducing: HashMap<Name, Vec<bool>>,
}
