//! The trusted nucleus: the only code that builds or takes apart judgments.

mod atom;
mod context;
mod judgment;
pub mod json;
mod print;
mod proof;
mod signature;
mod term;

pub use atom::{Atom, AtomSet, Name};
pub use context::{Context, Entry};
pub use judgment::*;
pub use print::{print_judgment, print_term, Printer};
pub use proof::{CertSet, Proof, ProofNode, Rule};
pub use signature::{ConstantDecl, Signature};
pub use term::{Binder, Term, TermKind};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NucleusError {
    #[error("constant {0} is already declared")]
    DuplicateConstant(String),
    #[error("the type of a constant must be closed")]
    NonClosedType,
    #[error("expected a type")]
    NotAType,
    #[error("unknown constant {0}")]
    UnknownConstant(String),
    #[error("atom {0} is not in the context")]
    AtomNotInContext(String),
    #[error("cannot abstract {atom}: hypothesis {dependent} depends on it")]
    DependencyOnAbstractedAtom { atom: String, dependent: String },
    #[error("expected a term of a product type")]
    NotAProduct,
    #[error("argument type does not match the domain")]
    ArgTypeMismatch,
    #[error("cannot join contexts: {0} has different types")]
    JoinFailure(String),
    #[error("cyclic dependency through {0}")]
    CyclicContext(String),
    #[error("types do not match")]
    TypeMismatch,
    #[error("expected an equation")]
    NotAnEquation,
    #[error("the equation does not start at the type of the term")]
    LhsMismatch,
    #[error("not a β-redex: {0}")]
    NotARedex(&'static str),
    #[error("congruence premise mismatch: {0}")]
    PremiseMismatch(&'static str),
    #[error("expected an atom")]
    NotAnAtom,
}

pub type Result<T> = std::result::Result<T, NucleusError>;
