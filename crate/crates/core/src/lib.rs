//! An LCF-style proof assistant for dependent type theory with equality reflection.

pub mod cli;
pub mod mltype;
pub mod nucleus;
pub mod oracle;
pub mod runtime;
pub mod session;
pub mod stdlib;
pub mod syntax;
