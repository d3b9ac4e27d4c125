//! Syntactic closure-under-stuttering prover.
//!
//! [`analyze`] either proves a formula closed under stuttering, returning a
//! [`ProofTree`], or gives up with the subformulas it could not discharge.
//! It is sound but not complete: `Unknown` never means "not closed".

mod check;
mod proof;
mod prove;

pub use check::{check_proof, ProofCheckError};
pub use proof::{render_proof, ProofDocError, ProofFormat, ProofTree, RuleName};
pub use prove::Analyzer;

use crate::ast::Formula;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Closed(ProofTree),
    /// Subformulas no rule could discharge; never empty.
    Unknown(Vec<Formula>),
}

impl Verdict {
    pub fn is_closed(&self) -> bool {
        matches!(self, Verdict::Closed(_))
    }

    pub fn proof(&self) -> Option<&ProofTree> {
        match self {
            Verdict::Closed(p) => Some(p),
            Verdict::Unknown(_) => None,
        }
    }

    pub fn blockers(&self) -> &[Formula] {
        match self {
            Verdict::Closed(_) => &[],
            Verdict::Unknown(b) => b,
        }
    }
}

/// Tries to prove `f` closed under stuttering.
pub fn analyze(f: &Formula) -> Verdict {
    Analyzer::new().analyze(f)
}
