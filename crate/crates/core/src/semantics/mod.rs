//! Lasso traces and the interpretation of formulas on them.
//!
//! A lasso `stem . loop^w` denotes an ultimately periodic infinite word.
//! Every suffix starting at or after the stem is one of the `looplen`
//! suffixes starting inside the first loop copy, so a position `p` can be
//! normalized into `0..stemlen + looplen` without changing any truth value.
//!
//! Quantifiers only need to look at positions `p..stemlen + 2 * looplen` for a
//! normalized `p`. That window reaches every distinct suffix reachable from
//! `p`. For until, a minimal witness exists whenever any witness does, and
//! the minimal one never lies more than a full period past the first loop
//! position at or after `p`: a later witness repeats one period earlier, and
//! the left operand holding up to the later witness also holds up to the
//! earlier one.

mod eval;
pub(crate) mod label;
mod trace;

use thiserror::Error;

pub use eval::{eval, eval_at, Resolved};
pub use label::{eval_oracle, LabelOracle};
pub use trace::{LassoTrace, State, TraceDoc, TraceError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("formula mentions atom `{0}` which the trace does not define")]
    UnknownAtom(String),
}
