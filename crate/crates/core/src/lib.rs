//! LTL with edge operators.
//!
//! Formulas are evaluated on lasso traces, checked for closure under
//! stuttering by a syntactic prover that emits proof trees, and refuted by a
//! bounded enumeration of stuttering counterexamples. The Existence
//! property-pattern catalog with edge-based variants ships built in.

pub mod analyzer;
pub mod ast;
pub mod falsifier;
pub mod generate;
pub mod patterns;
pub mod rewrite;
pub mod semantics;
pub mod syntax;

pub use analyzer::{analyze, check_proof, render_proof, ProofFormat, ProofTree, RuleName, Verdict};
pub use ast::{atoms_of, desugar_edges, resugar_edges, AtomSet, Formula};
pub use falsifier::{falsify, minimize, Counterexample, FalsifyError, SearchBounds};
pub use rewrite::{normalize, rewrite_logic};
pub use semantics::{eval, eval_at, eval_oracle, EvalError, LassoTrace, State};
pub use syntax::{parse, render, ParseError, SourceSpan};
