//! Quantitative confidence logic: a three-valued proof calculus for
//! reasoning about component reliability, with fault-tree translation and
//! verification-budget allocation built on top.

pub mod allocator;
pub mod confidence;
pub mod confidence_fn;
pub mod error;
pub mod experiments;
pub mod fault_tree;
pub mod formula;
pub mod proof;
pub mod rules;
pub mod semantics;

pub use allocator::{AllocationProblem, AllocationResult, SaParams, Solver, Strategy};
pub use confidence::{Confidence, TOLERANCE};
pub use confidence_fn::{Builtin, ComponentModel, ConfidenceExpr};
pub use error::{Error, Result};
pub use fault_tree::{FaultTree, ReliabilityPolynomial};
pub use formula::Formula;
pub use proof::{Context, Derivation, ProofShape, ProofTree, Sequent};
pub use rules::Rule;

/// Rounds to 9 significant digits, the precision of every number this crate
/// writes to allocation JSON or CSV.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.8e}").parse().expect("formatted float parses")
}
