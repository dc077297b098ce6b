//! Gate-level circuit representation and the two simulation backends.
//!
//! Conventions used throughout the crate:
//! - basis labels are little-endian: qubit `i` is bit `i` of the label;
//! - all ancillas start in |0>;
//! - `RESET` is a guarded injective bit-clear: it relabels the support, never
//!   merges branches, and errors loudly if a merge would occur.

mod circuit;
mod dense;
mod error;
mod gate;
mod sparse;
mod state;

pub use circuit::Circuit;
pub use dense::DenseState;
pub use error::SimError;
pub use gate::{GateKind, GateOp};
pub use sparse::{SparseState, PRUNE_EPS};
pub use state::{run, run_with_dense_limit, Backend, State, DEFAULT_DENSE_LIMIT};
