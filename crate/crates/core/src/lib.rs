//! Quantum circuit construction and simulation for local-adaptive-threshold
//! segmentation of NEQR-encoded grayscale images.
//!
//! The crate builds the full segmentation circuit out of reversible
//! arithmetic fragments (comparator, subtractor, compare-swap), simulates it
//! on a branch-map or dense state-vector backend, decodes the result back
//! into a binary image, and audits gate counts under a weighted cost model.
//! A classical reference implementation of the same segmentation ([`oracle`])
//! provides the ground truth every quantum run is checked against.
//!
//! ```
//! use qimseg::{segment, GrayImage, PipelineConfig};
//!
//! let img = GrayImage::new(1, 2, vec![0, 1, 2, 3]).unwrap();
//! let config = PipelineConfig { z: 0, ..Default::default() };
//! let outcome = segment(&img, &config).unwrap();
//! // per-pixel threshold = window median (z = 0); pixel (0,0) sits below it
//! assert!(!outcome.binary.bit(0, 0));
//! assert!(outcome.binary.bit(1, 1));
//! ```

pub mod arith;
pub mod cost;
pub mod neqr;
pub mod oracle;
pub mod pipeline;
pub mod shift;
pub mod sim;

pub use arith::{AncillaSet, BuildError, RegisterRef};
pub use cost::{audit_cost, cost_of_gate, CostReport};
pub use neqr::{BinaryImage, GrayImage, ImageError, RegisterLayout};
pub use oracle::{Mse, OracleError, WindowShape};
pub use pipeline::{
    run_pipeline, segment, PipelineConfig, PipelineError, PipelineRun, SegmentOutcome,
    ThresholdTrace,
};
pub use sim::{Backend, Circuit, GateKind, GateOp, SimError, State};
