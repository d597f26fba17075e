//! Linear regression when a sparse subset of the response–predictor pairs
//! has been scrambled by an unknown permutation.
//!
//! * [`model`]: the sparsely permuted model, seeded data generation and
//!   permutation algebra.
//! * [`solvers`]: least squares, the convex robust relaxation, LAD, the
//!   exact brute-force estimator and the single-predictor sorting estimator.
//! * [`recovery`]: support estimation, refitting and permutation recovery.
//! * [`theory`]: closed-form error bounds and SNR thresholds.
//! * [`harness`]: Monte-Carlo experiments and result emission.
//! * [`oracle`]: slow reference solvers for cross-checking.

pub mod error;
pub mod harness;
mod linalg;
pub mod model;
pub mod oracle;
pub mod recovery;
pub mod solvers;
pub mod theory;

pub use error::{Error, Result};
pub use model::{
    apply_permutation, generate_design, sample_sparse_permutation, snr, synthesize,
    synthesize_with_beta, DesignMatrix, GroundTruth, ObservationSet, SimulationSpec,
    SparsePermutation,
};
