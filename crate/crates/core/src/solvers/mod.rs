//! Estimators of the regression coefficients (and, for small problems, the
//! permutation).

pub mod exact;
pub mod lad;
pub mod lambda;
pub mod ols;
pub mod robust;
pub mod sorting;

pub use exact::{
    candidate_count, fit_exact_bruteforce, fit_exact_d1_sorting, ExactFit, DEFAULT_BUDGET,
    MAX_BRUTEFORCE_N,
};
pub use lad::{fit_lad, DEFAULT_SMOOTHING};
pub use lambda::{lambda_value, robust_scale, LambdaRule, HUBER_C};
pub use ols::{fit_ols, OlsFit};
pub use robust::{
    fit_robust, fit_robust_default, kkt_residual, robust_objective, soft_threshold, RobustFit,
    RobustOptions,
};
pub use sorting::sorted_matching;
