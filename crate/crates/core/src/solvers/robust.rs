//! Robust regression with an explicit outlier vector.
//!
//! Solves
//!
//! ```text
//! minimize_{β, e}  (1/n) ‖y − Xβ − √n e‖₂² + λ ‖e‖₁
//! ```
//!
//! where `√n e` absorbs the gross errors caused by mismatched rows. The
//! objective is jointly convex and each block has a closed-form minimizer,
//! so we alternate:
//!
//! * β-step: `β ← argmin ‖(y − √n e) − Xβ‖₂²`, one QR solve with the
//!   factorization of `X` computed up front;
//! * e-step: with `r = y − Xβ`, coordinate `i` minimizes
//!   `(r_i/√n − e_i)² + λ|e_i|`, whose solution is
//!   `e_i = soft_threshold(r_i/√n, λ/2)`.
//!
//! Eliminating `e` shows the problem is Huber regression with threshold
//! `√n λ / 2` on the residual scale.
//!
//! Alternating alone moves `β` by about that threshold per sweep, which is
//! hopeless for small `λ`. The solver therefore interleaves damped
//! semismooth Newton steps on the Huber form and only falls back to a sweep
//! when a Newton step cannot decrease the objective. Both kinds of step are
//! monotone, and each completed step is one entry of the objective trace.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::LeastSquares;
use crate::model::DesignMatrix;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobustOptions {
    /// Stop once the relative objective decrease falls below this.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for RobustOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RobustFit {
    pub beta: Vec<f64>,
    pub e: Vec<f64>,
    pub lambda: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Objective after every completed sweep; non-increasing.
    pub objective_trace: Vec<f64>,
}

impl RobustFit {
    pub fn objective(&self) -> f64 {
        self.objective_trace.last().copied().unwrap_or(f64::NAN)
    }
}

/// `sign(z) · max(|z| − τ, 0)`.
pub fn soft_threshold(z: f64, tau: f64) -> f64 {
    debug_assert!(tau >= 0.0);
    if z > tau {
        z - tau
    } else if z < -tau {
        z + tau
    } else {
        0.0
    }
}

fn check_dims(x: &DesignMatrix, y: &[f64]) -> Result<()> {
    if y.len() != x.n() {
        return Err(Error::Dimension(format!(
            "response has {} entries, design has {} rows",
            y.len(),
            x.n()
        )));
    }
    Ok(())
}

fn objective_from(r: &DVector<f64>, e: &DVector<f64>, sqrt_n: f64, lambda: f64) -> f64 {
    let n = r.len() as f64;
    let fit: f64 = r
        .iter()
        .zip(e.iter())
        .map(|(ri, ei)| {
            let v = ri - sqrt_n * ei;
            v * v
        })
        .sum();
    fit / n + lambda * e.iter().map(|v| v.abs()).sum::<f64>()
}

/// `(1/n) ‖y − Xβ − √n e‖₂² + λ‖e‖₁`.
pub fn robust_objective(
    x: &DesignMatrix,
    y: &[f64],
    beta: &[f64],
    e: &[f64],
    lambda: f64,
) -> Result<f64> {
    check_dims(x, y)?;
    if e.len() != x.n() {
        return Err(Error::Dimension(format!(
            "e has {} entries, expected {}",
            e.len(),
            x.n()
        )));
    }
    let fitted = x.times(beta)?;
    let r = DVector::from_iterator(y.len(), y.iter().zip(&fitted).map(|(a, b)| a - b));
    let sqrt_n = (x.n() as f64).sqrt();
    Ok(objective_from(
        &r,
        &DVector::from_column_slice(e),
        sqrt_n,
        lambda,
    ))
}

/// Block coordinate descent for the robust formulation.
pub fn fit_robust(
    x: &DesignMatrix,
    y: &[f64],
    lambda: f64,
    tol: f64,
    max_iter: usize,
) -> Result<RobustFit> {
    check_dims(x, y)?;
    if x.n() <= x.d() {
        return Err(Error::InsufficientData(format!(
            "robust fit needs n > d, got n = {}, d = {}",
            x.n(),
            x.d()
        )));
    }
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::Parameter(format!(
            "lambda = {lambda} must be positive"
        )));
    }
    let ls = LeastSquares::new(x)?;
    Ok(fit_robust_with(
        &ls,
        &DVector::from_column_slice(y),
        lambda,
        tol,
        max_iter,
    ))
}

pub fn fit_robust_default(x: &DesignMatrix, y: &[f64], lambda: f64) -> Result<RobustFit> {
    let opts = RobustOptions::default();
    fit_robust(x, y, lambda, opts.tol, opts.max_iter)
}

pub(crate) fn fit_robust_with(
    ls: &LeastSquares,
    y: &DVector<f64>,
    lambda: f64,
    tol: f64,
    max_iter: usize,
) -> RobustFit {
    let n = ls.n();
    let sqrt_n = (n as f64).sqrt();
    let half_lambda = 0.5 * lambda;
    let evaluate = |b: DVector<f64>| {
        let r = y - ls.fitted(&b);
        let e = r.map(|ri| soft_threshold(ri / sqrt_n, half_lambda));
        let obj = objective_from(&r, &e, sqrt_n, lambda);
        (b, e, obj)
    };

    // The first sweep from e = 0 is the OLS fit.
    let (mut beta, mut e, first) = evaluate(ls.solve(y));
    let mut trace = vec![first];
    let mut converged = first == 0.0;
    let mut iterations = 1;

    while !converged && iterations < max_iter {
        let mut current = *trace.last().expect("nonempty");

        // Newton step with an exact line search; once the residual pattern
        // is right the step lands on the optimum.
        iterations += 1;
        if let Some(dir) = newton_direction(ls, y, &beta, sqrt_n * half_lambda) {
            let r = y - ls.fitted(&beta);
            let a = ls.fitted(&dir);
            let t = huber_line_search(&r, &a, sqrt_n * half_lambda);
            let (b, e_next, obj) = evaluate(&beta + &dir * t);
            if obj < current {
                beta = b;
                e = e_next;
                trace.push(obj);
                let big = current - obj > tol * current;
                current = obj;
                if big {
                    continue;
                }
            }
        }

        // Newton made no real progress: confirm with an alternating sweep.
        if iterations >= max_iter {
            break;
        }
        iterations += 1;
        let (b, e_next, obj) = evaluate(ls.solve(&(y - &e * sqrt_n)));
        if obj <= current {
            beta = b;
            e = e_next;
            trace.push(obj);
        }
        converged = current - obj <= tol * current;
    }

    RobustFit {
        beta: beta.iter().copied().collect(),
        e: e.iter().copied().collect(),
        lambda,
        iterations,
        converged,
        objective_trace: trace,
    }
}

/// Semismooth Newton direction for the Huber form of the problem.
///
/// With `ψ(r) = clip(r, −c, c)` the profile gradient is proportional to
/// `−Xᵀψ(r)` and the generalized Hessian to `X_WᵀX_W`, `W` being the rows
/// with `|r_i| ≤ c`. When those rows do not determine `β`, the rows closest
/// to the kink join `W`. The result `(X_WᵀX_W)⁻¹ Xᵀψ(r)` is a descent
/// direction, and with the right `W` a full step solves the problem.
fn newton_direction(
    ls: &LeastSquares,
    y: &DVector<f64>,
    beta: &DVector<f64>,
    c: f64,
) -> Option<DVector<f64>> {
    let x = ls.design();
    let r = y - x * beta;
    let grad = x.tr_mul(&r.map(|ri| ri.clamp(-c, c)));
    if grad.amax() == 0.0 {
        return None;
    }
    let mut order: Vec<usize> = (0..r.len()).collect();
    order.sort_by(|&a, &b| {
        let ka = (r[a].abs() - c).max(0.0);
        let kb = (r[b].abs() - c).max(0.0);
        ka.total_cmp(&kb).then(a.cmp(&b))
    });
    let mut size = order
        .iter()
        .filter(|&&i| r[i].abs() <= c)
        .count()
        .max(ls.d());
    while size <= order.len() {
        let mut rows = order[..size].to_vec();
        rows.sort_unstable();
        if let Ok(sub) = LeastSquares::from_matrix(x.select_rows(&rows)) {
            return Some(sub.solve_shifted(&DVector::zeros(rows.len()), &grad));
        }
        size += 1;
    }
    None
}

/// Minimizer over `t ≥ 0` of `Σ h_c(r_i − t a_i)` for the Huber loss `h_c`.
///
/// The derivative is `−2 Σ a_i ψ(r_i − t a_i)` with `ψ = clip(·, −c, c)`,
/// which is monotone and piecewise linear with kinks where a residual
/// crosses `±c`; bisection over the kinks and interpolation inside the
/// bracketing piece give the root exactly.
fn huber_line_search(r: &DVector<f64>, a: &DVector<f64>, c: f64) -> f64 {
    let slope = |t: f64| -> f64 {
        r.iter()
            .zip(a.iter())
            .map(|(&ri, &ai)| ai * (ri - t * ai).clamp(-c, c))
            .sum()
    };
    let mut kinks: Vec<f64> = r
        .iter()
        .zip(a.iter())
        .filter(|(_, &ai)| ai != 0.0)
        .flat_map(|(&ri, &ai)| [(ri - c) / ai, (ri + c) / ai])
        .filter(|&t| t > 0.0)
        .collect();
    kinks.sort_by(f64::total_cmp);
    kinks.dedup();
    let g0 = slope(0.0);
    if g0.is_nan() || g0 <= 0.0 || kinks.is_empty() {
        return 0.0;
    }
    // First kink where the slope is no longer positive.
    let idx = kinks.partition_point(|&t| slope(t) > 0.0);
    if idx == kinks.len() {
        return *kinks.last().expect("nonempty");
    }
    let (t_lo, g_lo) = if idx == 0 {
        (0.0, g0)
    } else {
        (kinks[idx - 1], slope(kinks[idx - 1]))
    };
    let (t_hi, g_hi) = (kinks[idx], slope(kinks[idx]));
    if g_lo == g_hi {
        return t_hi;
    }
    t_lo + g_lo / (g_lo - g_hi) * (t_hi - t_lo)
}

/// Largest violation of the optimality conditions of the robust problem.
///
/// With `ρ = y − Xβ − √n e`, optimality requires `(2/n) Xᵀρ = 0` and
/// `(2/√n) ρ_i ∈ λ ∂|e_i|` for every `i`.
pub fn kkt_residual(fit: &RobustFit, x: &DesignMatrix, y: &[f64]) -> Result<f64> {
    check_dims(x, y)?;
    if fit.e.len() != x.n() || fit.beta.len() != x.d() {
        return Err(Error::Dimension(format!(
            "fit has |β| = {}, |e| = {} for a {}x{} design",
            fit.beta.len(),
            fit.e.len(),
            x.n(),
            x.d()
        )));
    }
    let n = x.n() as f64;
    let sqrt_n = n.sqrt();
    let fitted = x.times(&fit.beta)?;
    let rho = DVector::from_iterator(
        x.n(),
        (0..x.n()).map(|i| y[i] - fitted[i] - sqrt_n * fit.e[i]),
    );
    let grad_beta = (x.matrix().tr_mul(&rho) * (2.0 / n)).amax();

    let lambda = fit.lambda;
    let grad_e = rho
        .iter()
        .zip(&fit.e)
        .map(|(&p, &ei)| {
            let g = 2.0 / sqrt_n * p;
            if ei > 0.0 {
                (g - lambda).abs()
            } else if ei < 0.0 {
                (g + lambda).abs()
            } else {
                (g.abs() - lambda).max(0.0)
            }
        })
        .fold(0.0, f64::max);
    Ok(grad_beta.max(grad_e))
}
