//! Closed-form calculators for the error bounds and SNR thresholds of the
//! sparse-permutation estimators.
//!
//! Throughout, `a ∨ b = max(a, b)` and `log` is the natural logarithm. The
//! relaxed-estimator bound has unspecified absolute constants; the defaults
//! in [`TheoryConstants`] make it a diagnostic of the order of magnitude,
//! not a certified bound.

use std::f64::consts::{E, PI, SQRT_2};

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Parameters shared by the bound calculators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundInputs {
    pub n: usize,
    pub d: usize,
    pub k: usize,
    pub sigma: f64,
    /// Margin of the unrelaxed bound, in `(0, 1/2)`.
    pub eps: f64,
    /// Bound on `‖β*‖₂`.
    pub m: f64,
    /// Failure probability of the recovery thresholds.
    pub delta: f64,
    /// Slack added to the exact-recovery threshold.
    pub big_delta: f64,
}

impl BoundInputs {
    pub fn validate(&self) -> Result<()> {
        if self.d == 0 || self.n <= self.d {
            return Err(Error::Domain(format!(
                "need n > d >= 1, got n = {}, d = {}",
                self.n, self.d
            )));
        }
        if self.k > self.n {
            return Err(Error::Domain(format!(
                "k = {} exceeds n = {}",
                self.k, self.n
            )));
        }
        if !(self.sigma.is_finite() && self.sigma >= 0.0) {
            return Err(Error::Domain(format!(
                "sigma = {} must be nonnegative",
                self.sigma
            )));
        }
        if !(self.eps > 0.0 && self.eps < 0.5) {
            return Err(Error::Domain(format!(
                "eps = {} must lie in (0, 1/2)",
                self.eps
            )));
        }
        if !(self.m.is_finite() && self.m > 0.0) {
            return Err(Error::Domain(format!("M = {} must be positive", self.m)));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::Domain(format!(
                "delta = {} must lie in (0, 1)",
                self.delta
            )));
        }
        if !(self.big_delta.is_finite() && self.big_delta >= 0.0) {
            return Err(Error::Domain(format!(
                "Delta = {} must be nonnegative",
                self.big_delta
            )));
        }
        Ok(())
    }
}

/// Free constants of the relaxed-estimator bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoryConstants {
    /// Sparsity limit `k ≤ c₁ (n − d) / log(n / k)`.
    pub c1: f64,
    pub eps: f64,
}

impl Default for TheoryConstants {
    fn default() -> Self {
        Self { c1: 1.0, eps: 0.1 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub width_bound: f64,
    pub nu_n: f64,
    pub nu_n_minus_d: f64,
    pub exact_condition_ok: bool,
    /// `None` when the preconditions of the unrelaxed bound fail.
    pub exact_error_bound: Option<f64>,
    pub robust_error_bound: Option<f64>,
    pub refit_snr_threshold: f64,
    pub recovery_snr_threshold: f64,
    pub recovery_failure_snr_scale: f64,
    pub pure_noise_norm_bound: f64,
}

/// `3.5 √(2k log(e n / (2k)))`, an upper bound on the Gaussian width of the
/// unit vectors supported on `2k` coordinates. Zero for `k = 0`.
pub fn gaussian_width_bound(n: usize, k: usize) -> Result<f64> {
    if 2 * k > n {
        return Err(Error::Domain(format!(
            "width bound needs 2k <= n, got n = {n}, k = {k}"
        )));
    }
    if k == 0 {
        return Ok(0.0);
    }
    let two_k = 2.0 * k as f64;
    Ok(3.5 * (two_k * (E * n as f64 / two_k).ln()).sqrt())
}

/// `log Γ(x + 1/2) − log Γ(x)`. The direct difference cancels badly for
/// large `x`, where the asymptotic series (truncation error < 1e-18 at
/// `x = 50`) takes over.
fn ln_gamma_half_ratio(x: f64) -> f64 {
    if x < 50.0 {
        return ln_gamma(x + 0.5) - ln_gamma(x);
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    0.5 * x.ln() - inv / 8.0
        + inv * inv2 * (1.0 / 192.0 + inv2 * (-1.0 / 640.0 + inv2 * 17.0 / 14336.0))
}

/// `E‖g‖₂` for `g ~ N(0, I_m)`, i.e. `√2 Γ((m+1)/2) / Γ(m/2)`.
pub fn nu(m: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::Domain("nu(m) needs m >= 1".into()));
    }
    Ok(SQRT_2 * ln_gamma_half_ratio(m as f64 / 2.0).exp())
}

fn dim_or_log(inp: &BoundInputs) -> f64 {
    (inp.d as f64).max((inp.n as f64).ln())
}

/// `1 / (1 − √(4 (d ∨ log n) / n))`, shared by both error bounds.
fn design_prefactor(inp: &BoundInputs) -> Result<f64> {
    let n = inp.n as f64;
    let ratio = 4.0 * dim_or_log(inp) / n;
    if ratio >= 1.0 {
        return Err(Error::Infeasible(format!(
            "4(d ∨ log n) < n fails: 4 · {:.6} >= {}",
            dim_or_log(inp),
            inp.n
        )));
    }
    Ok(1.0 / (1.0 - ratio.sqrt()))
}

fn first_summand(inp: &BoundInputs) -> f64 {
    (5.0 * dim_or_log(inp) / inp.n as f64).sqrt()
}

/// Sample-size condition of the unrelaxed bound:
/// `n > max(9, 4d)` and `ν_{n−d} − ε/(1−ε) ν_n ≥ 2/(1−ε) · w`. False whenever
/// `2k > n`, where the width bound is not available.
pub fn exact_bound_condition(inp: &BoundInputs) -> Result<bool> {
    inp.validate()?;
    let (n, d) = (inp.n, inp.d);
    if 2 * inp.k > n {
        return Ok(false);
    }
    if n <= 9 || n <= 4 * d {
        return Ok(false);
    }
    let w = gaussian_width_bound(n, inp.k)?;
    let e = inp.eps;
    let lhs = nu(n - d)? - e / (1.0 - e) * nu(n)?;
    Ok(lhs >= 2.0 / (1.0 - e) * w)
}

/// Error bound for the unrelaxed least-squares estimator:
///
/// ```text
/// σ / (1 − √(4(d ∨ log n)/n)) · ( √(5(d ∨ log n)/n) + 2(1+√2) ε⁻² (w ∨ log n) / √n )
/// ```
pub fn exact_error_bound(inp: &BoundInputs) -> Result<f64> {
    if !exact_bound_condition(inp)? {
        return Err(Error::Infeasible(
            "sample-size condition n > max(9, 4d) and ν_{n−d} − ε/(1−ε)ν_n ≥ 2w/(1−ε) fails".into(),
        ));
    }
    let pre = design_prefactor(inp)?;
    let n = inp.n as f64;
    let w = gaussian_width_bound(inp.n, inp.k)?.max(n.ln());
    let second = 2.0 * (1.0 + SQRT_2) / (inp.eps * inp.eps) * w / n.sqrt();
    Ok(inp.sigma * pre * (first_summand(inp) + second))
}

/// Error bound for the convex relaxation with the bound-level λ:
///
/// ```text
/// σ / (1 − √(4(d ∨ log n)/n)) · ( √(5(d ∨ log n)/n) + 48(1+M) n/(n−d) ε⁻¹ √(2k log n / n) )
/// ```
///
/// with `ε` taken from `consts`.
pub fn robust_error_bound(inp: &BoundInputs, consts: &TheoryConstants) -> Result<f64> {
    inp.validate()?;
    if !(consts.c1 > 0.0 && consts.eps > 0.0) {
        return Err(Error::Domain("c1 and eps must be positive".into()));
    }
    let n = inp.n as f64;
    let d = inp.d as f64;
    let k = inp.k as f64;
    if inp.k > 0 {
        let limit = consts.c1 * (n - d) / (n / k).ln();
        if k > limit {
            return Err(Error::Infeasible(format!(
                "sparsity condition k <= c1 (n - d) / log(n / k) fails: {k} > {limit:.6}"
            )));
        }
    }
    let pre = design_prefactor(inp)?;
    let second = 48.0 * (1.0 + inp.m) * n / (n - d) / consts.eps * (2.0 * k * n.ln() / n).sqrt();
    Ok(inp.sigma * pre * (first_summand(inp) + second))
}

/// SNR above which the refit on the complement of the estimated support
/// identifies the mismatches:
/// `2(1+√2)² ε⁻⁴ / δ² · k² (w ∨ log n)² / n`.
pub fn refit_snr_threshold(inp: &BoundInputs) -> Result<f64> {
    inp.validate()?;
    let n = inp.n as f64;
    let k = inp.k as f64;
    let w = gaussian_width_bound(inp.n, inp.k)?.max(n.ln());
    let c = 1.0 + SQRT_2;
    Ok(2.0 * c * c / inp.eps.powi(4) / (inp.delta * inp.delta) * k * k * w * w / n)
}

/// SNR sufficient for sorting with a good coefficient estimate to recover
/// the permutation exactly:
/// `n²(n−1)² / (4δ²π) · (Δ + 2 log(n(n−1)/δ))²`.
pub fn recovery_snr_threshold(n: usize, delta: f64, big_delta: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain(format!("threshold needs n >= 2, got {n}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain(format!("delta = {delta} must lie in (0, 1)")));
    }
    if !(big_delta.is_finite() && big_delta >= 0.0) {
        return Err(Error::Domain(format!(
            "Delta = {big_delta} must be nonnegative"
        )));
    }
    let n = n as f64;
    let pairs = n * (n - 1.0);
    let t = big_delta + 2.0 * (pairs / delta).ln();
    Ok(pairs * pairs / (4.0 * delta * delta * PI) * t * t)
}

/// Order `n²` of the SNR below which exact recovery fails with constant
/// probability.
pub fn recovery_failure_snr_scale(n: usize) -> f64 {
    let n = n as f64;
    n * n
}

/// Lower bound on `E‖β̂‖₂²` for the unrelaxed estimator on pure noise:
/// `n / (2n + d) · σ² / (32 π²)`.
pub fn pure_noise_norm_bound(n: usize, d: usize, sigma: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(Error::Domain(format!(
            "sigma = {sigma} must be nonnegative"
        )));
    }
    let n = n as f64;
    Ok(n / (2.0 * n + d as f64) * sigma * sigma / (32.0 * PI * PI))
}

/// Every calculator at once; the two error bounds are `None` when their
/// preconditions fail.
pub fn bound_report(inp: &BoundInputs, consts: &TheoryConstants) -> Result<BoundReport> {
    inp.validate()?;
    let soft = |r: Result<f64>| match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::Infeasible(msg)) => {
            log::info!("{msg}");
            Ok(None)
        }
        Err(e) => Err(e),
    };
    Ok(BoundReport {
        width_bound: gaussian_width_bound(inp.n, inp.k)?,
        nu_n: nu(inp.n)?,
        nu_n_minus_d: nu(inp.n - inp.d)?,
        exact_condition_ok: exact_bound_condition(inp)?,
        exact_error_bound: soft(exact_error_bound(inp))?,
        robust_error_bound: soft(robust_error_bound(inp, consts))?,
        refit_snr_threshold: refit_snr_threshold(inp)?,
        recovery_snr_threshold: recovery_snr_threshold(inp.n, inp.delta, inp.big_delta)?,
        recovery_failure_snr_scale: recovery_failure_snr_scale(inp.n),
        pure_noise_norm_bound: pure_noise_norm_bound(inp.n, inp.d, inp.sigma)?,
    })
}
