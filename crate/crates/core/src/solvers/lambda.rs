//! Choices of the ℓ₁ penalty weight λ for the robust fit.

use crate::error::{Error, Result};

/// Huber tuning constant matching the usual 95% Gaussian efficiency.
pub const HUBER_C: f64 = 1.345;

/// Consistency factor turning the median absolute deviation into a
/// standard-deviation estimate under Gaussian noise.
pub const MAD_SCALE: f64 = 1.4826;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LambdaRule {
    /// `4 (1 + M) σ √(2 log n / n)`, the level at which the error bound holds.
    BoundRule {
        m: f64,
        sigma: f64,
    },
    /// `0.2 σ √(log n / n)`, the level used in the simulations.
    SimulationRule {
        sigma: f64,
    },
    /// `2 c σ̂ / √n` with `c = 1.345`; equivalent to Huber regression with
    /// threshold `c σ̂`.
    HuberRule {
        sigma_hat: f64,
    },
    Fixed(f64),
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::Parameter(format!("{name} = {v} must be positive")))
    }
}

pub fn lambda_value(rule: LambdaRule, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::Parameter(format!(
            "lambda rules need n >= 2, got {n}"
        )));
    }
    let nf = n as f64;
    let ln = nf.ln();
    match rule {
        LambdaRule::BoundRule { m, sigma } => {
            let m = positive("M", m)?;
            let sigma = positive("sigma", sigma)?;
            Ok(4.0 * (1.0 + m) * sigma * (2.0 * ln / nf).sqrt())
        }
        LambdaRule::SimulationRule { sigma } => {
            let sigma = positive("sigma", sigma)?;
            Ok(0.2 * sigma * (ln / nf).sqrt())
        }
        LambdaRule::HuberRule { sigma_hat } => {
            let s = positive("sigma_hat", sigma_hat)?;
            Ok(2.0 * HUBER_C * s / nf.sqrt())
        }
        LambdaRule::Fixed(v) => positive("lambda", v),
    }
}

pub(crate) fn median(values: &mut [f64]) -> f64 {
    assert!(!values.is_empty());
    values.sort_by(f64::total_cmp);
    let m = values.len() / 2;
    if values.len() % 2 == 1 {
        values[m]
    } else {
        0.5 * (values[m - 1] + values[m])
    }
}

/// `1.4826 · median(|r − median(r)|)`.
pub fn robust_scale(residuals: &[f64]) -> Result<f64> {
    if residuals.is_empty() {
        return Err(Error::InsufficientData("no residuals".into()));
    }
    let mut r = residuals.to_vec();
    let med = median(&mut r);
    let mut dev: Vec<f64> = residuals.iter().map(|v| (v - med).abs()).collect();
    Ok(MAD_SCALE * median(&mut dev))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_rule_value() {
        let v = lambda_value(LambdaRule::BoundRule { m: 1.0, sigma: 1.0 }, 100).unwrap();
        let expected = 8.0 * (2.0 * 100f64.ln() / 100.0).sqrt();
        assert!((v - expected).abs() < 1e-14);
        assert!((v - 2.4279).abs() < 1e-4);
    }

    #[test]
    fn simulation_rule_value() {
        let v = lambda_value(LambdaRule::SimulationRule { sigma: 1.0 }, 100).unwrap();
        assert!((v - 0.042919).abs() < 1e-6);
    }

    #[test]
    fn huber_rule_value() {
        let v = lambda_value(LambdaRule::HuberRule { sigma_hat: 2.0 }, 25).unwrap();
        assert!((v - 2.0 * 1.345 * 2.0 / 5.0).abs() < 1e-15);
    }

    #[test]
    fn fixed_and_invalid() {
        assert_eq!(lambda_value(LambdaRule::Fixed(0.5), 10).unwrap(), 0.5);
        assert!(lambda_value(LambdaRule::Fixed(0.0), 10).is_err());
        assert!(lambda_value(LambdaRule::SimulationRule { sigma: -1.0 }, 10).is_err());
        assert!(lambda_value(LambdaRule::HuberRule { sigma_hat: 0.0 }, 10).is_err());
        assert!(lambda_value(LambdaRule::Fixed(1.0), 1).is_err());
    }

    #[test]
    fn robust_scale_of_known_sample() {
        // median 3, deviations {2,1,0,1,97} -> median 1
        let s = robust_scale(&[1.0, 2.0, 3.0, 4.0, 100.0]).unwrap();
        assert!((s - 1.4826).abs() < 1e-12);
    }
}
