use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::LeastSquares;
use crate::model::DesignMatrix;

/// Ordinary least squares solution together with its residuals.
#[derive(Debug, Clone, PartialEq)]
pub struct OlsFit {
    pub beta: Vec<f64>,
    pub residuals: Vec<f64>,
    pub rss: f64,
}

impl OlsFit {
    pub(crate) fn from_factorization(ls: &LeastSquares, y: &DVector<f64>) -> Self {
        let beta = ls.solve(y);
        let residuals = y - ls.fitted(&beta);
        let rss = residuals.norm_squared();
        Self {
            beta: beta.iter().copied().collect(),
            residuals: residuals.iter().copied().collect(),
            rss,
        }
    }
}

/// Least squares fit of `y` on `X`. Rank deficiency is an error.
pub fn fit_ols(x: &DesignMatrix, y: &[f64]) -> Result<OlsFit> {
    if y.len() != x.n() {
        return Err(Error::Dimension(format!(
            "response has {} entries, design has {} rows",
            y.len(),
            x.n()
        )));
    }
    let ls = LeastSquares::new(x)?;
    Ok(OlsFit::from_factorization(
        &ls,
        &DVector::from_column_slice(y),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{generate_design, synthesize};
    use nalgebra::DMatrix;
    use rand::{Rng, SeedableRng};

    #[test]
    fn one_column_example() {
        let x = DesignMatrix::from_row_slice(2, 1, &[1.0, 0.0]).unwrap();
        let fit = fit_ols(&x, &[2.0, 0.0]).unwrap();
        assert_eq!(fit.beta, vec![2.0]);
        assert_eq!(fit.rss, 0.0);
    }

    #[test]
    fn interpolates_noiseless_data() {
        let obs = synthesize(40, 5, 0, 0.0, 3).unwrap();
        let fit = fit_ols(&obs.x, &obs.y).unwrap();
        let truth = obs.truth.unwrap().beta_star;
        for (a, b) in fit.beta.iter().zip(&truth) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn matches_normal_equations() {
        let x = generate_design(6, 2, 21).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let y: Vec<f64> = (0..6).map(|_| rng.random_range(-2.0..2.0)).collect();
        let fit = fit_ols(&x, &y).unwrap();

        // (XᵀX)⁻¹ Xᵀ y through an explicit inverse.
        let m = x.matrix();
        let gram: DMatrix<f64> = m.transpose() * m;
        let inv = gram.try_inverse().unwrap();
        let expected = inv * m.transpose() * DVector::from_column_slice(&y);
        for (a, b) in fit.beta.iter().zip(expected.iter()) {
            assert!((a - b).abs() < 1e-9);
        }

        let xt_r = m.transpose() * DVector::from_column_slice(&fit.residuals);
        let ynorm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(xt_r.amax() < 1e-8 * ynorm);
        let rss: f64 = fit.residuals.iter().map(|r| r * r).sum();
        assert!((rss - fit.rss).abs() < 1e-12);
    }

    #[test]
    fn rank_deficiency_is_an_error() {
        let x = DesignMatrix::from_row_slice(3, 2, &[1.0, 1.0, 2.0, 2.0, 3.0, 3.0]).unwrap();
        assert!(matches!(
            fit_ols(&x, &[1.0, 2.0, 3.0]),
            Err(Error::SingularDesign { .. })
        ));
    }
}
