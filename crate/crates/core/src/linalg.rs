//! Thin QR least-squares factorization shared by the solvers.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::model::DesignMatrix;

/// `X = Q R` with `Q` of size `n × d` and `R` upper triangular, computed once
/// and reused for every right-hand side.
#[derive(Debug, Clone)]
pub struct LeastSquares {
    x: DMatrix<f64>,
    q: DMatrix<f64>,
    r: DMatrix<f64>,
}

impl LeastSquares {
    pub fn new(x: &DesignMatrix) -> Result<Self> {
        Self::from_matrix(x.matrix().clone())
    }

    pub fn from_matrix(x: DMatrix<f64>) -> Result<Self> {
        let (n, d) = x.shape();
        if n < d {
            return Err(Error::InsufficientData(format!(
                "least squares needs n >= d, got n = {n}, d = {d}"
            )));
        }
        let qr = x.clone().qr();
        let q = qr.q();
        let r = qr.r();
        let scale = (0..d).map(|j| r[(j, j)].abs()).fold(0.0, f64::max);
        let tol = n.max(d) as f64 * f64::EPSILON * scale;
        for j in 0..d {
            let rjj = r[(j, j)].abs();
            if rjj.is_nan() || rjj <= tol {
                return Err(Error::SingularDesign { column: j });
            }
        }
        Ok(Self { x, q, r })
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn d(&self) -> usize {
        self.x.ncols()
    }

    /// `argmin_b ‖X b − rhs‖₂`.
    pub fn solve(&self, rhs: &DVector<f64>) -> DVector<f64> {
        let qtb = self.q.tr_mul(rhs);
        self.r
            .solve_upper_triangular(&qtb)
            .expect("R has a nonzero diagonal")
    }

    pub fn design(&self) -> &DMatrix<f64> {
        &self.x
    }

    /// Solves `XᵀX b = Xᵀ rhs + shift`.
    pub fn solve_shifted(&self, rhs: &DVector<f64>, shift: &DVector<f64>) -> DVector<f64> {
        let w = self
            .r
            .tr_solve_upper_triangular(shift)
            .expect("R has a nonzero diagonal");
        let qtb = self.q.tr_mul(rhs) + w;
        self.r
            .solve_upper_triangular(&qtb)
            .expect("R has a nonzero diagonal")
    }

    /// Component of `v` orthogonal to the column space of `X`.
    pub fn project_out(&self, v: &DVector<f64>) -> DVector<f64> {
        let coef = self.q.tr_mul(v);
        v - &self.q * coef
    }

    pub fn fitted(&self, beta: &DVector<f64>) -> DVector<f64> {
        &self.x * beta
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_collinear_columns() {
        let x = DMatrix::from_row_slice(3, 2, &[1.0, 2.0, 2.0, 4.0, 3.0, 6.0]);
        assert!(matches!(
            LeastSquares::from_matrix(x),
            Err(Error::SingularDesign { column: 1 })
        ));
        let zero = DMatrix::zeros(4, 1);
        assert!(matches!(
            LeastSquares::from_matrix(zero),
            Err(Error::SingularDesign { column: 0 })
        ));
    }

    #[test]
    fn shifted_solve_matches_normal_equations() {
        let x = DMatrix::from_row_slice(4, 2, &[1.0, 0.5, 1.0, -1.0, 1.0, 2.0, 1.0, 0.0]);
        let ls = LeastSquares::from_matrix(x.clone()).unwrap();
        let rhs = DVector::from_vec(vec![0.2, -1.0, 3.0, 1.5]);
        let shift = DVector::from_vec(vec![0.7, -0.4]);
        let b = ls.solve_shifted(&rhs, &shift);
        let want = (x.tr_mul(&x))
            .cholesky()
            .unwrap()
            .solve(&(x.tr_mul(&rhs) + &shift));
        assert!((b - want).amax() < 1e-12);
    }

    #[test]
    fn projection_is_orthogonal_to_columns() {
        let x = DMatrix::from_row_slice(4, 2, &[1.0, 0.5, 1.0, -1.0, 1.0, 2.0, 1.0, 0.0]);
        let ls = LeastSquares::from_matrix(x.clone()).unwrap();
        let v = DVector::from_vec(vec![1.0, -2.0, 0.3, 4.0]);
        let p = ls.project_out(&v);
        assert!(x.tr_mul(&p).amax() < 1e-12);
    }
}
