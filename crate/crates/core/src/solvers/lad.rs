use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::LeastSquares;
use crate::model::DesignMatrix;

pub const DEFAULT_SMOOTHING: f64 = 1e-8;
const MAX_ITER: usize = 500;
const REL_TOL: f64 = 1e-10;
/// Extra near-zero residuals considered when snapping to a vertex.
const VERTEX_SLACK: usize = 3;

fn l1_loss(xm: &DMatrix<f64>, y: &DVector<f64>, beta: &DVector<f64>) -> f64 {
    (y - xm * beta).iter().map(|v| v.abs()).sum()
}

/// Calls `f` with every `m`-subset of `0..n` in lexicographic order.
fn for_each_combination(n: usize, m: usize, mut f: impl FnMut(&[usize])) {
    if m > n {
        return;
    }
    let mut idx: Vec<usize> = (0..m).collect();
    loop {
        f(&idx);
        let Some(i) = (0..m).rev().find(|&i| idx[i] != i + n - m) else {
            return;
        };
        idx[i] += 1;
        for j in (i + 1)..m {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Some L1 minimizer interpolates `d` rows. IRLS only gets close, so try the
/// vertices spanned by the rows with the smallest residuals.
fn snap_to_vertex(xm: &DMatrix<f64>, y: &DVector<f64>, beta: DVector<f64>) -> DVector<f64> {
    let (n, d) = xm.shape();
    let mut best_loss = l1_loss(xm, y, &beta);
    let mut best = beta;
    loop {
        let r = y - xm * &best;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| r[a].abs().total_cmp(&r[b].abs()).then(a.cmp(&b)));
        let pool = &order[..(d + VERTEX_SLACK).min(n)];
        let mut improved = false;
        for_each_combination(pool.len(), d, |pick| {
            let rows: Vec<usize> = pick.iter().map(|&p| pool[p]).collect();
            let sub = xm.select_rows(&rows);
            let rhs = DVector::from_iterator(d, rows.iter().map(|&i| y[i]));
            if let Some(cand) = sub.lu().solve(&rhs) {
                let loss = l1_loss(xm, y, &cand);
                if loss < best_loss {
                    best_loss = loss;
                    best = cand;
                    improved = true;
                }
            }
        });
        if !improved {
            return best;
        }
    }
}

/// Least absolute deviation regression `argmin ‖y − Xβ‖₁` by iteratively
/// reweighted least squares with weights `1 / max(|r_i|, smoothing)`,
/// finished by moving to the best nearby interpolating solution.
pub fn fit_lad(x: &DesignMatrix, y: &[f64], smoothing: f64) -> Result<Vec<f64>> {
    if y.len() != x.n() {
        return Err(Error::Dimension(format!(
            "response has {} entries, design has {} rows",
            y.len(),
            x.n()
        )));
    }
    if x.n() <= x.d() {
        return Err(Error::InsufficientData(format!(
            "LAD needs n > d, got n = {}, d = {}",
            x.n(),
            x.d()
        )));
    }
    if !(smoothing.is_finite() && smoothing > 0.0) {
        return Err(Error::Parameter(format!(
            "smoothing = {smoothing} must be positive"
        )));
    }
    let (n, d) = (x.n(), x.d());
    let xm = x.matrix();
    let yv = DVector::from_column_slice(y);
    let mut beta = LeastSquares::new(x)?.solve(&yv);

    for _ in 0..MAX_ITER {
        let r = &yv - xm * &beta;
        let sw: Vec<f64> = r
            .iter()
            .map(|v| 1.0 / v.abs().max(smoothing).sqrt())
            .collect();
        let xw = DMatrix::from_fn(n, d, |i, j| sw[i] * xm[(i, j)]);
        let yw = DVector::from_fn(n, |i, _| sw[i] * y[i]);
        let next = LeastSquares::from_matrix(xw)?.solve(&yw);
        let change = (&next - &beta).norm();
        let scale = next.norm();
        beta = next;
        if change <= REL_TOL * scale {
            break;
        }
    }
    let beta = snap_to_vertex(xm, &yv, beta);
    Ok(beta.iter().copied().collect())
}
