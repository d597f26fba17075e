//! Second stage of the pipeline: find the mismatched rows from the fitted
//! outlier vector, refit on the clean rows, and match the remaining rows by
//! sorting.
//!
//! Permutations follow the crate-wide convention: the returned `Π̃`
//! satisfies `y ≈ Π̃ X θ̂`, i.e. `y[i]` is explained by row `Π̃.map[i]`.

use crate::error::{Error, Result};
use crate::model::{DesignMatrix, SparsePermutation};
use crate::solvers::lambda::{median, MAD_SCALE};
use crate::solvers::{
    fit_ols, fit_robust_default, lambda_value, sorted_matching, LambdaRule, OlsFit, RobustFit,
};

/// Multiple of the scaled MAD of `ẽ` used by [`estimate_support_threshold`].
pub const THRESHOLD_MADS: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupportMethod {
    TopK,
    PiDiagonal,
    /// Data-driven cut when `k` is unknown.
    Threshold,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupportEstimate {
    /// Sorted, 0-based.
    pub indices: Vec<usize>,
    pub threshold: f64,
    pub method: SupportMethod,
}

impl SupportEstimate {
    pub fn empty() -> Self {
        Self {
            indices: Vec::new(),
            threshold: 0.0,
            method: SupportMethod::TopK,
        }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoStageResult {
    pub robust: RobustFit,
    pub support: SupportEstimate,
    pub refit_beta: Vec<f64>,
    pub pi_tilde: SparsePermutation,
}

/// Indices of the `k` largest `|e_i|`; on equal magnitudes the smaller index
/// wins.
pub fn estimate_support_topk(e: &[f64], k: usize) -> Result<SupportEstimate> {
    if k > e.len() {
        return Err(Error::Range(format!(
            "k = {k} exceeds the length {} of e",
            e.len()
        )));
    }
    let mut order: Vec<usize> = (0..e.len()).collect();
    order.sort_by(|&a, &b| e[b].abs().total_cmp(&e[a].abs()).then(a.cmp(&b)));
    let threshold = if k == 0 { 0.0 } else { e[order[k - 1]].abs() };
    let mut indices = order[..k].to_vec();
    indices.sort_unstable();
    Ok(SupportEstimate {
        indices,
        threshold,
        method: SupportMethod::TopK,
    })
}

/// Rows moved by an estimated permutation.
pub fn support_from_permutation(pi: &SparsePermutation) -> SupportEstimate {
    SupportEstimate {
        indices: pi.support(),
        threshold: 0.0,
        method: SupportMethod::PiDiagonal,
    }
}

/// Rows with `|e_i| > 3 · 1.4826 · MAD(e)`. When most of `e` is exactly zero
/// the cut is zero and every flagged row is kept.
pub fn estimate_support_threshold(e: &[f64]) -> Result<SupportEstimate> {
    if e.is_empty() {
        return Err(Error::InsufficientData("empty outlier vector".into()));
    }
    let mut v = e.to_vec();
    let med = median(&mut v);
    let mut dev: Vec<f64> = e.iter().map(|x| (x - med).abs()).collect();
    let threshold = THRESHOLD_MADS * MAD_SCALE * median(&mut dev);
    let indices = (0..e.len()).filter(|&i| e[i].abs() > threshold).collect();
    Ok(SupportEstimate {
        indices,
        threshold,
        method: SupportMethod::Threshold,
    })
}

/// OLS on the rows outside `support`.
pub fn refit_excluding(x: &DesignMatrix, y: &[f64], support: &SupportEstimate) -> Result<OlsFit> {
    if y.len() != x.n() {
        return Err(Error::Dimension(format!(
            "response has {} entries, design has {} rows",
            y.len(),
            x.n()
        )));
    }
    if let Some(&bad) = support.indices.iter().find(|&&i| i >= x.n()) {
        return Err(Error::Range(format!(
            "support index {bad} out of range for n = {}",
            x.n()
        )));
    }
    let keep: Vec<usize> = (0..x.n()).filter(|&i| !support.contains(i)).collect();
    if keep.len() <= x.d() {
        return Err(Error::InsufficientData(format!(
            "{} rows remain after excluding the support, need more than d = {}",
            keep.len(),
            x.d()
        )));
    }
    let xs = x.select_rows(&keep)?;
    let ys: Vec<f64> = keep.iter().map(|&i| y[i]).collect();
    fit_ols(&xs, &ys)
}

/// `argmax_Π ⟨Π X θ̂, y⟩`, obtained by pairing equal ranks of the fitted
/// values and the responses.
pub fn recover_permutation_sorted(
    x: &DesignMatrix,
    y: &[f64],
    theta_hat: &[f64],
) -> Result<SparsePermutation> {
    if y.len() != x.n() {
        return Err(Error::Dimension(format!(
            "response has {} entries, design has {} rows",
            y.len(),
            x.n()
        )));
    }
    let fitted = x.times(theta_hat)?;
    SparsePermutation::from_map(sorted_matching(&fitted, y))
}

/// Sorted matching restricted to `support`; every other row stays put.
pub fn recover_permutation_on_support(
    x: &DesignMatrix,
    y: &[f64],
    support: &SupportEstimate,
    theta_hat: &[f64],
) -> Result<SparsePermutation> {
    if y.len() != x.n() {
        return Err(Error::Dimension(format!(
            "response has {} entries, design has {} rows",
            y.len(),
            x.n()
        )));
    }
    let fitted = x.times(theta_hat)?;
    let s = &support.indices;
    if let Some(&bad) = s.iter().find(|&&i| i >= x.n()) {
        return Err(Error::Range(format!(
            "support index {bad} out of range for n = {}",
            x.n()
        )));
    }
    let fs: Vec<f64> = s.iter().map(|&i| fitted[i]).collect();
    let ys: Vec<f64> = s.iter().map(|&i| y[i]).collect();
    let local = sorted_matching(&fs, &ys);
    let mut map: Vec<usize> = (0..x.n()).collect();
    for (pos, &i) in s.iter().enumerate() {
        map[i] = s[local[pos]];
    }
    SparsePermutation::from_map(map)
}

/// Robust fit, top-`k` support, refit without the support, then sorting on
/// the support with the refit coefficients.
pub fn two_stage(
    x: &DesignMatrix,
    y: &[f64],
    k: usize,
    rule: LambdaRule,
) -> Result<TwoStageResult> {
    if k + x.d() >= x.n() {
        return Err(Error::InsufficientData(format!(
            "two-stage fit needs n - k > d, got n = {}, k = {k}, d = {}",
            x.n(),
            x.d()
        )));
    }
    let lambda = lambda_value(rule, x.n())?;
    let robust = fit_robust_default(x, y, lambda)?;
    let support = estimate_support_topk(&robust.e, k)?;
    finish(x, y, robust, support)
}

/// Same pipeline with the support chosen by [`estimate_support_threshold`].
pub fn two_stage_thresholded(
    x: &DesignMatrix,
    y: &[f64],
    rule: LambdaRule,
) -> Result<TwoStageResult> {
    let lambda = lambda_value(rule, x.n())?;
    let robust = fit_robust_default(x, y, lambda)?;
    let support = estimate_support_threshold(&robust.e)?;
    finish(x, y, robust, support)
}

fn finish(
    x: &DesignMatrix,
    y: &[f64],
    robust: RobustFit,
    support: SupportEstimate,
) -> Result<TwoStageResult> {
    let refit = refit_excluding(x, y, &support)?;
    let pi_tilde = recover_permutation_on_support(x, y, &support, &refit.beta)?;
    Ok(TwoStageResult {
        robust,
        support,
        refit_beta: refit.beta,
        pi_tilde,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::synthesize;

    #[test]
    fn topk_examples() {
        let s = estimate_support_topk(&[0.1, -5.0, 0.0, 2.0], 2).unwrap();
        assert_eq!(s.indices, vec![1, 3]);
        assert_eq!(s.threshold, 2.0);
        let s = estimate_support_topk(&[1.0, 1.0, 0.0], 1).unwrap();
        assert_eq!(s.indices, vec![0]);
        let s = estimate_support_topk(&[1.0, 2.0], 0).unwrap();
        assert!(s.is_empty());
        assert_eq!(s.threshold, 0.0);
        assert!(matches!(
            estimate_support_topk(&[1.0], 2),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn threshold_keeps_flagged_rows() {
        let e = [0.0, 0.0, 0.0, 0.0, 0.3, -1.0, 0.0];
        let s = estimate_support_threshold(&e).unwrap();
        assert_eq!(s.indices, vec![4, 5]);
        assert_eq!(s.method, SupportMethod::Threshold);
    }

    #[test]
    fn refit_on_empty_support_is_ols() {
        let obs = synthesize(30, 3, 4, 0.1, 2).unwrap();
        let a = refit_excluding(&obs.x, &obs.y, &SupportEstimate::empty()).unwrap();
        let b = fit_ols(&obs.x, &obs.y).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn refit_one_column_matches_hand_computation() {
        let x = DesignMatrix::from_row_slice(6, 1, &[1.0, 2.0, -1.0, 0.5, 3.0, -2.0]).unwrap();
        let y = [10.0, 4.1, -1.9, 1.2, 5.8, -4.1];
        let s = SupportEstimate {
            indices: vec![0],
            threshold: 0.0,
            method: SupportMethod::TopK,
        };
        let fit = refit_excluding(&x, &y, &s).unwrap();
        let xs = [2.0, -1.0, 0.5, 3.0, -2.0];
        let ys = [4.1, -1.9, 1.2, 5.8, -4.1];
        let want = xs.iter().zip(&ys).map(|(a, b)| a * b).sum::<f64>()
            / xs.iter().map(|a| a * a).sum::<f64>();
        assert!((fit.beta[0] - want).abs() < 1e-14);
    }

    #[test]
    fn refit_needs_enough_rows() {
        let x = DesignMatrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 1.0, 1.0, 1.0]).unwrap();
        let s = SupportEstimate {
            indices: vec![2],
            threshold: 0.0,
            method: SupportMethod::TopK,
        };
        assert!(matches!(
            refit_excluding(&x, &[1.0, 2.0, 3.0], &s),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn aligned_responses_give_identity() {
        let obs = synthesize(15, 2, 0, 0.0, 1).unwrap();
        let beta = &obs.truth.as_ref().unwrap().beta_star;
        let pi = recover_permutation_sorted(&obs.x, &obs.y, beta).unwrap();
        assert!(pi.is_identity());
    }

    #[test]
    fn noiseless_full_scramble_is_undone() {
        let obs = synthesize(25, 3, 25, 0.0, 9).unwrap();
        let truth = obs.truth.as_ref().unwrap();
        let pi = recover_permutation_sorted(&obs.x, &obs.y, &truth.beta_star).unwrap();
        assert_eq!(pi, truth.pi_star);
    }

    #[test]
    fn support_restriction_edge_cases() {
        let obs = synthesize(12, 2, 4, 0.3, 5).unwrap();
        let theta = [0.4, -0.2];
        let none =
            recover_permutation_on_support(&obs.x, &obs.y, &SupportEstimate::empty(), &theta)
                .unwrap();
        assert!(none.is_identity());
        let all = SupportEstimate {
            indices: (0..12).collect(),
            threshold: 0.0,
            method: SupportMethod::TopK,
        };
        assert_eq!(
            recover_permutation_on_support(&obs.x, &obs.y, &all, &theta).unwrap(),
            recover_permutation_sorted(&obs.x, &obs.y, &theta).unwrap()
        );
    }

    #[test]
    fn two_stage_with_no_mismatches_is_ols() {
        let obs = synthesize(40, 3, 0, 0.2, 3).unwrap();
        let r = two_stage(&obs.x, &obs.y, 0, LambdaRule::SimulationRule { sigma: 0.2 }).unwrap();
        assert!(r.pi_tilde.is_identity());
        assert_eq!(r.refit_beta, fit_ols(&obs.x, &obs.y).unwrap().beta);
    }
}
