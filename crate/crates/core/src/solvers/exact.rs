//! Exact least squares over sparse permutations for small `n`, and the
//! sorting solution of the unconstrained single-predictor problem.
//!
//! For a fixed permutation the best `β` is a least squares fit, so
//!
//! ```text
//! min_{Π, β} ‖Π X β − y‖² = min_Π ‖P⊥ Πᵀ y‖²
//! ```
//!
//! with `P⊥` the projection onto the orthogonal complement of `range(X)`.
//! The brute-force solver profiles out `β` this way and enumerates every
//! permutation with at most `k` non-fixed points.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::LeastSquares;
use crate::model::{DesignMatrix, SparsePermutation};
use crate::solvers::sorting::sorted_matching;

/// Largest `n` accepted by [`fit_exact_bruteforce`].
pub const MAX_BRUTEFORCE_N: usize = 12;
pub const DEFAULT_BUDGET: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct ExactFit {
    /// Estimate of `Π*`, so that `y ≈ pi · X · beta`.
    pub pi: SparsePermutation,
    pub beta: Vec<f64>,
    /// `min_β ‖pi X β − y‖²`.
    pub objective: f64,
    pub candidates_evaluated: u128,
}

fn binomial(n: usize, m: usize) -> u128 {
    if m > n {
        return 0;
    }
    let m = m.min(n - m);
    let mut c: u128 = 1;
    for i in 0..m {
        c = c * (n - i) as u128 / (i + 1) as u128;
    }
    c
}

/// Number of derangements of `m` elements.
pub fn derangements(m: usize) -> u128 {
    let (mut prev, mut cur): (u128, u128) = (1, 0);
    if m == 0 {
        return 1;
    }
    for i in 2..=m {
        let next = (i as u128 - 1) * (cur + prev);
        prev = cur;
        cur = next;
    }
    cur
}

/// `|{Π : d_H(Π, I) ≤ k}| = Σ_{m ≤ k} C(n, m) · D(m)`.
pub fn candidate_count(n: usize, k: usize) -> u128 {
    (0..=k.min(n))
        .filter(|&m| m != 1)
        .map(|m| binomial(n, m) * derangements(m))
        .sum()
}

/// Calls `visit` with every `m`-subset of `0..n` in lexicographic order.
fn for_each_subset(n: usize, m: usize, visit: &mut impl FnMut(&[usize])) {
    let mut subset: Vec<usize> = (0..m).collect();
    if m > n {
        return;
    }
    loop {
        visit(&subset);
        // Advance to the next combination.
        let mut i = m;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if subset[i] < n - m + i {
                subset[i] += 1;
                for j in (i + 1)..m {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
            if i == 0 {
                return;
            }
        }
    }
}

/// Calls `visit` with every fixed-point-free arrangement of `0..m`, in
/// lexicographic order.
fn for_each_derangement(m: usize, visit: &mut impl FnMut(&[usize])) {
    fn rec(pos: usize, used: &mut [bool], cur: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
        let m = used.len();
        if pos == m {
            visit(cur);
            return;
        }
        for v in 0..m {
            if v != pos && !used[v] {
                used[v] = true;
                cur.push(v);
                rec(pos + 1, used, cur, visit);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut used = vec![false; m];
    let mut cur = Vec::with_capacity(m);
    rec(0, &mut used, &mut cur, visit);
}

/// Global minimizer of `‖Π X β − y‖²` over `β` and all `Π` moving at most
/// `k` rows. Ties go to the lexicographically smallest permutation map.
pub fn fit_exact_bruteforce(
    x: &DesignMatrix,
    y: &[f64],
    k: usize,
    budget: u128,
) -> Result<ExactFit> {
    let n = x.n();
    if y.len() != n {
        return Err(Error::Dimension(format!(
            "response has {} entries, design has {n} rows",
            y.len()
        )));
    }
    if n > MAX_BRUTEFORCE_N {
        return Err(Error::Range(format!(
            "brute force is limited to n <= {MAX_BRUTEFORCE_N}, got n = {n}"
        )));
    }
    if k > n {
        return Err(Error::Range(format!("k = {k} exceeds n = {n}")));
    }
    let candidates = candidate_count(n, k);
    if candidates > budget {
        return Err(Error::Budget { candidates, budget });
    }
    let ls = LeastSquares::new(x)?;
    let yv = DVector::from_column_slice(y);
    let tie_tol = 1e-12 * yv.norm_squared().max(f64::MIN_POSITIVE);

    let mut best_obj = f64::INFINITY;
    let mut best_map: Vec<usize> = (0..n).collect();
    let mut evaluated: u128 = 0;
    let mut map: Vec<usize> = (0..n).collect();
    let mut v = yv.clone();

    for m in (0..=k).filter(|&m| m != 1) {
        for_each_subset(n, m, &mut |support: &[usize]| {
            for_each_derangement(m, &mut |images: &[usize]| {
                // Candidate Π maps support[j] -> support[images[j]];
                // v = Πᵀ y places y[i] at position Π(i).
                for (j, &i) in support.iter().enumerate() {
                    map[i] = support[images[j]];
                    v[map[i]] = y[i];
                }
                let obj = ls.project_out(&v).norm_squared();
                evaluated += 1;
                if obj < best_obj - tie_tol {
                    best_obj = obj;
                    best_map.clone_from(&map);
                } else if obj <= best_obj + tie_tol && map < best_map {
                    best_obj = best_obj.min(obj);
                    best_map.clone_from(&map);
                }
                for &i in support {
                    map[i] = i;
                    v[i] = y[i];
                }
            });
        });
    }

    let pi = SparsePermutation::from_map(best_map)?;
    let mut v = yv.clone();
    for (i, &j) in pi.map().iter().enumerate() {
        v[j] = y[i];
    }
    let beta = ls.solve(&v);
    Ok(ExactFit {
        pi,
        beta: beta.iter().copied().collect(),
        objective: ls.project_out(&v).norm_squared(),
        candidates_evaluated: evaluated,
    })
}

/// Single-predictor least squares over all permutations.
///
/// `max_Π ⟨Πx, y⟩` pairs sorted `x` with sorted `y`, and `max_Π ⟨Πx, −y⟩`
/// pairs sorted `x` with reverse-sorted `y`; the branch with the smaller
/// residual sum of squares wins. Returns `(Π̂, β̂)` with
/// `β̂ = ⟨Π̂x, y⟩ / ‖x‖²`.
pub fn fit_exact_d1_sorting(x: &[f64], y: &[f64]) -> Result<(SparsePermutation, f64)> {
    let n = x.len();
    if n == 0 {
        return Err(Error::Dimension("empty predictor".into()));
    }
    if y.len() != n {
        return Err(Error::Dimension(format!(
            "predictor has {n} entries, response has {}",
            y.len()
        )));
    }
    let xx: f64 = x.iter().map(|v| v * v).sum();
    let neg_y: Vec<f64> = y.iter().map(|v| -v).collect();

    let evaluate = |map: Vec<usize>| {
        let ip: f64 = map.iter().zip(y).map(|(&j, yi)| x[j] * yi).sum();
        let beta = if xx > 0.0 { ip / xx } else { 0.0 };
        let rss: f64 = map
            .iter()
            .zip(y)
            .map(|(&j, yi)| (yi - beta * x[j]).powi(2))
            .sum();
        (map, beta, rss)
    };
    let up = evaluate(sorted_matching(x, y));
    let down = evaluate(sorted_matching(x, &neg_y));
    let (map, beta, _) = if down.2 < up.2 { down } else { up };
    Ok((SparsePermutation::from_map(map)?, beta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::synthesize;
    use crate::solvers::fit_ols;

    #[test]
    fn counts() {
        assert_eq!(derangements(0), 1);
        assert_eq!(derangements(1), 0);
        assert_eq!(derangements(2), 1);
        assert_eq!(derangements(3), 2);
        assert_eq!(derangements(4), 9);
        assert_eq!(candidate_count(5, 2), 11);
        assert_eq!(candidate_count(5, 5), 120);
        assert_eq!(candidate_count(12, 12), 479_001_600);
    }

    #[test]
    fn enumerators_visit_everything_once() {
        let mut subsets = Vec::new();
        for_each_subset(5, 3, &mut |s| subsets.push(s.to_vec()));
        assert_eq!(subsets.len(), 10);
        assert_eq!(subsets[0], vec![0, 1, 2]);
        assert_eq!(subsets[9], vec![2, 3, 4]);
        let mut empty = 0;
        for_each_subset(4, 0, &mut |s| {
            assert!(s.is_empty());
            empty += 1
        });
        assert_eq!(empty, 1);
        let mut ders = Vec::new();
        for_each_derangement(4, &mut |d| ders.push(d.to_vec()));
        assert_eq!(ders.len(), 9);
        let mut sorted = ders.clone();
        sorted.sort();
        assert_eq!(sorted, ders);
    }

    #[test]
    fn k_zero_is_ols() {
        let obs = synthesize(8, 2, 2, 0.1, 3).unwrap();
        let fit = fit_exact_bruteforce(&obs.x, &obs.y, 0, DEFAULT_BUDGET).unwrap();
        let ols = fit_ols(&obs.x, &obs.y).unwrap();
        assert!(fit.pi.is_identity());
        assert_eq!(fit.candidates_evaluated, 1);
        assert!((fit.objective - ols.rss).abs() < 1e-10);
        for (a, b) in fit.beta.iter().zip(&ols.beta) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn noiseless_truth_is_found() {
        for seed in 0..10 {
            let obs = synthesize(8, 2, 2, 0.0, seed).unwrap();
            let truth = obs.truth.clone().unwrap();
            let fit = fit_exact_bruteforce(&obs.x, &obs.y, 2, DEFAULT_BUDGET).unwrap();
            assert!(fit.objective < 1e-20, "objective {}", fit.objective);
            assert_eq!(fit.pi, truth.pi_star);
            for (a, b) in fit.beta.iter().zip(&truth.beta_star) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn candidate_count_is_reported() {
        let obs = synthesize(5, 1, 2, 0.1, 1).unwrap();
        let fit = fit_exact_bruteforce(&obs.x, &obs.y, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(fit.candidates_evaluated, 11);
        assert!(fit.pi.hamming() <= 2);
    }

    #[test]
    fn never_worse_than_identity() {
        for seed in 0..20 {
            let obs = synthesize(7, 2, 3, 0.5, seed).unwrap();
            let ols = fit_ols(&obs.x, &obs.y).unwrap();
            let fit = fit_exact_bruteforce(&obs.x, &obs.y, 3, DEFAULT_BUDGET).unwrap();
            assert!(fit.objective <= ols.rss + 1e-12);
        }
    }

    #[test]
    fn budget_and_size_limits() {
        let obs = synthesize(10, 1, 4, 0.1, 1).unwrap();
        let err = fit_exact_bruteforce(&obs.x, &obs.y, 10, 1000).unwrap_err();
        assert_eq!(
            err,
            Error::Budget {
                candidates: 3_628_800,
                budget: 1000
            }
        );
        let big = synthesize(13, 1, 0, 0.1, 1).unwrap();
        assert!(matches!(
            fit_exact_bruteforce(&big.x, &big.y, 0, DEFAULT_BUDGET),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn sorting_example_inner_product() {
        let x = [3.0, 1.0, 2.0];
        let y = [1.0, 3.0, 2.0];
        let (pi, beta) = fit_exact_d1_sorting(&x, &y).unwrap();
        let px = pi.apply(&x).unwrap();
        let ip: f64 = px.iter().zip(&y).map(|(a, b)| a * b).sum();
        assert_eq!(ip, 14.0);
        assert!((beta - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sorting_scaled_copy() {
        let x = [0.3, -1.2, 2.5, 0.9];
        let y: Vec<f64> = x.iter().map(|v| 2.5 * v).collect();
        let (pi, beta) = fit_exact_d1_sorting(&x, &y).unwrap();
        assert!(pi.is_identity());
        assert_eq!(beta, 2.5);
    }

    #[test]
    fn sorting_negated_copy_uses_descending_branch() {
        let x = [0.3, -1.2, 2.5, 0.9];
        let y: Vec<f64> = x.iter().map(|v| -v).collect();
        let (pi, beta) = fit_exact_d1_sorting(&x, &y).unwrap();
        assert!(pi.is_identity());
        assert_eq!(beta, -1.0);
    }

    #[test]
    fn sorting_rejects_empty() {
        assert!(matches!(
            fit_exact_d1_sorting(&[], &[]),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn sorting_agrees_with_bruteforce_for_k_equal_n() {
        for n in 2..=7 {
            for seed in 0..5 {
                let obs = synthesize(n, 1, 0, 1.0, seed * 31 + n as u64).unwrap();
                let x = obs.x.column(0);
                let (pi, beta) = fit_exact_d1_sorting(&x, &obs.y).unwrap();
                let px = pi.apply(&x).unwrap();
                let rss: f64 = px
                    .iter()
                    .zip(&obs.y)
                    .map(|(a, b)| (b - beta * a).powi(2))
                    .sum();
                let bf = fit_exact_bruteforce(&obs.x, &obs.y, n, DEFAULT_BUDGET).unwrap();
                assert!(
                    (rss - bf.objective).abs() < 1e-9,
                    "n={n}: {rss} vs {}",
                    bf.objective
                );
            }
        }
    }
}
