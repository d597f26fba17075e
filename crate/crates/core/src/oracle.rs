//! Slow reference solvers used to cross-check the production solvers.
//!
//! Nothing here shares code with [`crate::solvers`]: the exhaustive search
//! walks all `n!` permutations and refits with normal equations, and the
//! robust reference minimizes the Huber profile by accelerated gradient
//! descent instead of alternating block updates.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::model::{DesignMatrix, SparsePermutation};

/// Next permutation in lexicographic order; `false` after the last one.
fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn normal_equations(x: &DMatrix<f64>) -> Result<nalgebra::Cholesky<f64, nalgebra::Dyn>> {
    (x.transpose() * x)
        .cholesky()
        .ok_or(Error::SingularDesign { column: 0 })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExhaustiveSolution {
    pub objective: f64,
    pub pi: SparsePermutation,
    pub beta: Vec<f64>,
    pub permutations_scanned: u64,
}

/// `min ‖Π X β − y‖²` over every `Π` with at most `k` moved rows, found by
/// scanning all `n!` permutations. Use only for `n ≤ 12`.
pub fn exhaustive_lsq(x: &DesignMatrix, y: &[f64], k: usize) -> Result<ExhaustiveSolution> {
    let n = x.n();
    if y.len() != n {
        return Err(Error::Dimension("response length differs from rows".into()));
    }
    if n > 12 {
        return Err(Error::Range(format!(
            "exhaustive search limited to n <= 12, got {n}"
        )));
    }
    let xm = x.matrix();
    let chol = normal_equations(xm)?;
    let yv = DVector::from_column_slice(y);

    let mut p: Vec<usize> = (0..n).collect();
    let mut best: Option<(f64, Vec<usize>, DVector<f64>)> = None;
    let mut scanned = 0u64;
    loop {
        scanned += 1;
        let moved = p.iter().enumerate().filter(|(i, v)| i != *v).count();
        if moved <= k {
            let px = xm.select_rows(&p);
            let beta = chol.solve(&(px.transpose() * &yv));
            let obj = (&yv - &px * &beta).norm_squared();
            if best.as_ref().is_none_or(|(b, _, _)| obj < *b) {
                best = Some((obj, p.clone(), beta));
            }
        }
        if !next_permutation(&mut p) {
            break;
        }
    }
    let (objective, map, beta) = best.expect("identity is always admissible");
    Ok(ExhaustiveSolution {
        objective,
        pi: SparsePermutation::from_map(map)?,
        beta: beta.iter().copied().collect(),
        permutations_scanned: scanned,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileSolution {
    pub beta: Vec<f64>,
    pub objective: f64,
    pub gradient_norm: f64,
    pub iterations: usize,
}

/// Profile of the robust objective after minimizing out `e`:
/// `(1/n) Σ h(r_i)` with `h(r) = r²` for `|r| ≤ c`, `2c|r| − c²` otherwise,
/// and `c = √n λ / 2`.
pub fn huber_profile(x: &DMatrix<f64>, y: &DVector<f64>, beta: &DVector<f64>, lambda: f64) -> f64 {
    let n = y.len() as f64;
    let c = n.sqrt() * lambda / 2.0;
    let r = y - x * beta;
    r.iter()
        .map(|&ri| {
            let a = ri.abs();
            if a <= c {
                ri * ri
            } else {
                2.0 * c * a - c * c
            }
        })
        .sum::<f64>()
        / n
}

fn huber_gradient(
    x: &DMatrix<f64>,
    y: &DVector<f64>,
    beta: &DVector<f64>,
    lambda: f64,
) -> DVector<f64> {
    let n = y.len() as f64;
    let c = n.sqrt() * lambda / 2.0;
    let psi = (y - x * beta).map(|ri| ri.clamp(-c, c));
    x.tr_mul(&psi) * (-2.0 / n)
}

/// Minimizes the robust objective by accelerated gradient descent with
/// adaptive restart on its Huber profile, stopping when the gradient
/// sup-norm drops below `grad_tol` or after `max_iter` steps.
pub fn robust_reference(
    x: &DesignMatrix,
    y: &[f64],
    lambda: f64,
    grad_tol: f64,
    max_iter: usize,
) -> Result<ProfileSolution> {
    let xm = x.matrix();
    let n = x.n() as f64;
    let yv = DVector::from_column_slice(y);
    let chol = normal_equations(xm)?;
    let gram = xm.transpose() * xm;
    let top_eig = gram
        .symmetric_eigenvalues()
        .iter()
        .fold(0.0f64, |m, v| m.max(*v));
    let step = 1.0 / (2.0 / n * top_eig);

    let mut beta = chol.solve(&(xm.transpose() * &yv));
    let mut z = beta.clone();
    let mut t = 1.0f64;
    let mut f_beta = huber_profile(xm, &yv, &beta, lambda);
    let mut iterations = 0;
    let mut grad_norm = huber_gradient(xm, &yv, &beta, lambda).amax();

    while iterations < max_iter && grad_norm > grad_tol {
        iterations += 1;
        let g = huber_gradient(xm, &yv, &z, lambda);
        let next = &z - g * step;
        let f_next = huber_profile(xm, &yv, &next, lambda);
        if f_next > f_beta {
            // Momentum overshot: restart from the last accepted point.
            z = beta.clone();
            t = 1.0;
            continue;
        }
        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        z = &next + (&next - &beta) * ((t - 1.0) / t_next);
        t = t_next;
        beta = next;
        f_beta = f_next;
        grad_norm = huber_gradient(xm, &yv, &beta, lambda).amax();
    }

    Ok(ProfileSolution {
        beta: beta.iter().copied().collect(),
        objective: f_beta,
        gradient_norm: grad_norm,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn next_permutation_counts() {
        let mut p = vec![0, 1, 2, 3];
        let mut count = 1;
        while next_permutation(&mut p) {
            count += 1;
        }
        assert_eq!(count, 24);
        assert_eq!(p, vec![3, 2, 1, 0]);
    }

    #[test]
    fn huber_profile_matches_definition() {
        let x = DMatrix::from_row_slice(4, 1, &[1.0, 1.0, 1.0, 1.0]);
        let y = DVector::from_vec(vec![0.0, 0.1, 5.0, -5.0]);
        let b = DVector::from_vec(vec![0.0]);
        // n = 4, λ = 1 → c = 1.
        let v = huber_profile(&x, &y, &b, 1.0);
        let expected = (0.0 + 0.01 + (10.0 - 1.0) + (10.0 - 1.0)) / 4.0;
        assert!((v - expected).abs() < 1e-15);
    }
}
