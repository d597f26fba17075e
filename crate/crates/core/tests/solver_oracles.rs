//! Production solvers against the slow reference implementations.

use proptest::prelude::*;
use sparseperm::oracle::{exhaustive_lsq, huber_profile, robust_reference};
use sparseperm::recovery::recover_permutation_sorted;
use sparseperm::solvers::{
    candidate_count, fit_exact_bruteforce, fit_exact_d1_sorting, fit_ols, fit_robust,
    fit_robust_default, kkt_residual, lambda_value, robust_objective, LambdaRule, DEFAULT_BUDGET,
};
use sparseperm::{generate_design, synthesize, DesignMatrix};

use nalgebra::DVector;

fn every_permutation(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in every_permutation(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

#[test]
fn bruteforce_matches_exhaustive_scan() {
    let mut case = 0u64;
    for n in 4..=7 {
        for d in [1, 2] {
            for k in [0, 2, 3] {
                for rep in 0..3 {
                    case += 1;
                    let obs = synthesize(n, d, k.min(n), 0.3, 1000 * case + rep).unwrap();
                    let fast = fit_exact_bruteforce(&obs.x, &obs.y, k, DEFAULT_BUDGET).unwrap();
                    let slow = exhaustive_lsq(&obs.x, &obs.y, k).unwrap();
                    assert!(
                        (fast.objective - slow.objective).abs() <= 1e-9 * slow.objective.max(1.0),
                        "n={n} d={d} k={k}: {} vs {}",
                        fast.objective,
                        slow.objective
                    );
                    assert_eq!(fast.candidates_evaluated, candidate_count(n, k));
                    assert!(fast.pi.hamming() <= k);
                }
            }
        }
    }
}

#[test]
fn d1_sorting_matches_unconstrained_exhaustive_scan() {
    for seed in 0..20 {
        let n = 4 + (seed as usize % 4);
        let obs = synthesize(n, 1, n, 0.5, seed).unwrap();
        let (pi, b) = fit_exact_d1_sorting(&obs.x.column(0), &obs.y).unwrap();
        let slow = exhaustive_lsq(&obs.x, &obs.y, n).unwrap();
        let fitted = pi.apply(&obs.x.column(0)).unwrap();
        let rss: f64 = obs
            .y
            .iter()
            .zip(&fitted)
            .map(|(y, x)| (y - b * x).powi(2))
            .sum();
        assert!(
            (rss - slow.objective).abs() <= 1e-9 * slow.objective.max(1.0),
            "seed {seed}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sorted_matching_maximizes_inner_product(n in 1usize..=6, seed in 0u64..10_000) {
        let obs = synthesize(n, 2, 0, 1.0, seed).unwrap();
        let theta = [0.7, -1.3];
        let pi = recover_permutation_sorted(&obs.x, &obs.y, &theta).unwrap();
        let fitted = obs.x.times(&theta).unwrap();
        let score = |map: &[usize]| -> f64 { (0..n).map(|i| fitted[map[i]] * obs.y[i]).sum() };
        let got = score(pi.map());
        let best = every_permutation(n).iter().map(|p| score(p)).fold(f64::NEG_INFINITY, f64::max);
        prop_assert!((got - best).abs() <= 1e-12 * best.abs().max(1.0));
    }

    #[test]
    fn sorting_is_invariant_to_increasing_affine_maps(
        n in 2usize..=30, seed in 0u64..10_000, a in 0.01f64..100.0, b in -50.0f64..50.0
    ) {
        let obs = synthesize(n, 1, n.min(4), 0.2, seed).unwrap();
        let base = recover_permutation_sorted(&obs.x, &obs.y, &[1.0]).unwrap();
        let shifted = DesignMatrix::from_row_slice(
            n, 2,
            &obs.x.column(0).iter().flat_map(|&v| [v, 1.0]).collect::<Vec<_>>(),
        ).unwrap();
        let moved = recover_permutation_sorted(&shifted, &obs.y, &[a, b]).unwrap();
        prop_assert_eq!(base, moved);
    }
}

fn reference_objective(x: &DesignMatrix, y: &[f64], lambda: f64) -> f64 {
    let r = robust_reference(x, y, lambda, 1e-13, 500_000).unwrap();
    r.objective
}

#[test]
fn robust_fit_matches_reference_minimizer() {
    for (i, sigma) in [0.01, 0.1].into_iter().cycle().take(40).enumerate() {
        let obs = synthesize(50, 5, 5, sigma, 7000 + i as u64).unwrap();
        let lambda = lambda_value(LambdaRule::SimulationRule { sigma }, 50).unwrap();
        let fit = fit_robust_default(&obs.x, &obs.y, lambda).unwrap();
        assert!(fit.converged);
        let kkt = kkt_residual(&fit, &obs.x, &obs.y).unwrap();
        assert!(kkt <= 1e-6, "instance {i}: kkt {kkt:e}");
        let ours = robust_objective(&obs.x, &obs.y, &fit.beta, &fit.e, lambda).unwrap();
        let theirs = reference_objective(&obs.x, &obs.y, lambda);
        assert!(
            ours <= theirs + 1e-9 * theirs,
            "instance {i}: {ours} vs {theirs}"
        );
        assert!(
            (ours - theirs).abs() <= 1e-8 * theirs,
            "instance {i}: {ours} vs {theirs}"
        );
        // The profile at β̃ is the joint objective with e minimized out.
        let prof = huber_profile(
            obs.x.matrix(),
            &DVector::from_column_slice(&obs.y),
            &DVector::from_column_slice(&fit.beta),
            lambda,
        );
        assert!((prof - ours).abs() <= 1e-12 * ours.max(1e-300) + 1e-15);
    }
}

#[test]
fn lambda_above_threshold_gives_ols() {
    for seed in 0..30 {
        let obs = synthesize(40, 4, 6, 0.5, seed).unwrap();
        let ols = fit_ols(&obs.x, &obs.y).unwrap();
        let rmax = ols.residuals.iter().fold(0.0f64, |m, r| m.max(r.abs()));
        let lambda = 2.0 * rmax / 40f64.sqrt() * 1.0001;
        let fit = fit_robust(&obs.x, &obs.y, lambda, 1e-12, 100).unwrap();
        assert!(fit.e.iter().all(|&e| e == 0.0), "seed {seed}");
        for (a, b) in fit.beta.iter().zip(&ols.beta) {
            assert!((a - b).abs() <= 1e-10, "seed {seed}");
        }
    }
}

#[test]
fn lambda_just_below_threshold_flags_the_largest_residual() {
    let obs = synthesize(40, 4, 6, 0.5, 3).unwrap();
    let ols = fit_ols(&obs.x, &obs.y).unwrap();
    let (imax, rmax) = ols
        .residuals
        .iter()
        .enumerate()
        .fold((0, 0.0f64), |(bi, bm), (i, r)| {
            if r.abs() > bm {
                (i, r.abs())
            } else {
                (bi, bm)
            }
        });
    let lambda = 2.0 * rmax / 40f64.sqrt() * 0.98;
    let fit = fit_robust_default(&obs.x, &obs.y, lambda).unwrap();
    assert!(fit.e[imax] != 0.0);
}

#[test]
fn design_generation_is_reproducible_across_calls() {
    assert_eq!(
        generate_design(30, 4, 5).unwrap(),
        generate_design(30, 4, 5).unwrap()
    );
}
