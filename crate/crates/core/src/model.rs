//! Sparsely permuted linear regression model.
//!
//! Observations follow `y = Π* X β* + ε` where `Π*` moves at most `k` of the
//! `n` rows. A permutation is stored as a map `φ` with `(Π v)[i] = v[φ(i)]`,
//! so `y[i]` is generated from row `φ(i)` of the design. All indices are
//! zero-based.
//!
//! Random generation goes through [`stream_rng`]: every seed owns a ChaCha8
//! generator and each model component (design, coefficients, permutation,
//! noise) draws from its own stream, so changing one component never shifts
//! the draws of another.

use nalgebra::{DMatrix, DVector};
use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub const STREAM_DESIGN: u64 = 0;
pub const STREAM_BETA: u64 = 1;
pub const STREAM_PERMUTATION: u64 = 2;
pub const STREAM_NOISE: u64 = 3;

/// Deterministic generator for `(seed, stream)`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Seed of replication `rep` derived from a base seed.
pub fn replication_seed(base_seed: u64, rep: u64) -> u64 {
    base_seed ^ rep
}

/// A bijection on `{0, .., n-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SparsePermutation {
    map: Vec<usize>,
}

impl SparsePermutation {
    pub fn identity(n: usize) -> Self {
        Self {
            map: (0..n).collect(),
        }
    }

    /// Builds a permutation from its map, checking that it is a bijection.
    pub fn from_map(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for (i, &j) in map.iter().enumerate() {
            if j >= n {
                return Err(Error::Range(format!("map[{i}] = {j} is outside 0..{n}")));
            }
            if seen[j] {
                return Err(Error::Range(format!("index {j} appears twice in map")));
            }
            seen[j] = true;
        }
        Ok(Self { map })
    }

    /// Swaps `a` and `b`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        if a >= n || b >= n {
            return Err(Error::Range(format!(
                "transposition ({a}, {b}) outside 0..{n}"
            )));
        }
        let mut map: Vec<usize> = (0..n).collect();
        map.swap(a, b);
        Ok(Self { map })
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn into_map(self) -> Vec<usize> {
        self.map
    }

    /// Indices that are not fixed points, in increasing order.
    pub fn support(&self) -> Vec<usize> {
        self.map
            .iter()
            .enumerate()
            .filter(|(i, &j)| *i != j)
            .map(|(i, _)| i)
            .collect()
    }

    /// Hamming distance to the identity.
    pub fn hamming(&self) -> usize {
        self.map
            .iter()
            .enumerate()
            .filter(|(i, &j)| *i != j)
            .count()
    }

    pub fn is_identity(&self) -> bool {
        self.hamming() == 0
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (i, &j) in self.map.iter().enumerate() {
            inv[j] = i;
        }
        Self { map: inv }
    }

    /// `self ∘ other`, i.e. applying `other` first and then `self` to a vector.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n() != other.n() {
            return Err(Error::Dimension(format!(
                "cannot compose permutations of size {} and {}",
                self.n(),
                other.n()
            )));
        }
        // (self (other v))[i] = (other v)[self[i]] = v[other[self[i]]]
        Ok(Self {
            map: self.map.iter().map(|&j| other.map[j]).collect(),
        })
    }

    /// Number of positions where the two maps disagree.
    pub fn hamming_to(&self, other: &Self) -> Result<usize> {
        if self.n() != other.n() {
            return Err(Error::Dimension(format!(
                "permutations of size {} and {}",
                self.n(),
                other.n()
            )));
        }
        Ok(self
            .map
            .iter()
            .zip(&other.map)
            .filter(|(a, b)| a != b)
            .count())
    }

    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.n() {
            return Err(Error::Dimension(format!(
                "vector of length {} for permutation of size {}",
                v.len(),
                self.n()
            )));
        }
        Ok(self.map.iter().map(|&j| v[j]).collect())
    }
}

/// `result[i] = v[pi.map[i]]`.
pub fn apply_permutation(pi: &SparsePermutation, v: &[f64]) -> Result<Vec<f64>> {
    pi.apply(v)
}

/// An `n × d` design with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    entries: DMatrix<f64>,
}

impl DesignMatrix {
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        if entries.nrows() == 0 || entries.ncols() == 0 {
            return Err(Error::Dimension(format!(
                "design must be at least 1x1, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        if let Some(pos) = entries.iter().position(|v| !v.is_finite()) {
            let (r, c) = (pos % entries.nrows(), pos / entries.nrows());
            return Err(Error::Parameter(format!(
                "design entry ({r}, {c}) is not finite"
            )));
        }
        Ok(Self { entries })
    }

    pub fn from_row_slice(n: usize, d: usize, data: &[f64]) -> Result<Self> {
        if data.len() != n * d {
            return Err(Error::Dimension(format!(
                "{} values cannot fill a {n}x{d} matrix",
                data.len()
            )));
        }
        Self::new(DMatrix::from_row_slice(n, d, data))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let d = rows.first().map_or(0, Vec::len);
        if let Some(i) = rows.iter().position(|r| r.len() != d) {
            return Err(Error::Dimension(format!(
                "row {i} has {} entries, expected {d}",
                rows[i].len()
            )));
        }
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        Self::from_row_slice(n, d, &flat)
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn d(&self) -> usize {
        self.entries.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.entries.row(i).iter().copied().collect()
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.entries.column(j).iter().copied().collect()
    }

    /// `X b` as a plain vector.
    pub fn times(&self, b: &[f64]) -> Result<Vec<f64>> {
        if b.len() != self.d() {
            return Err(Error::Dimension(format!(
                "coefficient vector of length {} for design with {} columns",
                b.len(),
                self.d()
            )));
        }
        let b = DVector::from_column_slice(b);
        Ok((&self.entries * b).iter().copied().collect())
    }

    /// Design restricted to the given rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Dimension("cannot select zero rows".into()));
        }
        Self::new(self.entries.select_rows(rows))
    }

    /// Rows reordered by a permutation: row `i` of the result is row `pi[i]`.
    pub fn permuted(&self, pi: &SparsePermutation) -> Result<Self> {
        if pi.n() != self.n() {
            return Err(Error::Dimension(format!(
                "permutation of size {} for design with {} rows",
                pi.n(),
                self.n()
            )));
        }
        Self::new(self.entries.select_rows(pi.map()))
    }
}

/// Parameters that generated an [`ObservationSet`].
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    pub beta_star: Vec<f64>,
    pub pi_star: SparsePermutation,
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObservationSet {
    pub x: DesignMatrix,
    pub y: Vec<f64>,
    pub truth: Option<GroundTruth>,
}

impl ObservationSet {
    pub fn new(x: DesignMatrix, y: Vec<f64>) -> Result<Self> {
        if y.len() != x.n() {
            return Err(Error::Dimension(format!(
                "response has {} entries, design has {} rows",
                y.len(),
                x.n()
            )));
        }
        Ok(Self { x, y, truth: None })
    }

    pub fn n(&self) -> usize {
        self.x.n()
    }

    pub fn d(&self) -> usize {
        self.x.d()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BetaRule {
    #[default]
    UnitSphereUniform,
}

/// A `(σ, k/n)` grid of Monte-Carlo experiments.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationSpec {
    pub n: usize,
    pub d: usize,
    pub k_fractions: Vec<f64>,
    pub sigmas: Vec<f64>,
    pub replications: usize,
    pub base_seed: u64,
    pub beta_rule: BetaRule,
}

impl SimulationSpec {
    pub const STANDARD_SIGMAS: [f64; 7] = [0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0];
    pub const STANDARD_K_FRACTIONS: [f64; 12] = [
        0.01, 0.02, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5,
    ];

    /// The `n = 200`, `d = 10`, 100-replication grid.
    pub fn standard_grid() -> Self {
        Self {
            n: 200,
            d: 10,
            k_fractions: Self::STANDARD_K_FRACTIONS.to_vec(),
            sigmas: Self::STANDARD_SIGMAS.to_vec(),
            replications: 100,
            base_seed: 0,
            beta_rule: BetaRule::UnitSphereUniform,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.d == 0 {
            return Err(Error::Spec(format!(
                "n and d must be positive (n = {}, d = {})",
                self.n, self.d
            )));
        }
        if self.replications == 0 {
            return Err(Error::Spec("replications must be at least 1".into()));
        }
        if self.k_fractions.is_empty() || self.sigmas.is_empty() {
            return Err(Error::Spec("empty k_fractions or sigmas grid".into()));
        }
        for &f in &self.k_fractions {
            if !(0.0..=1.0).contains(&f) {
                return Err(Error::Spec(format!("k_fraction {f} outside [0, 1]")));
            }
        }
        for &s in &self.sigmas {
            if !(s.is_finite() && s > 0.0) {
                return Err(Error::Spec(format!("sigma {s} must be positive")));
            }
        }
        Ok(())
    }
}

/// Number of mismatches for a fraction of `n`; a single mismatch is
/// impossible, so `1` becomes `2`.
pub fn k_from_fraction(fraction: f64, n: usize) -> usize {
    let k = (fraction * n as f64).round() as usize;
    if k == 1 {
        if n >= 2 {
            log::warn!("k/n = {fraction} gives k = 1 for n = {n}; using k = 2");
            return 2;
        }
        return 0;
    }
    k.min(n)
}

pub fn generate_design(n: usize, d: usize, seed: u64) -> Result<DesignMatrix> {
    design_with_rng(n, d, &mut stream_rng(seed, STREAM_DESIGN))
}

pub(crate) fn design_with_rng<R: Rng>(n: usize, d: usize, rng: &mut R) -> Result<DesignMatrix> {
    if n == 0 || d == 0 {
        return Err(Error::Dimension(format!(
            "design must be at least 1x1, got {n}x{d}"
        )));
    }
    // Row-major draws so that row i only depends on the first (i+1)·d draws.
    let data: Vec<f64> = (0..n * d).map(|_| rng.sample(StandardNormal)).collect();
    DesignMatrix::from_row_slice(n, d, &data)
}

/// A permutation with exactly `k` non-fixed points: a uniform `k`-subset
/// of indices, deranged uniformly.
pub fn sample_sparse_permutation(n: usize, k: usize, seed: u64) -> Result<SparsePermutation> {
    permutation_with_rng(n, k, &mut stream_rng(seed, STREAM_PERMUTATION))
}

pub(crate) fn permutation_with_rng<R: Rng>(
    n: usize,
    k: usize,
    rng: &mut R,
) -> Result<SparsePermutation> {
    if k > n {
        return Err(Error::Range(format!("k = {k} exceeds n = {n}")));
    }
    if k == 1 {
        return Err(Error::InfeasibleSparsity { n });
    }
    let mut support = index::sample(rng, n, k).into_vec();
    support.sort_unstable();

    // Rejection sampling of a derangement; acceptance probability → 1/e.
    let mut images = support.clone();
    loop {
        images.shuffle(rng);
        if images.iter().zip(&support).all(|(a, b)| a != b) {
            break;
        }
    }
    let mut map: Vec<usize> = (0..n).collect();
    for (&i, &j) in support.iter().zip(&images) {
        map[i] = j;
    }
    Ok(SparsePermutation { map })
}

/// Uniform draw from the unit sphere in `R^d`.
pub fn unit_sphere_with_rng<R: Rng>(d: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let g: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 1e-300 {
            return g.into_iter().map(|v| v / norm).collect();
        }
    }
}

pub(crate) fn noise_with_rng<R: Rng>(n: usize, sigma: f64, rng: &mut R) -> Vec<f64> {
    (0..n)
        .map(|_| sigma * rng.sample::<f64, _>(StandardNormal))
        .collect()
}

/// Draws `(X, y)` with `X` Gaussian, `β*` uniform on the sphere, `Π*` with
/// exactly `k` mismatches and `y = Π* X β* + σ ε`.
pub fn synthesize(n: usize, d: usize, k: usize, sigma: f64, seed: u64) -> Result<ObservationSet> {
    let beta = unit_sphere_with_rng(d, &mut stream_rng(seed, STREAM_BETA));
    synthesize_with_beta(n, d, k, sigma, beta, seed)
}

/// Like [`synthesize`] with a caller-supplied `β*`.
pub fn synthesize_with_beta(
    n: usize,
    d: usize,
    k: usize,
    sigma: f64,
    beta_star: Vec<f64>,
    seed: u64,
) -> Result<ObservationSet> {
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(Error::Parameter(format!(
            "sigma = {sigma} must be nonnegative"
        )));
    }
    if beta_star.len() != d {
        return Err(Error::Dimension(format!(
            "beta_star has {} entries, expected {d}",
            beta_star.len()
        )));
    }
    let x = generate_design(n, d, seed)?;
    let pi_star = sample_sparse_permutation(n, k, seed)?;
    let signal = pi_star.apply(&x.times(&beta_star)?)?;
    let noise = noise_with_rng(n, sigma, &mut stream_rng(seed, STREAM_NOISE));
    let y = signal.iter().zip(&noise).map(|(s, e)| s + e).collect();
    Ok(ObservationSet {
        x,
        y,
        truth: Some(GroundTruth {
            beta_star,
            pi_star,
            sigma,
        }),
    })
}

/// `‖β*‖² / σ²`.
pub fn snr(beta_star: &[f64], sigma: f64) -> Result<f64> {
    if sigma == 0.0 {
        return Err(Error::Parameter(
            "SNR is undefined for sigma = 0 (division by zero)".into(),
        ));
    }
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::Parameter(format!(
            "sigma = {sigma} must be positive"
        )));
    }
    Ok(beta_star.iter().map(|b| b * b).sum::<f64>() / (sigma * sigma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashMap;

    #[test]
    fn design_is_deterministic() {
        let a = generate_design(3, 2, 7).unwrap();
        let b = generate_design(3, 2, 7).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, generate_design(3, 2, 8).unwrap());
    }

    #[test]
    fn design_entries_are_centered() {
        let x = generate_design(10_000, 1, 1).unwrap();
        let mean = x.matrix().iter().sum::<f64>() / 10_000.0;
        assert!(mean.abs() < 0.05, "mean = {mean}");
        let var = x.matrix().iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 9_999.0;
        assert!((var - 1.0).abs() < 0.05, "var = {var}");
    }

    #[test]
    fn empty_design_is_rejected() {
        assert!(matches!(generate_design(0, 1, 1), Err(Error::Dimension(_))));
        assert!(matches!(generate_design(1, 0, 1), Err(Error::Dimension(_))));
    }

    #[test]
    fn zero_mismatches_give_identity() {
        let p = sample_sparse_permutation(5, 0, 3).unwrap();
        assert!(p.is_identity());
    }

    #[test]
    fn two_mismatches_give_a_transposition() {
        let p = sample_sparse_permutation(5, 2, 3).unwrap();
        assert_eq!(p.hamming(), 2);
        let s = p.support();
        assert_eq!(p.map()[s[0]], s[1]);
        assert_eq!(p.map()[s[1]], s[0]);
    }

    #[test]
    fn single_mismatch_is_infeasible() {
        assert_eq!(
            sample_sparse_permutation(5, 1, 0),
            Err(Error::InfeasibleSparsity { n: 5 })
        );
        assert!(matches!(
            sample_sparse_permutation(5, 6, 0),
            Err(Error::Range(_))
        ));
    }

    /// Every permutation of {0..3} moving exactly 3 points: a 3-subset (4
    /// choices) times one of its two 3-cycles.
    fn three_cycles_of_four() -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let m = vec![a, b, c, d];
                        let mut sorted = m.clone();
                        sorted.sort();
                        let moved = m.iter().enumerate().filter(|(i, v)| i != *v).count();
                        if sorted == vec![0, 1, 2, 3] && moved == 3 {
                            out.push(m);
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn three_mismatches_are_uniform_over_three_cycles() {
        let all = three_cycles_of_four();
        assert_eq!(all.len(), 8);
        let draws = 10_000;
        let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
        for seed in 0..draws {
            let p = sample_sparse_permutation(4, 3, seed).unwrap();
            assert_eq!(p.hamming(), 3);
            *counts.entry(p.into_map()).or_default() += 1;
        }
        assert_eq!(counts.len(), 8);
        // Chi-square with 7 degrees of freedom; 24.3 is the 0.999 quantile.
        let expected = draws as f64 / 8.0;
        let chi2: f64 = all
            .iter()
            .map(|m| {
                let c = *counts.get(m).unwrap_or(&0) as f64;
                (c - expected).powi(2) / expected
            })
            .sum();
        assert!(chi2 < 24.3, "chi2 = {chi2}, counts = {counts:?}");
    }

    #[test]
    fn apply_examples() {
        let id = SparsePermutation::identity(3);
        assert_eq!(
            apply_permutation(&id, &[1.0, 2.0, 3.0]).unwrap(),
            vec![1.0, 2.0, 3.0]
        );
        let swap = SparsePermutation::transposition(3, 0, 1).unwrap();
        assert_eq!(
            apply_permutation(&swap, &[1.0, 2.0, 3.0]).unwrap(),
            vec![2.0, 1.0, 3.0]
        );
        assert!(matches!(
            apply_permutation(&swap, &[1.0]),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn from_map_rejects_non_bijections() {
        assert!(SparsePermutation::from_map(vec![0, 0]).is_err());
        assert!(SparsePermutation::from_map(vec![0, 2]).is_err());
        assert!(SparsePermutation::from_map(vec![1, 0]).is_ok());
    }

    #[test]
    fn compose_with_inverse_is_identity() {
        let p = sample_sparse_permutation(9, 5, 11).unwrap();
        assert!(p.compose(&p.inverse()).unwrap().is_identity());
        assert!(p.inverse().compose(&p).unwrap().is_identity());
        let v: Vec<f64> = (0..9).map(|i| i as f64 * 1.5).collect();
        let q = sample_sparse_permutation(9, 4, 12).unwrap();
        let lhs = p.compose(&q).unwrap().apply(&v).unwrap();
        let rhs = p.apply(&q.apply(&v).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn noiseless_identity_model_is_exact() {
        let obs = synthesize(20, 3, 0, 0.0, 5).unwrap();
        let truth = obs.truth.as_ref().unwrap();
        assert_eq!(obs.y, obs.x.times(&truth.beta_star).unwrap());
    }

    #[test]
    fn noiseless_mismatches_change_exactly_k_responses() {
        for seed in 0..20 {
            let obs = synthesize(10, 2, 4, 0.0, seed).unwrap();
            let truth = obs.truth.as_ref().unwrap();
            let fitted = obs.x.times(&truth.beta_star).unwrap();
            let changed = obs.y.iter().zip(&fitted).filter(|(a, b)| a != b).count();
            assert_eq!(changed, 4);
            assert_eq!(truth.pi_star.hamming(), 4);
        }
    }

    #[test]
    fn beta_star_has_unit_norm() {
        for seed in 0..50 {
            let obs = synthesize(12, 4, 2, 0.1, seed).unwrap();
            let b = &obs.truth.unwrap().beta_star;
            let norm = b.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn synthesize_is_bit_deterministic() {
        assert_eq!(
            synthesize(30, 3, 6, 0.5, 99).unwrap(),
            synthesize(30, 3, 6, 0.5, 99).unwrap()
        );
    }

    #[test]
    fn snr_examples() {
        assert_eq!(snr(&[3.0, 4.0], 5.0).unwrap(), 1.0);
        assert_eq!(snr(&[0.0, 0.0], 1.0).unwrap(), 0.0);
        assert!((snr(&[0.6, 0.8], 0.1).unwrap() - 100.0).abs() < 1e-9);
        let err = snr(&[1.0], 0.0).unwrap_err();
        assert!(err.to_string().contains("division by zero"));
    }

    #[test]
    fn k_from_fraction_rounds_and_avoids_one() {
        assert_eq!(k_from_fraction(0.01, 200), 2);
        assert_eq!(k_from_fraction(0.005, 200), 2);
        assert_eq!(k_from_fraction(0.5, 200), 100);
        assert_eq!(k_from_fraction(0.0, 200), 0);
        assert_eq!(k_from_fraction(0.2, 12), 2);
    }

    #[test]
    fn standard_grid_is_valid() {
        let spec = SimulationSpec::standard_grid();
        spec.validate().unwrap();
        assert_eq!(spec.sigmas.len() * spec.k_fractions.len(), 84);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn sampled_permutations_are_exact(n in 1usize..60, kf in 0.0f64..=1.0, seed in any::<u64>()) {
            let mut k = (kf * n as f64).floor() as usize;
            if k == 1 { k = if n >= 2 { 2 } else { 0 }; }
            let p = sample_sparse_permutation(n, k, seed).unwrap();
            prop_assert!(SparsePermutation::from_map(p.map().to_vec()).is_ok());
            prop_assert_eq!(p.hamming(), k);
            prop_assert_eq!(p.support().len(), k);
            prop_assert!(p.compose(&p.inverse()).unwrap().is_identity());
            let v: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
            prop_assert_eq!(p.inverse().apply(&p.apply(&v).unwrap()).unwrap(), v);
        }
    }
}
