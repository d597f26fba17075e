//! Monte-Carlo experiments over `(σ, k/n)` grids and their CSV output.
//!
//! Every replication draws its data from `replication_seed(base_seed, rep)`,
//! so the same replication index sees the same design, coefficients and
//! noise stream in every grid cell. Tasks are independent and results are
//! gathered in `(σ, k/n, rep)` order, which makes serial and parallel runs
//! produce identical summaries.

use std::fmt;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{
    k_from_fraction, replication_seed, stream_rng, synthesize, synthesize_with_beta,
    unit_sphere_with_rng, GroundTruth, ObservationSet, SimulationSpec, SparsePermutation,
    STREAM_BETA,
};
use crate::recovery::{recover_permutation_sorted, two_stage};
use crate::solvers::{
    fit_exact_bruteforce, fit_exact_d1_sorting, fit_ols, fit_robust_default, lambda_value,
    LambdaRule, DEFAULT_BUDGET, MAX_BRUTEFORCE_N,
};
use crate::theory::pure_noise_norm_bound;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Estimator {
    /// OLS ignoring the mismatches.
    Naive,
    /// The convex relaxation with the simulation λ.
    Robust,
    /// OLS after dropping the `k` largest `|ẽ_i|`.
    Refit,
    /// The permutation-constrained least-squares estimator (`d = 1` only).
    Exact,
    /// OLS with `Π*` known.
    Oracle,
}

impl Estimator {
    pub fn name(self) -> &'static str {
        match self {
            Estimator::Naive => "naive",
            Estimator::Robust => "robust",
            Estimator::Refit => "refit",
            Estimator::Exact => "exact",
            Estimator::Oracle => "oracle",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [
            Estimator::Naive,
            Estimator::Robust,
            Estimator::Refit,
            Estimator::Exact,
            Estimator::Oracle,
        ]
        .into_iter()
        .find(|e| e.name() == s)
    }
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

/// Per-replication outcome. Errors are `‖β̂ − β*‖₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialMetrics {
    pub rep: usize,
    pub seed: u64,
    pub l2_error_naive: f64,
    pub l2_error_robust: f64,
    /// Grid runs only.
    pub l2_error_refit: Option<f64>,
    /// `d = 1` comparison only.
    pub l2_error_exact: Option<f64>,
    pub l2_error_oracle: f64,
    pub support_precision: f64,
    pub support_recall: f64,
    pub permutation_exact: bool,
    pub permutation_hamming_error: usize,
    pub wall_time_ms: f64,
}

impl TrialMetrics {
    pub fn error(&self, est: Estimator) -> Option<f64> {
        match est {
            Estimator::Naive => Some(self.l2_error_naive),
            Estimator::Robust => Some(self.l2_error_robust),
            Estimator::Refit => self.l2_error_refit,
            Estimator::Exact => self.l2_error_exact,
            Estimator::Oracle => Some(self.l2_error_oracle),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorSummary {
    pub estimator: Estimator,
    /// Mean over replications of `log₂ ‖β̂ − β*‖₂`.
    pub mean_log2_l2_error: f64,
    /// Standard error of that mean.
    pub std_error: f64,
    pub mean_l2_error: f64,
    pub reps: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridCellSummary {
    pub sigma: f64,
    pub k_fraction: f64,
    pub k: usize,
    pub estimators: Vec<EstimatorSummary>,
    pub trials: Vec<TrialMetrics>,
    /// Why the cell was not run, if it was not.
    pub skipped: Option<String>,
}

impl GridCellSummary {
    pub fn estimator(&self, est: Estimator) -> Option<&EstimatorSummary> {
        self.estimators.iter().find(|s| s.estimator == est)
    }

    /// Fraction of replications where the exact estimator is at least as
    /// accurate as the robust one (`d = 1` comparison).
    pub fn exact_not_worse_fraction(&self) -> Option<f64> {
        let pairs: Vec<bool> = self
            .trials
            .iter()
            .filter_map(|t| t.l2_error_exact.map(|e| e <= t.l2_error_robust))
            .collect();
        if pairs.is_empty() {
            return None;
        }
        Some(pairs.iter().filter(|&&b| b).count() as f64 / pairs.len() as f64)
    }
}

/// `log₂` of an error, with zero mapped to the smallest positive double so
/// that exact fits stay finite.
pub fn log2_error(err: f64) -> f64 {
    err.max(f64::MIN_POSITIVE).log2()
}

fn l2_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn summarize(est: Estimator, trials: &[TrialMetrics]) -> Option<EstimatorSummary> {
    let errs: Vec<f64> = trials.iter().filter_map(|t| t.error(est)).collect();
    if errs.is_empty() {
        return None;
    }
    let m = errs.len() as f64;
    let logs: Vec<f64> = errs.iter().map(|&e| log2_error(e)).collect();
    let mean = logs.iter().sum::<f64>() / m;
    let std_error = if errs.len() > 1 {
        let var = logs.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (m - 1.0);
        (var / m).sqrt()
    } else {
        0.0
    };
    Some(EstimatorSummary {
        estimator: est,
        mean_log2_l2_error: mean,
        std_error,
        mean_l2_error: errs.iter().sum::<f64>() / m,
        reps: errs.len(),
    })
}

/// Exact-recovery flag and Hamming distance between an estimated and the
/// true permutation (both in the `y ≈ Π X β` convention).
pub fn evaluate_permutation(
    pi_est: &SparsePermutation,
    truth: &GroundTruth,
) -> Result<(bool, usize)> {
    let h = pi_est.hamming_to(&truth.pi_star)?;
    Ok((h == 0, h))
}

/// OLS on the responses put back in design order, `Π*⁻¹ y`.
pub fn oracle_ols(obs: &ObservationSet) -> Result<Vec<f64>> {
    let truth = truth_of(obs)?;
    let y = truth.pi_star.inverse().apply(&obs.y)?;
    Ok(fit_ols(&obs.x, &y)?.beta)
}

fn truth_of(obs: &ObservationSet) -> Result<&GroundTruth> {
    obs.truth
        .as_ref()
        .ok_or_else(|| Error::Parameter("observation set carries no ground truth".into()))
}

struct Cell {
    sigma: f64,
    k_fraction: f64,
    k: usize,
    skipped: Option<String>,
}

fn plan_cells(spec: &SimulationSpec) -> Vec<Cell> {
    let mut cells = Vec::new();
    for &sigma in &spec.sigmas {
        for &k_fraction in &spec.k_fractions {
            let k = k_from_fraction(k_fraction, spec.n);
            let skipped = (spec.n <= k + spec.d)
                .then(|| format!("n - k = {} does not exceed d = {}", spec.n - k, spec.d));
            if let Some(reason) = &skipped {
                log::warn!("skipping sigma = {sigma}, k/n = {k_fraction}: {reason}");
            }
            cells.push(Cell {
                sigma,
                k_fraction,
                k,
                skipped,
            });
        }
    }
    cells
}

fn map_tasks<T, F>(tasks: &[(usize, usize)], exec: Execution, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize, usize) -> Result<T> + Sync + Send,
{
    match exec {
        Execution::Serial => tasks.iter().map(|&(c, r)| f(c, r)).collect(),
        Execution::Parallel => tasks.par_iter().map(|&(c, r)| f(c, r)).collect(),
    }
}

fn run_cells<F>(
    spec: &SimulationSpec,
    exec: Execution,
    estimators: &[Estimator],
    trial: F,
) -> Result<Vec<GridCellSummary>>
where
    F: Fn(&Cell, usize, u64) -> Result<TrialMetrics> + Sync + Send,
{
    spec.validate()?;
    let cells = plan_cells(spec);
    let tasks: Vec<(usize, usize)> = cells
        .iter()
        .enumerate()
        .filter(|(_, c)| c.skipped.is_none())
        .flat_map(|(ci, _)| (0..spec.replications).map(move |r| (ci, r)))
        .collect();
    let results = map_tasks(&tasks, exec, |ci, rep| {
        let seed = replication_seed(spec.base_seed, rep as u64);
        trial(&cells[ci], rep, seed)
    })?;

    let mut results = results.into_iter();
    let mut out = Vec::with_capacity(cells.len());
    for cell in cells {
        let trials: Vec<TrialMetrics> = if cell.skipped.is_none() {
            results.by_ref().take(spec.replications).collect()
        } else {
            Vec::new()
        };
        let summaries = estimators
            .iter()
            .filter_map(|&e| summarize(e, &trials))
            .collect();
        out.push(GridCellSummary {
            sigma: cell.sigma,
            k_fraction: cell.k_fraction,
            k: cell.k,
            estimators: summaries,
            trials,
            skipped: cell.skipped,
        });
    }
    Ok(out)
}

fn precision_recall(est: &[usize], truth: &[usize]) -> (f64, f64) {
    let hits = est
        .iter()
        .filter(|i| truth.binary_search(i).is_ok())
        .count() as f64;
    let precision = if est.is_empty() {
        1.0
    } else {
        hits / est.len() as f64
    };
    let recall = if truth.is_empty() {
        1.0
    } else {
        hits / truth.len() as f64
    };
    (precision, recall)
}

/// One replication of the main experiment.
pub fn grid_trial(
    n: usize,
    d: usize,
    k: usize,
    sigma: f64,
    rep: usize,
    seed: u64,
) -> Result<TrialMetrics> {
    let start = Instant::now();
    let obs = synthesize(n, d, k, sigma, seed)?;
    let truth = truth_of(&obs)?;
    let beta = &truth.beta_star;

    let naive = fit_ols(&obs.x, &obs.y)?.beta;
    let oracle = oracle_ols(&obs)?;
    let rule = LambdaRule::SimulationRule { sigma };
    let staged = two_stage(&obs.x, &obs.y, k, rule)?;
    let (precision, recall) = precision_recall(&staged.support.indices, &truth.pi_star.support());
    let (exact, hamming) = evaluate_permutation(&staged.pi_tilde, truth)?;

    Ok(TrialMetrics {
        rep,
        seed,
        l2_error_naive: l2_distance(&naive, beta),
        l2_error_robust: l2_distance(&staged.robust.beta, beta),
        l2_error_refit: Some(l2_distance(&staged.refit_beta, beta)),
        l2_error_exact: None,
        l2_error_oracle: l2_distance(&oracle, beta),
        support_precision: precision,
        support_recall: recall,
        permutation_exact: exact,
        permutation_hamming_error: hamming,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Naive, robust, refit and oracle estimators on every cell of the grid.
pub fn run_grid(spec: &SimulationSpec) -> Result<Vec<GridCellSummary>> {
    run_grid_with(spec, Execution::Parallel)
}

pub fn run_grid_with(spec: &SimulationSpec, exec: Execution) -> Result<Vec<GridCellSummary>> {
    let ests = [
        Estimator::Naive,
        Estimator::Robust,
        Estimator::Refit,
        Estimator::Oracle,
    ];
    run_cells(spec, exec, &ests, |cell, rep, seed| {
        grid_trial(spec.n, spec.d, cell.k, cell.sigma, rep, seed)
    })
}

/// One replication of the single-predictor comparison. The exact estimator
/// is the `k`-constrained brute force for `n ≤ 12` and the unconstrained
/// sorting estimator otherwise.
pub fn d1_trial(n: usize, k: usize, sigma: f64, rep: usize, seed: u64) -> Result<TrialMetrics> {
    let start = Instant::now();
    let obs = synthesize(n, 1, k, sigma, seed)?;
    let truth = truth_of(&obs)?;
    let beta = &truth.beta_star;

    let naive = fit_ols(&obs.x, &obs.y)?.beta;
    let oracle = oracle_ols(&obs)?;
    let lambda = lambda_value(LambdaRule::SimulationRule { sigma }, n)?;
    let robust = fit_robust_default(&obs.x, &obs.y, lambda)?;
    let (pi, exact_beta) = if n <= MAX_BRUTEFORCE_N {
        let fit = fit_exact_bruteforce(&obs.x, &obs.y, k, DEFAULT_BUDGET)?;
        (fit.pi, fit.beta)
    } else {
        let (pi, b) = fit_exact_d1_sorting(&obs.x.column(0), &obs.y)?;
        (pi, vec![b])
    };
    let (precision, recall) = precision_recall(&pi.support(), &truth.pi_star.support());
    let (exact, hamming) = evaluate_permutation(&pi, truth)?;

    Ok(TrialMetrics {
        rep,
        seed,
        l2_error_naive: l2_distance(&naive, beta),
        l2_error_robust: l2_distance(&robust.beta, beta),
        l2_error_refit: None,
        l2_error_exact: Some(l2_distance(&exact_beta, beta)),
        l2_error_oracle: l2_distance(&oracle, beta),
        support_precision: precision,
        support_recall: recall,
        permutation_exact: exact,
        permutation_hamming_error: hamming,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Exact versus robust estimation with a single predictor.
pub fn run_d1_comparison(spec: &SimulationSpec) -> Result<Vec<GridCellSummary>> {
    run_d1_comparison_with(spec, Execution::Parallel)
}

pub fn run_d1_comparison_with(
    spec: &SimulationSpec,
    exec: Execution,
) -> Result<Vec<GridCellSummary>> {
    if spec.d != 1 {
        return Err(Error::Spec(format!(
            "the single-predictor comparison needs d = 1, got d = {}",
            spec.d
        )));
    }
    let ests = [
        Estimator::Naive,
        Estimator::Robust,
        Estimator::Exact,
        Estimator::Oracle,
    ];
    run_cells(spec, exec, &ests, |cell, rep, seed| {
        d1_trial(spec.n, cell.k, cell.sigma, rep, seed)
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PureNoiseReport {
    pub n: usize,
    pub sigma: f64,
    pub reps: usize,
    /// `‖β̂‖₂²` per replication.
    pub squared_norms: Vec<f64>,
    pub mean_squared_norm: f64,
    pub lower_bound: f64,
    pub fraction_above_bound: f64,
}

/// Fits the unconstrained single-predictor estimator to pure noise
/// (`β* = 0`) and compares `‖β̂‖₂²` with its lower bound.
pub fn pure_noise_demo(n: usize, sigma: f64, reps: usize, seed: u64) -> Result<PureNoiseReport> {
    if reps == 0 {
        return Err(Error::Parameter("reps must be at least 1".into()));
    }
    let lower_bound = pure_noise_norm_bound(n, 1, sigma)?;
    let squared_norms: Vec<f64> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let obs = synthesize_with_beta(
                n,
                1,
                0,
                sigma,
                vec![0.0],
                replication_seed(seed, rep as u64),
            )?;
            let (_, b) = fit_exact_d1_sorting(&obs.x.column(0), &obs.y)?;
            Ok(b * b)
        })
        .collect::<Result<_>>()?;
    let above = squared_norms.iter().filter(|&&v| v >= lower_bound).count();
    Ok(PureNoiseReport {
        n,
        sigma,
        reps,
        mean_squared_norm: squared_norms.iter().sum::<f64>() / reps as f64,
        lower_bound,
        fraction_above_bound: above as f64 / reps as f64,
        squared_norms,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SnrRecoveryRow {
    pub snr: f64,
    pub reps: usize,
    pub recovered: usize,
    pub recovery_rate: f64,
    pub mean_hamming_error: f64,
}

/// Exact-recovery rate of sorting with the true coefficients: `σ = 1`,
/// `‖β*‖₂² = SNR`, every row mismatched. An infinite SNR means no noise.
pub fn snr_recovery_curve(
    n: usize,
    d: usize,
    snr_values: &[f64],
    reps: usize,
    seed: u64,
) -> Result<Vec<SnrRecoveryRow>> {
    if n < 2 || d == 0 || reps == 0 {
        return Err(Error::Parameter(format!(
            "need n >= 2, d >= 1, reps >= 1; got n = {n}, d = {d}, reps = {reps}"
        )));
    }
    snr_values
        .iter()
        .map(|&snr| {
            if snr.is_nan() || snr < 0.0 {
                return Err(Error::Parameter(format!("SNR {snr} must be nonnegative")));
            }
            let hits: Vec<(bool, usize)> = (0..reps)
                .into_par_iter()
                .map(|rep| {
                    let s = replication_seed(seed, rep as u64);
                    let dir = unit_sphere_with_rng(d, &mut stream_rng(s, STREAM_BETA));
                    let (beta, sigma) = if snr.is_infinite() {
                        (dir, 0.0)
                    } else {
                        (dir.iter().map(|v| v * snr.sqrt()).collect(), 1.0)
                    };
                    let obs = synthesize_with_beta(n, d, n, sigma, beta, s)?;
                    let truth = truth_of(&obs)?;
                    let pi = recover_permutation_sorted(&obs.x, &obs.y, &truth.beta_star)?;
                    evaluate_permutation(&pi, truth)
                })
                .collect::<Result<_>>()?;
            let recovered = hits.iter().filter(|h| h.0).count();
            Ok(SnrRecoveryRow {
                snr,
                reps,
                recovered,
                recovery_rate: recovered as f64 / reps as f64,
                mean_hamming_error: hits.iter().map(|h| h.1 as f64).sum::<f64>() / reps as f64,
            })
        })
        .collect()
}

pub const RESULT_COLUMNS: [&str; 6] = [
    "sigma",
    "k_fraction",
    "estimator",
    "mean_log2_l2_error",
    "std_error",
    "reps",
];

/// One parsed row of the results CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub sigma: f64,
    pub k_fraction: f64,
    pub estimator: Estimator,
    pub mean_log2_l2_error: f64,
    pub std_error: f64,
    pub reps: usize,
}

/// Rows of the results CSV in output order; skipped cells contribute none.
pub fn result_rows(summaries: &[GridCellSummary]) -> Vec<ResultRow> {
    summaries
        .iter()
        .flat_map(|c| {
            c.estimators.iter().map(move |s| ResultRow {
                sigma: c.sigma,
                k_fraction: c.k_fraction,
                estimator: s.estimator,
                mean_log2_l2_error: s.mean_log2_l2_error,
                std_error: s.std_error,
                reps: s.reps,
            })
        })
        .collect()
}

fn io_err(path: &Path, e: impl fmt::Display) -> Error {
    Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

/// Results CSV (see [`RESULT_COLUMNS`]) as bytes.
pub fn results_csv(summaries: &[GridCellSummary]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let to_err = |e: csv::Error| Error::Io {
        path: "<memory>".into(),
        message: e.to_string(),
    };
    w.write_record(RESULT_COLUMNS).map_err(to_err)?;
    for r in result_rows(summaries) {
        w.write_record([
            r.sigma.to_string(),
            r.k_fraction.to_string(),
            r.estimator.to_string(),
            r.mean_log2_l2_error.to_string(),
            r.std_error.to_string(),
            r.reps.to_string(),
        ])
        .map_err(to_err)?;
    }
    w.into_inner().map_err(|e| Error::Io {
        path: "<memory>".into(),
        message: e.to_string(),
    })
}

/// Tab-separated plot series: one row per `(estimator, k/n)` and one column
/// per `σ` holding the mean `log₂` error (`nan` for skipped cells).
pub fn plot_data_tsv(summaries: &[GridCellSummary]) -> String {
    let mut sigmas: Vec<f64> = Vec::new();
    let mut fractions: Vec<f64> = Vec::new();
    let mut ests: Vec<Estimator> = Vec::new();
    for c in summaries {
        if !sigmas.contains(&c.sigma) {
            sigmas.push(c.sigma);
        }
        if !fractions.contains(&c.k_fraction) {
            fractions.push(c.k_fraction);
        }
        for s in &c.estimators {
            if !ests.contains(&s.estimator) {
                ests.push(s.estimator);
            }
        }
    }
    ests.sort();
    let mut out = String::from("estimator\tk_fraction");
    for s in &sigmas {
        out.push_str(&format!("\tsigma={s}"));
    }
    out.push('\n');
    for &e in &ests {
        for &f in &fractions {
            out.push_str(&format!("{e}\t{f}"));
            for &s in &sigmas {
                let v = summaries
                    .iter()
                    .find(|c| c.sigma == s && c.k_fraction == f)
                    .and_then(|c| c.estimator(e))
                    .map_or(f64::NAN, |x| x.mean_log2_l2_error);
                out.push_str(&format!("\t{v}"));
            }
            out.push('\n');
        }
    }
    out
}

/// Companion plot-data path: `results.csv` → `results.plot.tsv`.
pub fn plot_path_for(csv_path: &Path) -> std::path::PathBuf {
    csv_path.with_extension("plot.tsv")
}

/// Writes the results CSV to `path` and the plot data next to it.
pub fn emit_results(summaries: &[GridCellSummary], path: &Path) -> Result<()> {
    std::fs::write(path, results_csv(summaries)?).map_err(|e| io_err(path, e))?;
    let plot = plot_path_for(path);
    std::fs::write(&plot, plot_data_tsv(summaries)).map_err(|e| io_err(&plot, e))
}

pub const TRIAL_COLUMNS: [&str; 13] = [
    "sigma",
    "k_fraction",
    "k",
    "rep",
    "seed",
    "l2_error_naive",
    "l2_error_robust",
    "l2_error_refit",
    "l2_error_exact",
    "l2_error_oracle",
    "support_precision",
    "support_recall",
    "permutation_hamming_error",
];

/// Raw per-replication errors. Timing is left out so the file is
/// reproducible.
pub fn write_trials(summaries: &[GridCellSummary], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| io_err(path, e))?;
    w.write_record(TRIAL_COLUMNS).map_err(|e| io_err(path, e))?;
    let opt = |v: Option<f64>| v.map_or(String::new(), |x| x.to_string());
    for c in summaries {
        for t in &c.trials {
            w.write_record([
                c.sigma.to_string(),
                c.k_fraction.to_string(),
                c.k.to_string(),
                t.rep.to_string(),
                t.seed.to_string(),
                t.l2_error_naive.to_string(),
                t.l2_error_robust.to_string(),
                opt(t.l2_error_refit),
                opt(t.l2_error_exact),
                t.l2_error_oracle.to_string(),
                t.support_precision.to_string(),
                t.support_recall.to_string(),
                t.permutation_hamming_error.to_string(),
            ])
            .map_err(|e| io_err(path, e))?;
        }
    }
    w.flush().map_err(|e| io_err(path, e))
}

/// Parses a results CSV written by [`emit_results`].
pub fn read_results(path: &Path) -> Result<Vec<ResultRow>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| io_err(path, e))?;
    let header: Vec<String> = r
        .headers()
        .map_err(|e| io_err(path, e))?
        .iter()
        .map(str::to_owned)
        .collect();
    if header != RESULT_COLUMNS {
        return Err(io_err(path, format!("unexpected header {header:?}")));
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| io_err(path, e))?;
        let bad = |what: &str| io_err(path, format!("row {}: bad {what}", i + 1));
        let num = |j: usize, what: &str| rec[j].parse::<f64>().map_err(|_| bad(what));
        rows.push(ResultRow {
            sigma: num(0, "sigma")?,
            k_fraction: num(1, "k_fraction")?,
            estimator: Estimator::from_name(&rec[2]).ok_or_else(|| bad("estimator"))?,
            mean_log2_l2_error: num(3, "mean_log2_l2_error")?,
            std_error: num(4, "std_error")?,
            reps: rec[5].parse().map_err(|_| bad("reps"))?,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_spec() -> SimulationSpec {
        SimulationSpec {
            n: 40,
            d: 3,
            k_fractions: vec![0.0, 0.1, 0.95],
            sigmas: vec![0.1],
            replications: 4,
            base_seed: 11,
            beta_rule: Default::default(),
        }
    }

    #[test]
    fn evaluate_examples() {
        let truth = GroundTruth {
            beta_star: vec![1.0],
            pi_star: SparsePermutation::identity(4),
            sigma: 0.0,
        };
        assert_eq!(
            evaluate_permutation(&SparsePermutation::identity(4), &truth).unwrap(),
            (true, 0)
        );
        let swap = SparsePermutation::transposition(4, 1, 3).unwrap();
        assert_eq!(evaluate_permutation(&swap, &truth).unwrap(), (false, 2));
        assert!(evaluate_permutation(&SparsePermutation::identity(5), &truth).is_err());
    }

    #[test]
    fn infeasible_cells_are_skipped() {
        let out = run_grid_with(&tiny_spec(), Execution::Serial).unwrap();
        assert_eq!(out.len(), 3);
        assert!(out[2].skipped.is_some());
        assert!(out[2].estimators.is_empty());
        assert_eq!(out[0].estimators.len(), 4);
        assert_eq!(out[1].trials.len(), 4);
        assert_eq!(result_rows(&out).len(), 8);
    }

    #[test]
    fn serial_and_parallel_agree() {
        let spec = tiny_spec();
        let a = run_grid_with(&spec, Execution::Serial).unwrap();
        let b = run_grid_with(&spec, Execution::Parallel).unwrap();
        assert_eq!(results_csv(&a).unwrap(), results_csv(&b).unwrap());
        assert_eq!(plot_data_tsv(&a), plot_data_tsv(&b));
    }

    #[test]
    fn log2_of_zero_is_finite() {
        assert_eq!(log2_error(0.0), f64::MIN_POSITIVE.log2());
        assert_eq!(log2_error(4.0), 2.0);
    }

    #[test]
    fn summary_statistics() {
        let mk = |e: f64| TrialMetrics {
            rep: 0,
            seed: 0,
            l2_error_naive: e,
            l2_error_robust: e,
            l2_error_refit: None,
            l2_error_exact: None,
            l2_error_oracle: e,
            support_precision: 1.0,
            support_recall: 1.0,
            permutation_exact: true,
            permutation_hamming_error: 0,
            wall_time_ms: 0.0,
        };
        let trials = [mk(1.0), mk(4.0)];
        let s = summarize(Estimator::Naive, &trials).unwrap();
        assert_eq!(s.mean_log2_l2_error, 1.0);
        // log₂ errors 0 and 2: sample sd √2, standard error 1.
        assert!((s.std_error - 1.0).abs() < 1e-15);
        assert_eq!(s.mean_l2_error, 2.5);
        assert!(summarize(Estimator::Refit, &trials).is_none());
    }

    #[test]
    fn d1_needs_one_predictor() {
        assert!(matches!(
            run_d1_comparison(&tiny_spec()),
            Err(Error::Spec(_))
        ));
    }

    #[test]
    fn noiseless_curve_recovers_everything() {
        let rows = snr_recovery_curve(20, 2, &[f64::INFINITY], 10, 3).unwrap();
        assert_eq!(rows[0].recovered, 10);
    }

    #[test]
    fn pure_noise_bound_vanishes_without_noise() {
        let r = pure_noise_demo(30, 0.0, 3, 1).unwrap();
        assert!(r.squared_norms.iter().all(|&v| v == 0.0));
    }
}
