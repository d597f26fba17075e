//! Split-and-relink experiment: responses are shuffled within blocks of rows
//! that share a quasi-identifier, imitating a merge on a non-unique key, and
//! least squares is compared with the robust fit.

use rand::seq::SliceRandom;
use sparseperm::model::{replication_seed, stream_rng};
use sparseperm::solvers::{fit_ols, fit_robust};
use sparseperm::DesignMatrix;

use crate::config::SolverSection;
use crate::error::{CliError, Result};

const HOLDOUT_STREAM: u64 = 0;
const RELINK_STREAM: u64 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct RelinkOptions {
    pub seed: u64,
    pub splits: usize,
    pub holdout_fraction: f64,
    pub solver: SolverSection,
}

impl Default for RelinkOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            splits: 20,
            holdout_fraction: 0.1,
            solver: SolverSection::default(),
        }
    }
}

/// Mean and standard error over hold-out splits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanSe {
    pub mean: f64,
    pub se: f64,
}

impl MeanSe {
    fn of(v: &[f64]) -> Self {
        let m = v.len() as f64;
        let mean = v.iter().sum::<f64>() / m;
        let se = if v.len() > 1 {
            (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0) / m).sqrt()
        } else {
            0.0
        };
        Self { mean, se }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HoldoutSummary {
    pub splits: usize,
    pub holdout_rows: usize,
    pub clean: MeanSe,
    pub naive: MeanSe,
    pub robust: MeanSe,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelinkReport {
    pub n: usize,
    pub d: usize,
    pub blocks: usize,
    /// Rows sharing their block with at least one other row.
    pub ambiguous_rows: usize,
    /// Rows whose response changed position.
    pub moved_rows: usize,
    pub relinked_y: Vec<f64>,
    pub lambda: f64,
    pub clean_beta: Vec<f64>,
    pub naive_beta: Vec<f64>,
    pub robust_beta: Vec<f64>,
    pub robust_converged: bool,
    pub rmse_clean: f64,
    pub rmse_naive: f64,
    pub rmse_robust: f64,
    pub dist_naive: f64,
    pub dist_robust: f64,
    pub holdout: Option<HoldoutSummary>,
    pub warnings: Vec<String>,
}

/// Row indices grouped by label, groups ordered by first appearance.
pub fn block_groups(labels: &[String]) -> Vec<Vec<usize>> {
    let mut index: std::collections::HashMap<&str, usize> = Default::default();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, l) in labels.iter().enumerate() {
        let g = *index.entry(l.as_str()).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(i);
    }
    groups
}

/// Shuffles `y` uniformly within each group.
pub fn relink<R: rand::Rng>(y: &[f64], groups: &[Vec<usize>], rng: &mut R) -> Vec<f64> {
    let mut out = y.to_vec();
    for g in groups.iter().filter(|g| g.len() > 1) {
        let mut vals: Vec<f64> = g.iter().map(|&i| y[i]).collect();
        vals.shuffle(rng);
        for (&i, v) in g.iter().zip(vals) {
            out[i] = v;
        }
    }
    out
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(u, v)| (u - v).powi(2))
        .sum::<f64>()
        .sqrt()
}

fn rmse(x: &DesignMatrix, y: &[f64], beta: &[f64]) -> Result<f64> {
    let fitted = x.times(beta)?;
    let ss: f64 = y.iter().zip(&fitted).map(|(a, b)| (a - b).powi(2)).sum();
    Ok((ss / y.len() as f64).sqrt())
}

struct Fits {
    clean: Vec<f64>,
    naive: Vec<f64>,
    robust: Vec<f64>,
    lambda: f64,
    converged: bool,
}

fn fit_all(
    x: &DesignMatrix,
    clean_y: &[f64],
    linked_y: &[f64],
    solver: &SolverSection,
) -> Result<Fits> {
    let clean = fit_ols(x, clean_y)?.beta;
    let naive = fit_ols(x, linked_y)?;
    let (_, lambda) = solver.lambda(x.n(), &naive.residuals)?;
    let opts = solver.options()?;
    let robust = fit_robust(x, linked_y, lambda, opts.tol, opts.max_iter)?;
    Ok(Fits {
        clean,
        naive: naive.beta,
        robust: robust.beta,
        lambda,
        converged: robust.converged,
    })
}

pub fn relink_demo(
    x: &DesignMatrix,
    y: &[f64],
    labels: &[String],
    opts: &RelinkOptions,
) -> Result<RelinkReport> {
    let n = x.n();
    if y.len() != n || labels.len() != n {
        return Err(CliError::Config(format!(
            "{n} design rows, {} responses, {} block labels",
            y.len(),
            labels.len()
        )));
    }
    if !(opts.holdout_fraction > 0.0 && opts.holdout_fraction < 1.0) {
        return Err(CliError::Config(format!(
            "holdout_fraction = {} must lie in (0, 1)",
            opts.holdout_fraction
        )));
    }
    let groups = block_groups(labels);
    let ambiguous_rows: usize = groups.iter().filter(|g| g.len() > 1).map(Vec::len).sum();
    let mut warnings = Vec::new();
    if ambiguous_rows == 0 {
        let w = "every block is a single row, so relinking cannot create mismatches".to_string();
        log::warn!("{w}");
        warnings.push(w);
    }

    let relinked_y = relink(y, &groups, &mut stream_rng(opts.seed, RELINK_STREAM));
    let moved_rows = y.iter().zip(&relinked_y).filter(|(a, b)| a != b).count();
    let fits = fit_all(x, y, &relinked_y, &opts.solver)?;
    if !fits.converged {
        let w = "robust fit stopped at the iteration limit".to_string();
        log::warn!("{w}");
        warnings.push(w);
    }

    let holdout = if opts.splits == 0 {
        None
    } else {
        Some(holdout_errors(x, y, &groups, opts)?)
    };

    Ok(RelinkReport {
        n,
        d: x.d(),
        blocks: groups.len(),
        ambiguous_rows,
        moved_rows,
        lambda: fits.lambda,
        rmse_clean: rmse(x, y, &fits.clean)?,
        rmse_naive: rmse(x, &relinked_y, &fits.naive)?,
        rmse_robust: rmse(x, &relinked_y, &fits.robust)?,
        dist_naive: distance(&fits.naive, &fits.clean),
        dist_robust: distance(&fits.robust, &fits.clean),
        relinked_y,
        robust_converged: fits.converged,
        clean_beta: fits.clean,
        naive_beta: fits.naive,
        robust_beta: fits.robust,
        holdout,
        warnings,
    })
}

/// Each split holds out a random subset of rows, relinks the rest within
/// their blocks, fits on it and scores on the untouched held-out rows.
fn holdout_errors(
    x: &DesignMatrix,
    y: &[f64],
    groups: &[Vec<usize>],
    opts: &RelinkOptions,
) -> Result<HoldoutSummary> {
    let n = x.n();
    let m = ((opts.holdout_fraction * n as f64).round() as usize).max(1);
    if n - m <= x.d() {
        return Err(CliError::Numerical(format!(
            "holding out {m} of {n} rows leaves too few to fit {} coefficients",
            x.d()
        )));
    }
    let mut errs = (Vec::new(), Vec::new(), Vec::new());
    for split in 0..opts.splits {
        let s = replication_seed(opts.seed, split as u64 + 1);
        let mut rows: Vec<usize> = (0..n).collect();
        rows.shuffle(&mut stream_rng(s, HOLDOUT_STREAM));
        let mut held = vec![false; n];
        for &i in &rows[..m] {
            held[i] = true;
        }
        let test: Vec<usize> = (0..n).filter(|&i| held[i]).collect();
        let train: Vec<usize> = (0..n).filter(|&i| !held[i]).collect();
        let mut position = vec![usize::MAX; n];
        for (p, &i) in train.iter().enumerate() {
            position[i] = p;
        }
        let train_groups: Vec<Vec<usize>> = groups
            .iter()
            .map(|g| {
                g.iter()
                    .filter(|&&i| !held[i])
                    .map(|&i| position[i])
                    .collect()
            })
            .collect();

        let xt = x.select_rows(&train)?;
        let yt: Vec<f64> = train.iter().map(|&i| y[i]).collect();
        let linked = relink(&yt, &train_groups, &mut stream_rng(s, RELINK_STREAM));
        let fits = fit_all(&xt, &yt, &linked, &opts.solver)?;

        let xh = x.select_rows(&test)?;
        let yh: Vec<f64> = test.iter().map(|&i| y[i]).collect();
        errs.0.push(rmse(&xh, &yh, &fits.clean)?);
        errs.1.push(rmse(&xh, &yh, &fits.naive)?);
        errs.2.push(rmse(&xh, &yh, &fits.robust)?);
    }
    Ok(HoldoutSummary {
        splits: opts.splits,
        holdout_rows: m,
        clean: MeanSe::of(&errs.0),
        naive: MeanSe::of(&errs.1),
        robust: MeanSe::of(&errs.2),
    })
}
