use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{overlay, CliConfig, OutputFormat, RuleKind};

#[derive(Debug, Parser)]
#[command(
    name = "sparseperm",
    version,
    about = "Regression with sparsely mismatched responses"
)]
pub struct Cli {
    /// TOML config file; command-line flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte-Carlo grid over noise levels and mismatch fractions.
    Simulate(SimulateArgs),
    /// Least squares, robust fit, support estimate and refit on a CSV file.
    Fit(FitArgs),
    /// Estimate which predictor row each response belongs to.
    Recover(RecoverArgs),
    /// Evaluate the error bounds and recovery thresholds.
    Bounds(BoundsArgs),
    /// Compare the solvers with slow reference implementations.
    OracleCheck(OracleCheckArgs),
    /// Shuffle responses within blocks and compare least squares with the robust fit.
    RelinkDemo(RelinkArgs),
}

fn flag(b: bool) -> Option<bool> {
    b.then_some(true)
}

#[derive(Debug, Args, Default)]
pub struct SolverArgs {
    #[arg(long, value_enum)]
    pub lambda_rule: Option<RuleKind>,
    /// Penalty for the fixed rule.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Noise level for the bound and simulation rules.
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Residual scale for the Huber rule; estimated when absent.
    #[arg(long)]
    pub sigma_hat: Option<f64>,
    /// Bound on the coefficient norm for the bound rule.
    #[arg(long)]
    pub m: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
}

impl SolverArgs {
    fn apply(&self, cfg: &mut CliConfig) {
        let s = &mut cfg.solver;
        overlay(&mut s.lambda_rule, self.lambda_rule);
        overlay(&mut s.lambda, self.lambda);
        overlay(&mut s.sigma, self.sigma);
        overlay(&mut s.sigma_hat, self.sigma_hat);
        overlay(&mut s.m, self.m);
        overlay(&mut s.tol, self.tol);
        overlay(&mut s.max_iter, self.max_iter);
    }
}

#[derive(Debug, Args, Default)]
pub struct DataArgs {
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Name of the response column.
    #[arg(long)]
    pub response: Option<String>,
    /// Comma-separated predictor columns; default is every other numeric column.
    #[arg(long, value_delimiter = ',')]
    pub predictors: Option<Vec<String>>,
    /// Add a column of ones to the design.
    #[arg(long)]
    pub intercept: bool,
}

impl DataArgs {
    fn apply(&self, cfg: &mut CliConfig) {
        let d = &mut cfg.data;
        overlay(&mut d.input, self.input.clone());
        overlay(&mut d.response, self.response.clone());
        overlay(&mut d.predictors, self.predictors.clone());
        overlay(&mut d.intercept, flag(self.intercept));
    }
}

#[derive(Debug, Args, Default)]
pub struct SimulateArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub k_fractions: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub sigmas: Option<Vec<f64>>,
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Single-predictor comparison with the exact estimator.
    #[arg(long)]
    pub d1: bool,
    /// Run replications on one thread.
    #[arg(long)]
    pub serial: bool,
    /// Summary CSV; the plot data goes next to it.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Per-replication CSV.
    #[arg(long)]
    pub trials: Option<PathBuf>,
}

impl SimulateArgs {
    pub fn apply(&self, cfg: &mut CliConfig) {
        let s = &mut cfg.simulation;
        overlay(&mut s.n, self.n);
        overlay(&mut s.d, self.d);
        overlay(&mut s.k_fractions, self.k_fractions.clone());
        overlay(&mut s.sigmas, self.sigmas.clone());
        overlay(&mut s.replications, self.reps);
        overlay(&mut s.d1, flag(self.d1));
        overlay(&mut s.serial, flag(self.serial));
        overlay(&mut s.output, self.output.clone());
        overlay(&mut s.trials, self.trials.clone());
        overlay(&mut cfg.seed, self.seed);
    }
}

#[derive(Debug, Args, Default)]
pub struct FitArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Number of mismatched rows; a data-driven threshold is used when absent.
    #[arg(long)]
    pub k: Option<usize>,
    /// Also match responses to rows inside the estimated support.
    #[arg(long = "match")]
    pub matching: bool,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
}

impl FitArgs {
    pub fn apply(&self, cfg: &mut CliConfig) {
        self.data.apply(cfg);
        self.solver.apply(cfg);
        overlay(&mut cfg.fit.k, self.k);
        overlay(&mut cfg.fit.matching, flag(self.matching));
        overlay(&mut cfg.fit.format, self.format);
    }
}

#[derive(Debug, Args, Default)]
pub struct RecoverArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Known coefficients, comma-separated; sorting is then applied to every row.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub theta: Option<Vec<f64>>,
    /// Number of mismatched rows for the two-stage estimate.
    #[arg(long)]
    pub k: Option<usize>,
    /// Write the matching here instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

impl RecoverArgs {
    pub fn apply(&self, cfg: &mut CliConfig) {
        self.data.apply(cfg);
        self.solver.apply(cfg);
        overlay(&mut cfg.fit.k, self.k);
    }
}

#[derive(Debug, Args, Default)]
pub struct BoundsArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Margin of the unrelaxed bound, in (0, 1/2).
    #[arg(long)]
    pub eps: Option<f64>,
    /// Bound on the coefficient norm.
    #[arg(long)]
    pub m: Option<f64>,
    /// Failure probability of the recovery threshold.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Slack added to the recovery threshold.
    #[arg(long)]
    pub big_delta: Option<f64>,
    /// Sparsity constant of the relaxed bound.
    #[arg(long)]
    pub c1: Option<f64>,
    /// Margin of the relaxed bound.
    #[arg(long)]
    pub relaxed_eps: Option<f64>,
}

impl BoundsArgs {
    pub fn apply(&self, cfg: &mut CliConfig) {
        let b = &mut cfg.bounds;
        overlay(&mut b.n, self.n);
        overlay(&mut b.d, self.d);
        overlay(&mut b.k, self.k);
        overlay(&mut b.sigma, self.sigma);
        overlay(&mut b.eps, self.eps);
        overlay(&mut b.m, self.m);
        overlay(&mut b.delta, self.delta);
        overlay(&mut b.big_delta, self.big_delta);
        overlay(&mut b.c1, self.c1);
        overlay(&mut b.relaxed_eps, self.relaxed_eps);
    }
}

#[derive(Debug, Args, Default)]
pub struct OracleCheckArgs {
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Noise level of the synthetic instances.
    #[arg(long)]
    pub noise: Option<f64>,
    /// First instance seed; instance i uses seed + i.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub instances: Option<usize>,
}

impl OracleCheckArgs {
    pub fn apply(&self, cfg: &mut CliConfig) {
        self.solver.apply(cfg);
        let o = &mut cfg.oracle_check;
        overlay(&mut o.n, self.n);
        overlay(&mut o.d, self.d);
        overlay(&mut o.k, self.k);
        overlay(&mut o.noise, self.noise);
        overlay(&mut o.instances, self.instances);
        overlay(&mut cfg.seed, self.seed);
    }
}

#[derive(Debug, Args, Default)]
pub struct RelinkArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Column holding the non-unique merge key.
    #[arg(long)]
    pub block: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of hold-out splits; 0 skips them.
    #[arg(long)]
    pub splits: Option<usize>,
    #[arg(long)]
    pub holdout_fraction: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
}

impl RelinkArgs {
    pub fn apply(&self, cfg: &mut CliConfig) {
        self.data.apply(cfg);
        self.solver.apply(cfg);
        overlay(&mut cfg.data.block, self.block.clone());
        overlay(&mut cfg.seed, self.seed);
        overlay(&mut cfg.relink.splits, self.splits);
        overlay(&mut cfg.relink.holdout_fraction, self.holdout_fraction);
        overlay(&mut cfg.fit.format, self.format);
    }
}
