use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use sparseperm::harness::{
    emit_results, plot_path_for, run_d1_comparison_with, run_grid_with, write_trials, Estimator,
    Execution,
};
use sparseperm::model::BetaRule;
use sparseperm::SimulationSpec;

use super::out_err;
use crate::config::CliConfig;
use crate::error::{CliError, Result};

/// Grid spec from the config; the single-predictor comparison defaults to
/// `n = 12`, `d = 1` so that the exact estimator is enumerated.
pub fn spec_from(cfg: &CliConfig) -> Result<SimulationSpec> {
    let s = &cfg.simulation;
    let d1 = s.d1.unwrap_or(false);
    let default = SimulationSpec::standard_grid();
    let spec = SimulationSpec {
        n: s.n.unwrap_or(if d1 { 12 } else { default.n }),
        d: s.d.unwrap_or(if d1 { 1 } else { default.d }),
        k_fractions: s.k_fractions.clone().unwrap_or(default.k_fractions),
        sigmas: s.sigmas.clone().unwrap_or(default.sigmas),
        replications: s.replications.unwrap_or(default.replications),
        base_seed: cfg.seed.unwrap_or(default.base_seed),
        beta_rule: BetaRule::UnitSphereUniform,
    };
    spec.validate()?;
    if d1 && spec.d != 1 {
        return Err(CliError::Config(format!(
            "--d1 needs d = 1, got d = {}",
            spec.d
        )));
    }
    Ok(spec)
}

pub fn run(cfg: &CliConfig, out: &mut dyn Write) -> Result<()> {
    let spec = spec_from(cfg)?;
    let d1 = cfg.simulation.d1.unwrap_or(false);
    let exec = if cfg.simulation.serial.unwrap_or(false) {
        Execution::Serial
    } else {
        Execution::Parallel
    };
    let output = cfg
        .simulation
        .output
        .clone()
        .unwrap_or_else(|| PathBuf::from("results.csv"));

    let start = Instant::now();
    let summaries = if d1 {
        run_d1_comparison_with(&spec, exec)?
    } else {
        run_grid_with(&spec, exec)?
    };
    emit_results(&summaries, &output)?;
    if let Some(t) = &cfg.simulation.trials {
        write_trials(&summaries, t)?;
    }

    let estimators: Vec<Estimator> = summaries
        .iter()
        .find(|c| c.skipped.is_none())
        .map(|c| c.estimators.iter().map(|e| e.estimator).collect())
        .unwrap_or_default();
    write!(out, "{:>8} {:>6} {:>4}", "sigma", "k/n", "k").map_err(out_err)?;
    for e in &estimators {
        write!(out, " {:>9}", e.name()).map_err(out_err)?;
    }
    writeln!(out).map_err(out_err)?;
    for c in &summaries {
        write!(out, "{:>8} {:>6} {:>4}", c.sigma, c.k_fraction, c.k).map_err(out_err)?;
        if let Some(why) = &c.skipped {
            write!(out, " skipped: {why}").map_err(out_err)?;
        }
        for e in &c.estimators {
            write!(out, " {:>9.3}", e.mean_log2_l2_error).map_err(out_err)?;
        }
        writeln!(out).map_err(out_err)?;
    }
    writeln!(
        out,
        "mean log2 l2 error over {} replications per cell, {:.1}s",
        spec.replications,
        start.elapsed().as_secs_f64()
    )
    .map_err(out_err)?;
    writeln!(
        out,
        "wrote {} and {}",
        output.display(),
        plot_path_for(&output).display()
    )
    .map_err(out_err)
}
