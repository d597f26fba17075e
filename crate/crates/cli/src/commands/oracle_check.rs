use std::io::Write;

use sparseperm::oracle::{exhaustive_lsq, robust_reference};
use sparseperm::solvers::{
    fit_exact_bruteforce, fit_robust, kkt_residual, LambdaRule, RobustOptions, DEFAULT_BUDGET,
    MAX_BRUTEFORCE_N,
};
use sparseperm::synthesize;

use super::out_err;
use crate::config::CliConfig;
use crate::error::{CliError, Result};

const EXACT_TOL: f64 = 1e-9;
const ROBUST_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceCheck {
    pub seed: u64,
    pub exact_gap: f64,
    pub robust_gap: f64,
    pub kkt: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleCheck {
    pub n: usize,
    pub d: usize,
    pub k: usize,
    pub sigma: f64,
    pub seed: u64,
    pub instances: usize,
    /// Defaults to the simulation rule at `sigma`.
    pub rule: Option<LambdaRule>,
    pub options: RobustOptions,
}

/// Brute force against full enumeration and the robust solver against
/// accelerated gradient descent, for instance seeds `seed, seed + 1, …`.
pub fn check_instances(c: &OracleCheck) -> Result<Vec<InstanceCheck>> {
    let OracleCheck {
        n,
        d,
        k,
        sigma,
        seed,
        instances,
        rule,
        options,
    } = *c;
    let (tol, max_iter) = (options.tol, options.max_iter);
    if n > MAX_BRUTEFORCE_N {
        return Err(CliError::Config(format!(
            "oracle checks enumerate every permutation and need n <= {MAX_BRUTEFORCE_N}, got {n}"
        )));
    }
    (0..instances as u64)
        .map(|i| {
            let s = seed.wrapping_add(i);
            let obs = synthesize(n, d, k, sigma, s)?;
            let fast = fit_exact_bruteforce(&obs.x, &obs.y, k, DEFAULT_BUDGET)?;
            let slow = exhaustive_lsq(&obs.x, &obs.y, k)?;
            let exact_gap = (fast.objective - slow.objective).abs() / slow.objective.max(1.0);

            let rule = rule.unwrap_or(LambdaRule::SimulationRule {
                sigma: sigma.max(1e-3),
            });
            let lambda = sparseperm::solvers::lambda_value(rule, n)?;
            let fit = fit_robust(&obs.x, &obs.y, lambda, tol, max_iter)?;
            let kkt = kkt_residual(&fit, &obs.x, &obs.y)?;
            let reference = robust_reference(&obs.x, &obs.y, lambda, 1e-13, 500_000)?;
            let robust_gap =
                (fit.objective() - reference.objective).abs() / reference.objective.max(1e-300);
            Ok(InstanceCheck {
                seed: s,
                exact_gap,
                robust_gap,
                kkt,
                passed: exact_gap <= EXACT_TOL && robust_gap <= ROBUST_TOL && kkt <= ROBUST_TOL,
            })
        })
        .collect()
}

pub fn run(cfg: &CliConfig, out: &mut dyn Write) -> Result<()> {
    let o = &cfg.oracle_check;
    let (n, d, k) = (o.n.unwrap_or(6), o.d.unwrap_or(1), o.k.unwrap_or(2));
    let sigma = o.noise.unwrap_or(0.1);
    let seed = cfg.seed.unwrap_or(0);
    let instances = o.instances.unwrap_or(5);
    let rule = match cfg.solver.lambda_rule {
        Some(_) => Some(cfg.solver.lambda(n, &[])?.0),
        None => None,
    };
    let checks = check_instances(&OracleCheck {
        n,
        d,
        k,
        sigma,
        seed,
        instances,
        rule,
        options: cfg.solver.options()?,
    })?;
    writeln!(
        out,
        "{:>20} {:>12} {:>12} {:>12}  status",
        "seed", "exact gap", "robust gap", "kkt"
    )
    .map_err(out_err)?;
    for c in &checks {
        writeln!(
            out,
            "{:>20} {:>12.2e} {:>12.2e} {:>12.2e}  {}",
            c.seed,
            c.exact_gap,
            c.robust_gap,
            c.kkt,
            if c.passed { "ok" } else { "FAIL" }
        )
        .map_err(out_err)?;
    }
    let failed: Vec<String> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.seed.to_string())
        .collect();
    if failed.is_empty() {
        writeln!(
            out,
            "all {} instances match (n = {n}, d = {d}, k = {k})",
            checks.len()
        )
        .map_err(out_err)
    } else {
        Err(CliError::Numerical(format!(
            "oracle mismatch for instance seed(s) {}; rerun with --seed <s> --instances 1",
            failed.join(", ")
        )))
    }
}
