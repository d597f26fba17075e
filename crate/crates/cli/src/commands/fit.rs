use std::io::Write;

use sparseperm::recovery::{
    estimate_support_threshold, estimate_support_topk, recover_permutation_on_support,
    refit_excluding, SupportEstimate,
};
use sparseperm::solvers::{fit_ols, fit_robust, kkt_residual, LambdaRule, RobustFit};
use sparseperm::{DesignMatrix, SparsePermutation};

use super::{load_data, out_err};
use crate::config::{require, CliConfig, OutputFormat, SolverSection};
use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub names: Vec<String>,
    pub naive: Vec<f64>,
    pub rule: LambdaRule,
    pub robust: RobustFit,
    pub kkt: f64,
    pub support: SupportEstimate,
    pub refit: Vec<f64>,
    pub matching: Option<SparsePermutation>,
}

/// Naive fit, robust fit, support (top-`k` or thresholded), refit and,
/// optionally, matching on the support.
pub fn fit_dataset(
    x: &DesignMatrix,
    y: &[f64],
    names: Vec<String>,
    solver: &SolverSection,
    k: Option<usize>,
    matching: bool,
) -> Result<FitReport> {
    if let Some(k) = k {
        if k + x.d() >= x.n() {
            return Err(CliError::Numerical(format!(
                "need n - k > d, got n = {}, k = {k}, d = {}",
                x.n(),
                x.d()
            )));
        }
    }
    let naive = fit_ols(x, y)?;
    let (rule, lambda) = solver.lambda(x.n(), &naive.residuals)?;
    let opts = solver.options()?;
    let robust = fit_robust(x, y, lambda, opts.tol, opts.max_iter)?;
    if !robust.converged {
        log::warn!("robust fit stopped after {} iterations", robust.iterations);
    }
    let kkt = kkt_residual(&robust, x, y)?;
    let support = match k {
        Some(k) => estimate_support_topk(&robust.e, k)?,
        None => estimate_support_threshold(&robust.e)?,
    };
    let zero = support
        .indices
        .iter()
        .filter(|&&i| robust.e[i] == 0.0)
        .count();
    if zero > 0 {
        log::warn!("{zero} of the {} support rows have a zero robust residual; lambda may be too large for this k", support.len());
    }
    let refit = refit_excluding(x, y, &support)?.beta;
    let matching = if matching {
        Some(recover_permutation_on_support(x, y, &support, &refit)?)
    } else {
        None
    };
    Ok(FitReport {
        names,
        naive: naive.beta,
        rule,
        robust,
        kkt,
        support,
        refit,
        matching,
    })
}

pub fn run(cfg: &CliConfig, out: &mut dyn Write) -> Result<()> {
    let data = load_data(cfg)?;
    let response = require(cfg.data.response.as_deref(), "data.response")?;
    let (x, y, names) = data.regression(
        response,
        cfg.data.predictors.as_deref(),
        cfg.data.intercept.unwrap_or(false),
    )?;
    let report = fit_dataset(
        &x,
        &y,
        names,
        &cfg.solver,
        cfg.fit.k,
        cfg.fit.matching.unwrap_or(false),
    )?;
    match cfg.fit.format.unwrap_or_default() {
        OutputFormat::Text => write_text(&report, out),
        OutputFormat::Csv => write_csv(&report, out),
    }
}

fn write_text(r: &FitReport, out: &mut dyn Write) -> Result<()> {
    let width = r.names.iter().map(String::len).max().unwrap_or(0).max(9);
    writeln!(
        out,
        "{:<width$} {:>14} {:>14} {:>14}",
        "predictor", "naive", "robust", "refit"
    )
    .map_err(out_err)?;
    for (j, name) in r.names.iter().enumerate() {
        writeln!(
            out,
            "{name:<width$} {:>14.8} {:>14.8} {:>14.8}",
            r.naive[j], r.robust.beta[j], r.refit[j]
        )
        .map_err(out_err)?;
    }
    writeln!(
        out,
        "lambda {} ({:?}), {} iterations, converged {}, kkt residual {:.2e}",
        r.robust.lambda, r.rule, r.robust.iterations, r.robust.converged, r.kkt
    )
    .map_err(out_err)?;
    let rows: Vec<String> = r.support.indices.iter().map(usize::to_string).collect();
    writeln!(out, "support ({} rows): {}", rows.len(), rows.join(" ")).map_err(out_err)?;
    if let Some(pi) = &r.matching {
        writeln!(out, "matching (response row <- predictor row):").map_err(out_err)?;
        for i in pi.support() {
            writeln!(out, "  {i} <- {}", pi.map()[i]).map_err(out_err)?;
        }
    }
    Ok(())
}

/// Long format: `quantity,key,value`.
fn write_csv(r: &FitReport, out: &mut dyn Write) -> Result<()> {
    let mut rows: Vec<[String; 3]> = vec![["quantity".into(), "key".into(), "value".into()]];
    for (label, beta) in [
        ("naive", &r.naive),
        ("robust", &r.robust.beta),
        ("refit", &r.refit),
    ] {
        for (name, v) in r.names.iter().zip(beta.iter()) {
            rows.push([label.into(), name.clone(), v.to_string()]);
        }
    }
    rows.push(["lambda".into(), String::new(), r.robust.lambda.to_string()]);
    rows.push([
        "iterations".into(),
        String::new(),
        r.robust.iterations.to_string(),
    ]);
    rows.push([
        "converged".into(),
        String::new(),
        r.robust.converged.to_string(),
    ]);
    rows.push(["kkt_residual".into(), String::new(), r.kkt.to_string()]);
    for (pos, i) in r.support.indices.iter().enumerate() {
        rows.push(["support".into(), pos.to_string(), i.to_string()]);
    }
    if let Some(pi) = &r.matching {
        for i in pi.support() {
            rows.push(["match".into(), i.to_string(), pi.map()[i].to_string()]);
        }
    }
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.write_record(&row)
            .map_err(|e| CliError::io("<stdout>", e))?;
    }
    w.flush().map_err(out_err)
}
