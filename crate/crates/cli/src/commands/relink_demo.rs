use std::io::Write;

use super::{load_data, out_err};
use crate::config::{require, CliConfig, OutputFormat};
use crate::error::{CliError, Result};
use crate::relink::{relink_demo, RelinkOptions, RelinkReport};

pub fn run(cfg: &CliConfig, out: &mut dyn Write) -> Result<()> {
    let block = require(cfg.data.block.as_deref(), "data.block")?;
    let data = load_data(cfg)?;
    let response = require(cfg.data.response.as_deref(), "data.response")?;
    let (x, y, names) = data.regression(
        response,
        cfg.data.predictors.as_deref(),
        cfg.data.intercept.unwrap_or(false),
    )?;
    let labels = data
        .block_labels()
        .ok_or_else(|| CliError::Config(format!("no block column {block:?}")))?;
    let defaults = RelinkOptions::default();
    let opts = RelinkOptions {
        seed: cfg.seed.unwrap_or(defaults.seed),
        splits: cfg.relink.splits.unwrap_or(defaults.splits),
        holdout_fraction: cfg
            .relink
            .holdout_fraction
            .unwrap_or(defaults.holdout_fraction),
        solver: cfg.solver.clone(),
    };
    let report = relink_demo(&x, &y, labels, &opts)?;
    match cfg.fit.format.unwrap_or_default() {
        OutputFormat::Text => write_text(&report, &names, out),
        OutputFormat::Csv => write_csv(&report, &names, out),
    }
}

fn write_text(r: &RelinkReport, names: &[String], out: &mut dyn Write) -> Result<()> {
    writeln!(
        out,
        "{} rows in {} blocks; {} rows share a block, {} responses moved",
        r.n, r.blocks, r.ambiguous_rows, r.moved_rows
    )
    .map_err(out_err)?;
    let width = names.iter().map(String::len).max().unwrap_or(0).max(9);
    writeln!(
        out,
        "{:<width$} {:>14} {:>14} {:>14}",
        "predictor", "clean", "naive", "robust"
    )
    .map_err(out_err)?;
    for (j, name) in names.iter().enumerate() {
        writeln!(
            out,
            "{name:<width$} {:>14.6} {:>14.6} {:>14.6}",
            r.clean_beta[j], r.naive_beta[j], r.robust_beta[j]
        )
        .map_err(out_err)?;
    }
    writeln!(
        out,
        "{:<width$} {:>14.6} {:>14.6} {:>14.6}",
        "rmse", r.rmse_clean, r.rmse_naive, r.rmse_robust
    )
    .map_err(out_err)?;
    writeln!(
        out,
        "{:<width$} {:>14} {:>14.6} {:>14.6}",
        "l2 dist", "", r.dist_naive, r.dist_robust
    )
    .map_err(out_err)?;
    if let Some(h) = &r.holdout {
        writeln!(
            out,
            "{:<width$} {:>14} {:>14} {:>14}",
            "hold-out",
            format!("{:.4}({:.4})", h.clean.mean, h.clean.se),
            format!("{:.4}({:.4})", h.naive.mean, h.naive.se),
            format!("{:.4}({:.4})", h.robust.mean, h.robust.se),
        )
        .map_err(out_err)?;
        writeln!(
            out,
            "hold-out RMSE over {} splits of {} rows",
            h.splits, h.holdout_rows
        )
        .map_err(out_err)?;
    }
    writeln!(out, "lambda {}", r.lambda).map_err(out_err)?;
    for w in &r.warnings {
        writeln!(out, "warning: {w}").map_err(out_err)?;
    }
    Ok(())
}

/// Long format: `quantity,key,value`.
fn write_csv(r: &RelinkReport, names: &[String], out: &mut dyn Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut rows: Vec<[String; 3]> = vec![["quantity".into(), "key".into(), "value".into()]];
    for (label, beta) in [
        ("clean", &r.clean_beta),
        ("naive", &r.naive_beta),
        ("robust", &r.robust_beta),
    ] {
        for (name, v) in names.iter().zip(beta.iter()) {
            rows.push([label.into(), name.clone(), v.to_string()]);
        }
    }
    for (label, v) in [
        ("clean", r.rmse_clean),
        ("naive", r.rmse_naive),
        ("robust", r.rmse_robust),
    ] {
        rows.push(["rmse".into(), label.into(), v.to_string()]);
    }
    rows.push(["l2_dist".into(), "naive".into(), r.dist_naive.to_string()]);
    rows.push(["l2_dist".into(), "robust".into(), r.dist_robust.to_string()]);
    if let Some(h) = &r.holdout {
        for (label, m) in [("clean", h.clean), ("naive", h.naive), ("robust", h.robust)] {
            rows.push(["holdout_rmse".into(), label.into(), m.mean.to_string()]);
            rows.push(["holdout_se".into(), label.into(), m.se.to_string()]);
        }
    }
    rows.push(["lambda".into(), String::new(), r.lambda.to_string()]);
    rows.push(["moved_rows".into(), String::new(), r.moved_rows.to_string()]);
    for row in rows {
        w.write_record(&row)
            .map_err(|e| CliError::io("<stdout>", e))?;
    }
    w.flush().map_err(out_err)
}
