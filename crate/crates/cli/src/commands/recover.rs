use std::io::Write;
use std::path::Path;

use sparseperm::recovery::recover_permutation_sorted;

use super::fit::fit_dataset;
use super::{load_data, out_err};
use crate::config::{require, CliConfig};
use crate::error::{CliError, Result};

/// With known coefficients every row takes part in the sorting; otherwise
/// the two-stage estimate restricts it to the estimated support.
pub fn run(
    cfg: &CliConfig,
    theta: Option<&[f64]>,
    output: Option<&Path>,
    out: &mut dyn Write,
) -> Result<()> {
    let data = load_data(cfg)?;
    let response = require(cfg.data.response.as_deref(), "data.response")?;
    let (x, y, names) = data.regression(
        response,
        cfg.data.predictors.as_deref(),
        cfg.data.intercept.unwrap_or(false),
    )?;
    let pi = match theta {
        Some(t) => {
            if t.len() != x.d() {
                return Err(CliError::Config(format!(
                    "--theta has {} entries for {} predictors ({})",
                    t.len(),
                    x.d(),
                    names.join(", ")
                )));
            }
            recover_permutation_sorted(&x, &y, t)?
        }
        None => fit_dataset(&x, &y, names, &cfg.solver, cfg.fit.k, true)?
            .matching
            .expect("matching requested"),
    };
    log::info!(
        "{} of {} rows matched away from their own predictors",
        pi.hamming(),
        pi.n()
    );

    let mut text = String::from("response_row,predictor_row\n");
    for (i, j) in pi.map().iter().enumerate() {
        text.push_str(&format!("{i},{j}\n"));
    }
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => out.write_all(text.as_bytes()).map_err(out_err),
    }
}
