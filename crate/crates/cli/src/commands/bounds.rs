use std::io::Write;

use sparseperm::theory::{
    bound_report, exact_error_bound, robust_error_bound, BoundInputs, TheoryConstants,
};

use super::out_err;
use crate::config::{require, CliConfig};
use crate::error::Result;

pub fn inputs_from(cfg: &CliConfig) -> Result<(BoundInputs, TheoryConstants)> {
    let b = &cfg.bounds;
    let defaults = TheoryConstants::default();
    let inp = BoundInputs {
        n: require(b.n, "bounds.n")?,
        d: require(b.d, "bounds.d")?,
        k: require(b.k, "bounds.k")?,
        sigma: b.sigma.unwrap_or(1.0),
        eps: b.eps.unwrap_or(0.1),
        m: b.m.unwrap_or(1.0),
        delta: b.delta.unwrap_or(0.05),
        big_delta: b.big_delta.unwrap_or(0.0),
    };
    inp.validate()?;
    let consts = TheoryConstants {
        c1: b.c1.unwrap_or(defaults.c1),
        eps: b.relaxed_eps.unwrap_or(defaults.eps),
    };
    Ok((inp, consts))
}

pub fn run(cfg: &CliConfig, out: &mut dyn Write) -> Result<()> {
    let (inp, consts) = inputs_from(cfg)?;
    let r = bound_report(&inp, &consts)?;
    let line = |out: &mut dyn Write, name: &str, v: String| {
        writeln!(out, "{name:<34} {v}").map_err(out_err)
    };
    let or_reason = |v: Option<f64>, err: Option<String>| match v {
        Some(v) => format!("{v:e}"),
        None => format!("not available: {}", err.unwrap_or_default()),
    };
    writeln!(
        out,
        "n = {}, d = {}, k = {}, sigma = {}, eps = {}, M = {}, delta = {}, Delta = {}",
        inp.n, inp.d, inp.k, inp.sigma, inp.eps, inp.m, inp.delta, inp.big_delta
    )
    .map_err(out_err)?;
    line(out, "gaussian width bound", format!("{:e}", r.width_bound))?;
    line(out, "nu(n)", format!("{:e}", r.nu_n))?;
    line(out, "nu(n - d)", format!("{:e}", r.nu_n_minus_d))?;
    line(
        out,
        "unrelaxed sample condition",
        r.exact_condition_ok.to_string(),
    )?;
    line(
        out,
        "unrelaxed error bound",
        or_reason(
            r.exact_error_bound,
            exact_error_bound(&inp).err().map(|e| e.to_string()),
        ),
    )?;
    line(
        out,
        "relaxed error bound",
        or_reason(
            r.robust_error_bound,
            robust_error_bound(&inp, &consts)
                .err()
                .map(|e| e.to_string()),
        ),
    )?;
    line(
        out,
        "refit SNR threshold",
        format!("{:e}", r.refit_snr_threshold),
    )?;
    line(
        out,
        "exact recovery SNR threshold",
        format!("{:e}", r.recovery_snr_threshold),
    )?;
    line(
        out,
        "recovery failure SNR scale",
        format!("{:e}", r.recovery_failure_snr_scale),
    )?;
    line(
        out,
        "pure-noise squared norm bound",
        format!("{:e}", r.pure_noise_norm_bound),
    )
}
