//! Experiment manifests in TOML. Every section is optional and every key
//! can be overridden from the command line.
//!
//! ```toml
//! seed = 7
//!
//! [simulation]
//! n = 200
//! sigmas = [0.01, 0.1]
//!
//! [solver]
//! lambda_rule = "huber"
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;
use sparseperm::solvers::{lambda_value, robust_scale, LambdaRule, RobustOptions};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CliConfig {
    pub seed: Option<u64>,
    pub simulation: SimulationSection,
    pub solver: SolverSection,
    pub data: DataSection,
    pub fit: FitSection,
    pub relink: RelinkSection,
    pub bounds: BoundsSection,
    pub oracle_check: OracleCheckSection,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulationSection {
    pub n: Option<usize>,
    pub d: Option<usize>,
    pub k_fractions: Option<Vec<f64>>,
    pub sigmas: Option<Vec<f64>>,
    pub replications: Option<usize>,
    pub d1: Option<bool>,
    pub serial: Option<bool>,
    pub output: Option<PathBuf>,
    pub trials: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum RuleKind {
    /// 4(1+M)σ√(2 log n / n)
    Bound,
    /// 0.2σ√(log n / n)
    Simulation,
    /// 2·1.345·σ̂/√n with σ̂ from OLS residuals unless given
    Huber,
    /// The value of --lambda
    Fixed,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSection {
    pub lambda_rule: Option<RuleKind>,
    pub lambda: Option<f64>,
    pub sigma: Option<f64>,
    pub sigma_hat: Option<f64>,
    pub m: Option<f64>,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DataSection {
    pub input: Option<PathBuf>,
    pub response: Option<String>,
    pub predictors: Option<Vec<String>>,
    pub block: Option<String>,
    pub intercept: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Text,
    Csv,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FitSection {
    pub k: Option<usize>,
    #[serde(rename = "match")]
    pub matching: Option<bool>,
    pub format: Option<OutputFormat>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RelinkSection {
    pub splits: Option<usize>,
    pub holdout_fraction: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundsSection {
    pub n: Option<usize>,
    pub d: Option<usize>,
    pub k: Option<usize>,
    pub sigma: Option<f64>,
    pub eps: Option<f64>,
    pub m: Option<f64>,
    pub delta: Option<f64>,
    pub big_delta: Option<f64>,
    pub c1: Option<f64>,
    pub relaxed_eps: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleCheckSection {
    pub n: Option<usize>,
    pub d: Option<usize>,
    pub k: Option<usize>,
    pub noise: Option<f64>,
    pub instances: Option<usize>,
}

impl CliConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_toml(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// The file at `path`, or all defaults when there is none.
    pub fn load_optional(path: Option<&Path>) -> Result<Self> {
        path.map_or_else(|| Ok(Self::default()), Self::load)
    }
}

/// Replaces `slot` with `flag` when the flag was given.
pub fn overlay<T>(slot: &mut Option<T>, flag: Option<T>) {
    if flag.is_some() {
        *slot = flag;
    }
}

pub fn require<T>(value: Option<T>, what: &str) -> Result<T> {
    value.ok_or_else(|| CliError::Config(format!("missing required setting `{what}`")))
}

impl SolverSection {
    pub fn options(&self) -> Result<RobustOptions> {
        let mut opts = RobustOptions::default();
        if let Some(t) = self.tol {
            if !(t.is_finite() && t >= 0.0) {
                return Err(CliError::Config(format!("tol = {t} must be nonnegative")));
            }
            opts.tol = t;
        }
        if let Some(m) = self.max_iter {
            if m == 0 {
                return Err(CliError::Config("max_iter must be positive".into()));
            }
            opts.max_iter = m;
        }
        Ok(opts)
    }

    /// λ for a data set of `n` rows. The Huber rule estimates σ̂ from
    /// `ols_residuals` when no `sigma_hat` is configured.
    pub fn lambda(&self, n: usize, ols_residuals: &[f64]) -> Result<(LambdaRule, f64)> {
        let rule = match self.lambda_rule.unwrap_or(RuleKind::Huber) {
            RuleKind::Bound => LambdaRule::BoundRule {
                m: self.m.unwrap_or(1.0),
                sigma: require(self.sigma, "solver.sigma")?,
            },
            RuleKind::Simulation => LambdaRule::SimulationRule {
                sigma: require(self.sigma, "solver.sigma")?,
            },
            RuleKind::Huber => {
                let sigma_hat = match self.sigma_hat {
                    Some(s) => s,
                    None => robust_scale(ols_residuals)?,
                };
                if sigma_hat <= 0.0 {
                    return Err(CliError::Numerical(
                        "robust residual scale is zero; set solver.sigma_hat or a fixed lambda"
                            .into(),
                    ));
                }
                LambdaRule::HuberRule { sigma_hat }
            }
            RuleKind::Fixed => LambdaRule::Fixed(require(self.lambda, "solver.lambda")?),
        };
        Ok((rule, lambda_value(rule, n)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_sections_parse() {
        let c = CliConfig::from_toml(
            "seed = 3\n[simulation]\nn = 50\nsigmas = [0.1, 1]\n[solver]\nlambda_rule = \"fixed\"\nlambda = 0.5\n[fit]\nmatch = true\n",
        )
        .unwrap();
        assert_eq!(c.seed, Some(3));
        assert_eq!(c.simulation.n, Some(50));
        assert_eq!(c.simulation.sigmas, Some(vec![0.1, 1.0]));
        assert_eq!(c.solver.lambda(10, &[]).unwrap().1, 0.5);
        assert_eq!(c.fit.matching, Some(true));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        for text in ["sead = 1", "[simulation]\nreps = 2", "[nope]\n"] {
            assert!(
                matches!(CliConfig::from_toml(text), Err(CliError::Config(_))),
                "{text}"
            );
        }
    }

    #[test]
    fn flags_win() {
        let mut slot = Some(1);
        overlay(&mut slot, None);
        assert_eq!(slot, Some(1));
        overlay(&mut slot, Some(2));
        assert_eq!(slot, Some(2));
    }

    #[test]
    fn huber_scale_comes_from_residuals() {
        let s = SolverSection::default();
        let r = [-2.0, -1.0, 0.0, 1.0, 2.0];
        let (rule, lam) = s.lambda(100, &r).unwrap();
        assert_eq!(rule, LambdaRule::HuberRule { sigma_hat: 1.4826 });
        assert!((lam - 2.0 * 1.345 * 1.4826 / 10.0).abs() < 1e-15);
        assert!(matches!(
            s.lambda(100, &[1.0; 5]),
            Err(CliError::Numerical(_))
        ));
    }
}
