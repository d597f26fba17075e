pub mod bounds;
pub mod fit;
pub mod oracle_check;
pub mod recover;
pub mod relink_demo;
pub mod simulate;

use std::io::Write;

use crate::args::Command;
use crate::config::{require, CliConfig};
use crate::dataset::{load_csv, TabularDataset};
use crate::error::{CliError, Result};

pub(crate) fn out_err(e: std::io::Error) -> CliError {
    CliError::io("<stdout>", e)
}

pub(crate) fn load_data(cfg: &CliConfig) -> Result<TabularDataset> {
    let path = require(cfg.data.input.as_ref(), "data.input")?;
    load_csv(path, cfg.data.block.as_deref())
}

/// Overlays the command's flags on `cfg` and runs it.
pub fn dispatch(command: &Command, mut cfg: CliConfig, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Simulate(a) => {
            a.apply(&mut cfg);
            simulate::run(&cfg, out)
        }
        Command::Fit(a) => {
            a.apply(&mut cfg);
            fit::run(&cfg, out)
        }
        Command::Recover(a) => {
            a.apply(&mut cfg);
            recover::run(&cfg, a.theta.as_deref(), a.output.as_deref(), out)
        }
        Command::Bounds(a) => {
            a.apply(&mut cfg);
            bounds::run(&cfg, out)
        }
        Command::OracleCheck(a) => {
            a.apply(&mut cfg);
            oracle_check::run(&cfg, out)
        }
        Command::RelinkDemo(a) => {
            a.apply(&mut cfg);
            relink_demo::run(&cfg, out)
        }
    }
}
