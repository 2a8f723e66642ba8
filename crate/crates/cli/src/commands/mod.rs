mod data;
mod modeling;
mod risk;

use std::path::PathBuf;

pub use data::{iaa, ingest, labels, synth};
pub use modeling::{eval, explain, predict, split, train};
pub use risk::risk;

use crate::config::{Input, RunConfig};
use crate::error::{CliError, CliResult};

/// Resolved input file. Explicit paths were checked when the configuration
/// loaded; a missing default means the synthetic world was never written.
fn input_path(cfg: &RunConfig, which: Input) -> CliResult<PathBuf> {
    let (path, explicit) = cfg.input(which);
    if !explicit && !path.exists() {
        return Err(CliError::missing_artifact(&path, "synth"));
    }
    Ok(path)
}
