//! File formats the command-line tool reads and writes: datasets, rule
//! files, tool catalogues, trained models, and generator specs.

pub mod catalogue;
pub mod dataset;
pub mod model;
pub mod rules;

use std::fs;
use std::path::Path;

use opsrec_core::SynthSpec;

use crate::error::CliError;

pub use catalogue::load_catalogue;
pub use dataset::{read_records, write_records, RawRecord};
pub use model::{
    load_model, save_model, ModelArtifact, ModelFile, TrainedOn, MODEL_FORMAT_VERSION,
};
pub use rules::{load_rules, save_rules};

/// Loads and validates a dataset generator spec.
pub fn load_synth_spec(path: &Path) -> Result<SynthSpec, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, &e))?;
    let spec: SynthSpec = serde_json::from_str(&text)
        .map_err(|e| CliError::validation(format!("generator spec {}: {e}", path.display())))?;
    spec.validate()
        .map_err(|e| CliError::validation(format!("generator spec {}: {e}", path.display())))?;
    Ok(spec)
}
