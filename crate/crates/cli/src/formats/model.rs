//! Trained-model files: a versioned JSON envelope recording the training
//! seed, split ratio, record counts, and a self-check report alongside the
//! serialized model. The `approach` tag selects the payload shape, so each
//! approach round-trips through the same loader.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use opsrec_core::{
    DecisionTreeModel, EvaluationReport, KnnModel, Predictor, RandomForestModel, SplitRatio,
};

use crate::error::CliError;

pub const MODEL_FORMAT_VERSION: u32 = 1;

/// The model payload, tagged by approach name.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "approach", content = "model", rename_all = "snake_case")]
pub enum ModelArtifact {
    DecisionTrees(DecisionTreeModel),
    RandomForest(RandomForestModel),
    Knn(KnnModel),
}

impl ModelArtifact {
    pub fn approach(&self) -> &'static str {
        match self {
            ModelArtifact::DecisionTrees(m) => m.approach_name(),
            ModelArtifact::RandomForest(m) => m.approach_name(),
            ModelArtifact::Knn(m) => m.approach_name(),
        }
    }

    pub fn predictor(&self) -> &dyn Predictor {
        match self {
            ModelArtifact::DecisionTrees(m) => m,
            ModelArtifact::RandomForest(m) => m,
            ModelArtifact::Knn(m) => m,
        }
    }
}

/// Counts describing the split the model was trained on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainedOn {
    pub n_records: usize,
    pub n_train: usize,
    pub n_test: usize,
}

/// One trained model plus the context needed to reproduce it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelFile {
    pub format_version: u32,
    pub seed: u64,
    pub ratio: SplitRatio,
    pub trained_on: TrainedOn,
    /// Metrics on the training split, recorded at save time as a sanity
    /// reference. Held-out metrics come from `evaluate`.
    pub self_check: EvaluationReport,
    #[serde(flatten)]
    pub artifact: ModelArtifact,
}

pub fn save_model(path: &Path, file: &ModelFile) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(file)
        .map_err(|e| CliError::runtime(format!("serializing model: {e}")))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::io(path, &e))
}

pub fn load_model(path: &Path) -> Result<ModelFile, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, &e))?;
    let file: ModelFile = serde_json::from_str(&text)
        .map_err(|e| CliError::validation(format!("model file {}: {e}", path.display())))?;
    if file.format_version != MODEL_FORMAT_VERSION {
        return Err(CliError::validation(format!(
            "model file {}: format version {} not supported (expected {})",
            path.display(),
            file.format_version,
            MODEL_FORMAT_VERSION
        )));
    }
    Ok(file)
}
