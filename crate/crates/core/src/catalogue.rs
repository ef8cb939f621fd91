//! The MLOps tool knowledge base and the integration-matching step.
//!
//! Catalogue entries declare which development tools they integrate with
//! and which pipeline phases they cover. Matching intersects each entry's
//! integration list with the predicted preprocessing and model tools;
//! anything predicted but covered by no entry is reported as uncovered
//! rather than dropped.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::predict::{PredictError, Predictor};
use crate::record::{normalize_label, DataContext, LabelSet, OutputLabels};

/// Version written into (and required of) catalogue files.
pub const CATALOGUE_FORMAT_VERSION: u32 = 1;

/// Lifecycle phases an MLOps tool can cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MlopsPhase {
    DataVersioning,
    PipelineOrchestration,
    ExperimentTracking,
    ModelRegistry,
    Deployment,
    Monitoring,
}

impl MlopsPhase {
    pub const ALL: [MlopsPhase; 6] = [
        MlopsPhase::DataVersioning,
        MlopsPhase::PipelineOrchestration,
        MlopsPhase::ExperimentTracking,
        MlopsPhase::ModelRegistry,
        MlopsPhase::Deployment,
        MlopsPhase::Monitoring,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            MlopsPhase::DataVersioning => "data_versioning",
            MlopsPhase::PipelineOrchestration => "pipeline_orchestration",
            MlopsPhase::ExperimentTracking => "experiment_tracking",
            MlopsPhase::ModelRegistry => "model_registry",
            MlopsPhase::Deployment => "deployment",
            MlopsPhase::Monitoring => "monitoring",
        }
    }
}

impl fmt::Display for MlopsPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One MLOps tool: its phases and the development tools it connects with.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolEntry {
    pub name: String,
    pub phases: BTreeSet<MlopsPhase>,
    pub integrates_with: LabelSet,
}

impl ToolEntry {
    /// Normalizes the entry's own name and its integration targets the
    /// same way record labels are normalized.
    pub fn normalized(self) -> Self {
        ToolEntry {
            name: normalize_label(&self.name),
            phases: self.phases,
            integrates_with: self
                .integrates_with
                .iter()
                .map(|t| normalize_label(t))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolCatalogue {
    pub version: u32,
    pub tools: Vec<ToolEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatalogueError {
    UnsupportedVersion { found: u32, supported: u32 },
    DuplicateName { name: String },
    EmptyPhases { name: String },
}

impl fmt::Display for CatalogueError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogueError::UnsupportedVersion { found, supported } => write!(
                f,
                "catalogue version {found} not supported (expected {supported})"
            ),
            CatalogueError::DuplicateName { name } => {
                write!(f, "duplicate catalogue entry \"{name}\"")
            }
            CatalogueError::EmptyPhases { name } => {
                write!(f, "catalogue entry \"{name}\" lists no phases")
            }
        }
    }
}

impl core::error::Error for CatalogueError {}

impl ToolCatalogue {
    pub fn new(tools: Vec<ToolEntry>) -> Self {
        ToolCatalogue {
            version: CATALOGUE_FORMAT_VERSION,
            tools,
        }
    }

    /// Unique names, non-empty phase sets, supported version. An empty
    /// catalogue is valid (callers may warn).
    pub fn validate(&self) -> Result<(), CatalogueError> {
        if self.version != CATALOGUE_FORMAT_VERSION {
            return Err(CatalogueError::UnsupportedVersion {
                found: self.version,
                supported: CATALOGUE_FORMAT_VERSION,
            });
        }
        let mut seen = BTreeSet::new();
        for entry in &self.tools {
            if !seen.insert(entry.name.as_str()) {
                return Err(CatalogueError::DuplicateName {
                    name: entry.name.clone(),
                });
            }
            if entry.phases.is_empty() {
                return Err(CatalogueError::EmptyPhases {
                    name: entry.name.clone(),
                });
            }
        }
        Ok(())
    }

    pub fn normalized(self) -> Self {
        ToolCatalogue {
            version: self.version,
            tools: self.tools.into_iter().map(ToolEntry::normalized).collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.tools.is_empty()
    }
}

/// A catalogue entry selected for a prediction, with the predicted tools
/// that justified it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchedTool {
    pub tool: ToolEntry,
    pub matched_via: LabelSet,
}

/// Entries whose integration list intersects the predicted development
/// tools (preprocessing ∪ model construction), ranked by intersection size
/// descending, then name.
pub fn match_mlops_tools(predicted: &OutputLabels, catalogue: &ToolCatalogue) -> Vec<MatchedTool> {
    let development_tools = predicted.development_tools();
    let mut matched: Vec<MatchedTool> = catalogue
        .tools
        .iter()
        .filter_map(|entry| {
            let via: LabelSet = entry
                .integrates_with
                .intersection(&development_tools)
                .cloned()
                .collect();
            if via.is_empty() {
                None
            } else {
                Some(MatchedTool {
                    tool: entry.clone(),
                    matched_via: via,
                })
            }
        })
        .collect();
    matched.sort_by(|a, b| {
        b.matched_via
            .len()
            .cmp(&a.matched_via.len())
            .then_with(|| a.tool.name.cmp(&b.tool.name))
    });
    matched
}

/// The full answer returned to the user: echoed inputs, the four predicted
/// fields, the matched MLOps tools with phases, and any predicted tools
/// the catalogue knows nothing about.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Recommendation {
    pub inputs: DataContext,
    pub approach: String,
    pub predicted: OutputLabels,
    pub mlops_tools: Vec<MatchedTool>,
    pub uncovered: LabelSet,
}

/// End-to-end recommendation: predict the four outputs for `ctx`, then
/// match the catalogue. Prediction errors (unknown category, no matching
/// rule) propagate untouched.
pub fn recommend<P: Predictor + ?Sized>(
    ctx: &DataContext,
    predictor: &P,
    catalogue: &ToolCatalogue,
) -> Result<Recommendation, PredictError> {
    let predicted = predictor.predict_labels(ctx)?;
    let mlops_tools = match_mlops_tools(&predicted, catalogue);
    let covered: LabelSet = mlops_tools
        .iter()
        .flat_map(|m| m.matched_via.iter().cloned())
        .collect();
    let uncovered = predicted
        .development_tools()
        .difference(&covered)
        .cloned()
        .collect();
    Ok(Recommendation {
        inputs: *ctx,
        approach: predictor.approach_name().to_string(),
        predicted,
        mlops_tools,
        uncovered,
    })
}
