//! Project records and the input/output feature view.
//!
//! A [`ProjectRecord`] describes one machine-learning project. Two of its
//! fields (data nature, data type) act as classifier inputs and four of them
//! (preprocessing tools, model tools, project type, evaluation metrics) act
//! as prediction targets; [`project_features`] extracts that six-field view.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

/// A normalized set of label strings (tool names, metric names).
pub type LabelSet = BTreeSet<String>;

/// A categorical value outside its closed enum domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownValue {
    pub field: &'static str,
    pub value: String,
    pub allowed: &'static str,
}

impl fmt::Display for UnknownValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unknown {} \"{}\", allowed: {}",
            self.field, self.value, self.allowed
        )
    }
}

impl core::error::Error for UnknownValue {}

macro_rules! closed_enum {
    (
        $(#[$meta:meta])*
        $name:ident, $field:literal, $allowed:literal,
        { $($variant:ident => $text:literal),+ $(,)? }
    ) => {
        $(#[$meta])*
        #[derive(
            Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
        )]
        #[serde(rename_all = "snake_case")]
        pub enum $name {
            $($variant,)+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(&self) -> &'static str {
                match self {
                    $($name::$variant => $text,)+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = UnknownValue;

            fn from_str(raw: &str) -> Result<Self, Self::Err> {
                match canonical_token(raw).as_str() {
                    $($text => Ok($name::$variant),)+
                    _ => Err(UnknownValue {
                        field: $field,
                        value: raw.trim().to_string(),
                        allowed: $allowed,
                    }),
                }
            }
        }
    };
}

closed_enum!(
    /// Organization of a project's data.
    ///
    /// Variants are declared in lexicographic order of their canonical names
    /// so the derived `Ord` matches vocabulary ordering.
    DataNature, "data_nature", "structured|unstructured|semi_structured",
    {
        SemiStructured => "semi_structured",
        Structured => "structured",
        Unstructured => "unstructured",
    }
);

closed_enum!(
    /// Medium of a project's data. Declared in lexicographic order.
    DataType, "data_type", "numerical|textual|image|video",
    {
        Image => "image",
        Numerical => "numerical",
        Textual => "textual",
        Video => "video",
    }
);

closed_enum!(
    /// Whether a collected project is AI-based at all.
    ProjectCategory, "project_category", "ai|non_ai",
    {
        Ai => "ai",
        NonAi => "non_ai",
    }
);

/// Trims and case-folds a free-text value.
pub fn normalize_text(raw: &str) -> String {
    raw.trim().to_lowercase()
}

/// Normalizes a single label (tool or metric name).
pub fn normalize_label(raw: &str) -> String {
    normalize_text(raw)
}

/// Splits a multi-valued cell on commas/semicolons into a normalized set.
/// Empty fragments are dropped.
pub fn split_labels(cell: &str) -> LabelSet {
    cell.split([',', ';'])
        .map(normalize_label)
        .filter(|label| !label.is_empty())
        .collect()
}

fn canonical_token(raw: &str) -> String {
    normalize_text(raw).replace(['-', ' '], "_")
}

/// One collected machine-learning project. Field order mirrors the dataset
/// schema.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectRecord {
    pub name: String,
    pub description: String,
    pub project_category: ProjectCategory,
    pub data_nature: DataNature,
    pub data_type: DataType,
    pub preprocessing_tools: LabelSet,
    pub project_type: String,
    pub technique: String,
    pub evaluation_metrics: LabelSet,
    pub model_tools: LabelSet,
}

/// A record that violates the schema invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RecordError {
    Unknown(UnknownValue),
    /// A field that must be non-empty for AI records is empty.
    EmptyField {
        field: &'static str,
    },
}

impl fmt::Display for RecordError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecordError::Unknown(inner) => inner.fmt(f),
            RecordError::EmptyField { field } => {
                write!(f, "field {field} must be non-empty for an ai project")
            }
        }
    }
}

impl core::error::Error for RecordError {}

impl From<UnknownValue> for RecordError {
    fn from(err: UnknownValue) -> Self {
        RecordError::Unknown(err)
    }
}

impl ProjectRecord {
    /// Builds a record from raw text fields, applying normalization
    /// (trim, case-fold, comma/semicolon splitting) and validation.
    #[allow(clippy::too_many_arguments)]
    pub fn from_raw_parts(
        name: &str,
        description: &str,
        project_category: &str,
        data_nature: &str,
        data_type: &str,
        preprocessing_tools: &str,
        project_type: &str,
        technique: &str,
        evaluation_metrics: &str,
        model_tools: &str,
    ) -> Result<Self, RecordError> {
        let record = ProjectRecord {
            name: normalize_text(name),
            description: normalize_text(description),
            project_category: project_category.parse()?,
            data_nature: data_nature.parse()?,
            data_type: data_type.parse()?,
            preprocessing_tools: split_labels(preprocessing_tools),
            project_type: normalize_text(project_type),
            technique: normalize_text(technique),
            evaluation_metrics: split_labels(evaluation_metrics),
            model_tools: split_labels(model_tools),
        };
        record.validate()?;
        Ok(record)
    }

    /// Checks the schema invariants. Tool and metric sets (and the project
    /// type) must be non-empty for AI records; non-AI records may leave them
    /// blank since they never reach the predictors.
    pub fn validate(&self) -> Result<(), RecordError> {
        if self.project_category == ProjectCategory::Ai {
            if self.preprocessing_tools.is_empty() {
                return Err(RecordError::EmptyField {
                    field: "preprocessing_tools",
                });
            }
            if self.model_tools.is_empty() {
                return Err(RecordError::EmptyField {
                    field: "model_tools",
                });
            }
            if self.evaluation_metrics.is_empty() {
                return Err(RecordError::EmptyField {
                    field: "evaluation_metrics",
                });
            }
            if self.project_type.is_empty() {
                return Err(RecordError::EmptyField {
                    field: "project_type",
                });
            }
        }
        Ok(())
    }
}

/// The classifier input pair: what the user knows about their data up front.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DataContext {
    pub nature: DataNature,
    pub data_type: DataType,
}

impl DataContext {
    pub fn new(nature: DataNature, data_type: DataType) -> Self {
        DataContext { nature, data_type }
    }

    /// All 12 (nature, type) combinations, in lexicographic order.
    pub fn all_pairs() -> impl Iterator<Item = DataContext> {
        DataNature::ALL.iter().flat_map(|&nature| {
            DataType::ALL
                .iter()
                .map(move |&data_type| DataContext { nature, data_type })
        })
    }
}

impl fmt::Display for DataContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.nature, self.data_type)
    }
}

/// One of the four prediction targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputField {
    PreprocessingTools,
    ModelTools,
    ProjectType,
    EvaluationMetrics,
}

impl OutputField {
    pub const ALL: [OutputField; 4] = [
        OutputField::PreprocessingTools,
        OutputField::ModelTools,
        OutputField::ProjectType,
        OutputField::EvaluationMetrics,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            OutputField::PreprocessingTools => "preprocessing_tools",
            OutputField::ModelTools => "model_tools",
            OutputField::ProjectType => "project_type",
            OutputField::EvaluationMetrics => "evaluation_metrics",
        }
    }
}

impl fmt::Display for OutputField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The four prediction targets of one record (or one prediction).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputLabels {
    pub preprocessing_tools: LabelSet,
    pub model_tools: LabelSet,
    pub project_type: String,
    pub evaluation_metrics: LabelSet,
}

impl OutputLabels {
    /// The labels of one field as a set. The single-valued project type
    /// becomes a singleton (or the empty set when blank), which lets the
    /// scorer pool all four fields uniformly.
    pub fn field_labels(&self, field: OutputField) -> LabelSet {
        match field {
            OutputField::PreprocessingTools => self.preprocessing_tools.clone(),
            OutputField::ModelTools => self.model_tools.clone(),
            OutputField::ProjectType => {
                if self.project_type.is_empty() {
                    LabelSet::new()
                } else {
                    core::iter::once(self.project_type.clone()).collect()
                }
            }
            OutputField::EvaluationMetrics => self.evaluation_metrics.clone(),
        }
    }

    /// Re-normalizes every label, for outputs read from hand-edited files.
    pub fn normalized(self) -> Self {
        let renorm = |set: LabelSet| set.iter().map(|label| normalize_label(label)).collect();
        OutputLabels {
            preprocessing_tools: renorm(self.preprocessing_tools),
            model_tools: renorm(self.model_tools),
            project_type: normalize_text(&self.project_type),
            evaluation_metrics: renorm(self.evaluation_metrics),
        }
    }

    /// Union of predicted preprocessing and model-construction tools, the
    /// set the catalogue matcher works with.
    pub fn development_tools(&self) -> LabelSet {
        self.preprocessing_tools
            .union(&self.model_tools)
            .cloned()
            .collect()
    }
}

/// The two-input / four-output projection of a record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureView {
    pub inputs: DataContext,
    pub outputs: OutputLabels,
}

/// Projects the six pipeline-relevant fields out of a record.
pub fn project_features(record: &ProjectRecord) -> FeatureView {
    FeatureView {
        inputs: DataContext {
            nature: record.data_nature,
            data_type: record.data_type,
        },
        outputs: OutputLabels {
            preprocessing_tools: record.preprocessing_tools.clone(),
            model_tools: record.model_tools.clone(),
            project_type: record.project_type.clone(),
            evaluation_metrics: record.evaluation_metrics.clone(),
        },
    }
}

/// Keeps only AI-based projects, preserving order.
pub fn filter_ai(records: Vec<ProjectRecord>) -> Vec<ProjectRecord> {
    records
        .into_iter()
        .filter(|r| r.project_category == ProjectCategory::Ai)
        .collect()
}
