//! Context-driven recommendation of machine-learning toolchains.
//!
//! Given the two things a team usually knows before writing any code, the
//! nature of their data (structured, unstructured, semi-structured) and its
//! type (numerical, textual, image, video), this crate predicts four
//! things: preprocessing tools, model-construction tools, the project type,
//! and evaluation metrics. Four interchangeable approaches implement the
//! [`Predictor`] trait:
//!
//! * [`rules::RuleSet`]: a hand-editable or data-extracted knowledge base
//! * [`classifiers::DecisionTreeModel`]: a multiway categorical tree
//! * [`classifiers::RandomForestModel`]: a seeded bagged forest
//! * [`classifiers::KnnModel`]: nearest neighbours over one-hot Hamming
//!   distance
//!
//! Predicted tools are then matched against an MLOps tool catalogue
//! ([`catalogue`]) to assemble a toolchain recommendation annotated with
//! pipeline phases.
//!
//! Everything here is deterministic: all randomness (splits, bootstrap
//! resamples, synthetic data) flows from explicit `u64` seeds through
//! ChaCha8 streams, and every tie-break is documented at its site. The
//! crate is `no_std` (with `alloc`); file IO, CLI, and the serialization
//! plumbing live in the companion binary crate.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod catalogue;
pub mod classifiers;
pub mod encoding;
pub mod evaluation;
pub mod predict;
mod readout;
pub mod record;
pub mod rules;
pub mod synth;

pub use catalogue::{
    match_mlops_tools, recommend, CatalogueError, MatchedTool, MlopsPhase, Recommendation,
    ToolCatalogue, ToolEntry, CATALOGUE_FORMAT_VERSION,
};
pub use classifiers::{
    fit_forest, fit_knn, fit_tree, DecisionTreeModel, ForestParams, KnnModel, ModelError,
    RandomForestModel, TrainingMatrix, TreeParams,
};
pub use encoding::{
    split_train_test, EncodingError, FeatureVector, RatioError, SplitRatio, SplitResult, Vocabulary,
};
pub use evaluation::{
    compare_approaches, f_measure, precision, recall, score_predictions, Comparison,
    ConfusionCounts, EvalError, EvaluationReport, FieldBreakdown, Metric,
};
pub use predict::{PredictError, Predictor};
pub use record::{
    filter_ai, project_features, split_labels, DataContext, DataNature, DataType, FeatureView,
    LabelSet, OutputField, OutputLabels, ProjectCategory, ProjectRecord, RecordError, UnknownValue,
};
pub use rules::{
    extract_rules, Condition, ExtractStrategy, Rule, RuleError, RuleSet, RULE_FORMAT_VERSION,
};
pub use synth::{
    synth_dataset, LabelProb, LabelWeight, PairProfile, SynthError, SynthSpec, SYNTH_FORMAT_VERSION,
};
