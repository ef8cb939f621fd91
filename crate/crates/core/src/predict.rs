//! The common prediction interface implemented by every approach.

use alloc::string::String;
use core::fmt;

use crate::record::{DataContext, OutputLabels};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PredictError {
    /// No rule condition matched the input (rule-based approach only).
    NoMatch { context: DataContext },
    /// The input used a category the model was not trained on.
    UnknownCategory {
        feature: &'static str,
        value: String,
    },
    /// An encoded vector did not match the model's vocabulary width.
    WidthMismatch { expected: usize, found: usize },
}

impl fmt::Display for PredictError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PredictError::NoMatch { context } => write!(
                f,
                "no rule matches nature={} type={}",
                context.nature, context.data_type
            ),
            PredictError::UnknownCategory { feature, value } => {
                write!(f, "model was not trained on {feature} \"{value}\"")
            }
            PredictError::WidthMismatch { expected, found } => {
                write!(f, "encoded width {found}, model expects {expected}")
            }
        }
    }
}

impl core::error::Error for PredictError {}

/// Maps an input pair to the four recommended output fields.
///
/// All four approaches (rules, decision tree, random forest, nearest
/// neighbours) implement this, so evaluation and recommendation code is
/// generic over the approach.
pub trait Predictor {
    /// Stable identifier used in reports: `rule_based`, `decision_trees`,
    /// `random_forest`, or `knn`.
    fn approach_name(&self) -> &'static str;

    fn predict_labels(&self, ctx: &DataContext) -> Result<OutputLabels, PredictError>;
}

impl<T: Predictor + ?Sized> Predictor for &T {
    fn approach_name(&self) -> &'static str {
        (**self).approach_name()
    }

    fn predict_labels(&self, ctx: &DataContext) -> Result<OutputLabels, PredictError> {
        (**self).predict_labels(ctx)
    }
}
