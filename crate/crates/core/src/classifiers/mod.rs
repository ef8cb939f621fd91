//! The three learned approaches: decision tree, random forest, and
//! k-nearest neighbours, all trained on one-hot encoded inputs and all
//! predicting the four output fields as label sets.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::encoding::{EncodingError, FeatureVector, Vocabulary};
use crate::predict::PredictError;
use crate::record::{FeatureView, OutputLabels};

mod forest;
mod knn;
mod tree;

pub use forest::{fit_forest, ForestParams, RandomForestModel};
pub use knn::{fit_knn, KnnModel};
pub use tree::{
    fit_tree, DecisionTreeModel, FieldTable, InputFeature, NodeStats, TreeNode, TreeParams,
    ValueCount,
};

/// Encoded training inputs aligned with their gold output labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrainingMatrix {
    pub vocab: Vocabulary,
    pub vectors: Vec<FeatureVector>,
    pub labels: Vec<OutputLabels>,
}

impl TrainingMatrix {
    /// Encodes feature views against `vocab`. Fails on categories outside
    /// the vocabulary.
    pub fn from_views(views: &[FeatureView], vocab: Vocabulary) -> Result<Self, ModelError> {
        let mut vectors = Vec::with_capacity(views.len());
        let mut labels = Vec::with_capacity(views.len());
        for view in views {
            vectors.push(vocab.encode(&view.inputs)?);
            labels.push(view.outputs.clone());
        }
        Ok(TrainingMatrix {
            vocab,
            vectors,
            labels,
        })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    fn check_consistent(&self) -> Result<(), ModelError> {
        if self.vectors.is_empty() {
            return Err(ModelError::EmptyTrainingData);
        }
        if self.vectors.len() != self.labels.len() {
            return Err(ModelError::LengthMismatch {
                vectors: self.vectors.len(),
                labels: self.labels.len(),
            });
        }
        let width = self.vocab.width();
        for v in &self.vectors {
            if v.width() != width {
                return Err(ModelError::Encoding(EncodingError::MalformedVector {
                    expected_width: width,
                    found: v.width(),
                }));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelError {
    EmptyTrainingData,
    LengthMismatch { vectors: usize, labels: usize },
    InvalidParameter { name: &'static str, message: String },
    Encoding(EncodingError),
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::EmptyTrainingData => write!(f, "cannot fit a model on zero records"),
            ModelError::LengthMismatch { vectors, labels } => write!(
                f,
                "training matrix has {vectors} vectors but {labels} label rows"
            ),
            ModelError::InvalidParameter { name, message } => {
                write!(f, "invalid {name}: {message}")
            }
            ModelError::Encoding(inner) => inner.fmt(f),
        }
    }
}

impl core::error::Error for ModelError {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        match self {
            ModelError::Encoding(inner) => Some(inner),
            _ => None,
        }
    }
}

impl From<EncodingError> for ModelError {
    fn from(err: EncodingError) -> Self {
        ModelError::Encoding(err)
    }
}

/// Converts encoding failures seen at prediction time into the prediction
/// error vocabulary.
pub(crate) fn encoding_to_predict(err: EncodingError) -> PredictError {
    match err {
        EncodingError::UnknownCategory { feature, value } => {
            PredictError::UnknownCategory { feature, value }
        }
        EncodingError::MalformedVector {
            expected_width,
            found,
        } => PredictError::WidthMismatch {
            expected: expected_width,
            found,
        },
        EncodingError::EmptyInput => PredictError::WidthMismatch {
            expected: 0,
            found: 0,
        },
    }
}
