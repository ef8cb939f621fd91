//! k-nearest neighbours over Hamming distance on the one-hot encodings.
//!
//! The model is the training store itself. Neighbours are ordered by
//! (distance, training index), so boundary ties always resolve to the
//! earliest stored record and predictions are reproducible.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{encoding_to_predict, ModelError, TrainingMatrix};
use crate::encoding::{FeatureVector, Vocabulary};
use crate::predict::{PredictError, Predictor};
use crate::readout;
use crate::record::{DataContext, LabelSet, OutputField, OutputLabels};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnModel {
    pub vocab: Vocabulary,
    /// The k the caller asked for.
    pub requested_k: usize,
    /// The k actually used, clamped to the store size.
    pub k: usize,
    /// Set when `requested_k` exceeded the store and had to be clamped.
    pub k_clamped: bool,
    pub vectors: Vec<FeatureVector>,
    pub labels: Vec<OutputLabels>,
}

/// Stores the training data for neighbour lookup. `k` larger than the
/// store is clamped (flagged on the model) rather than rejected.
pub fn fit_knn(data: &TrainingMatrix, k: usize) -> Result<KnnModel, ModelError> {
    data.check_consistent()?;
    if k == 0 {
        return Err(ModelError::InvalidParameter {
            name: "k",
            message: alloc::string::String::from("must be at least 1"),
        });
    }
    let clamped = k.min(data.len());
    Ok(KnnModel {
        vocab: data.vocab.clone(),
        requested_k: k,
        k: clamped,
        k_clamped: clamped != k,
        vectors: data.vectors.clone(),
        labels: data.labels.clone(),
    })
}

impl KnnModel {
    /// Indices of the k nearest stored vectors, by (distance, index).
    fn neighbours(&self, v: &FeatureVector) -> Vec<usize> {
        let mut ranked: Vec<(usize, usize)> = self
            .vectors
            .iter()
            .enumerate()
            .map(|(idx, stored)| (stored.hamming(v), idx))
            .collect();
        ranked.sort_unstable();
        ranked
            .into_iter()
            .take(self.k)
            .map(|(_, idx)| idx)
            .collect()
    }

    pub fn predict_vector(&self, v: &FeatureVector) -> Result<OutputLabels, PredictError> {
        if v.width() != self.vocab.width() {
            return Err(PredictError::WidthMismatch {
                expected: self.vocab.width(),
                found: v.width(),
            });
        }
        let neighbours = self.neighbours(v);
        let field_sets = |field: OutputField| -> Vec<LabelSet> {
            neighbours
                .iter()
                .map(|&i| self.labels[i].field_labels(field))
                .collect()
        };
        let vote = |field: OutputField| readout::majority_labels(field_sets(field).iter());
        Ok(OutputLabels {
            preprocessing_tools: vote(OutputField::PreprocessingTools),
            model_tools: vote(OutputField::ModelTools),
            project_type: readout::modal_value(
                neighbours
                    .iter()
                    .map(|&i| self.labels[i].project_type.as_str()),
            )
            .unwrap_or_default(),
            evaluation_metrics: vote(OutputField::EvaluationMetrics),
        })
    }
}

impl Predictor for KnnModel {
    fn approach_name(&self) -> &'static str {
        "knn"
    }

    fn predict_labels(&self, ctx: &DataContext) -> Result<OutputLabels, PredictError> {
        let v = self.vocab.encode(ctx).map_err(encoding_to_predict)?;
        self.predict_vector(&v)
    }
}
