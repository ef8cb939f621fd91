//! Bagged forest of decision trees with per-label majority voting.
//!
//! Each tree trains on a bootstrap resample (n draws with replacement) and
//! a random feature subset of size ceil(sqrt(F)). Randomness is ChaCha8
//! keyed per tree as `seed + tree_index`, with the bootstrap indices drawn
//! before any feature choice, so a forest is reproducible bit for bit from
//! `(data, params, seed)` on any machine. With the two input features this
//! domain has, ceil(sqrt(2)) = 2 keeps both features in play and no random
//! draws are spent on feature selection.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::tree::{decode_rows, grow_tree, route, InputFeature, TreeNode, TreeParams};
use super::{encoding_to_predict, ModelError, TrainingMatrix};
use crate::encoding::{FeatureVector, Vocabulary};
use crate::predict::{PredictError, Predictor};
use crate::readout;
use crate::record::DataContext;
use crate::record::{LabelSet, OutputLabels};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestParams {
    pub n_trees: usize,
    /// Disable to train every tree on the full sample (used to check the
    /// single-tree degenerate case).
    pub bootstrap: bool,
    pub tree: TreeParams,
}

impl Default for ForestParams {
    fn default() -> Self {
        ForestParams {
            n_trees: 100,
            bootstrap: true,
            tree: TreeParams::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomForestModel {
    pub vocab: Vocabulary,
    pub params: ForestParams,
    pub seed: u64,
    /// Feature-subset size each tree saw: ceil(sqrt(F)).
    pub mtry: usize,
    pub trees: Vec<TreeNode>,
}

fn ceil_sqrt(x: usize) -> usize {
    let mut root = 0;
    while root * root < x {
        root += 1;
    }
    root
}

/// Trains `params.n_trees` trees, each on its own seeded bootstrap
/// resample and feature subset.
pub fn fit_forest(
    data: &TrainingMatrix,
    params: ForestParams,
    seed: u64,
) -> Result<RandomForestModel, ModelError> {
    data.check_consistent()?;
    if params.n_trees == 0 {
        return Err(ModelError::InvalidParameter {
            name: "n_trees",
            message: alloc::string::String::from("must be at least 1"),
        });
    }
    if params.tree.min_leaf_size == 0 {
        return Err(ModelError::InvalidParameter {
            name: "min_leaf_size",
            message: alloc::string::String::from("must be at least 1"),
        });
    }

    let rows = decode_rows(data)?;
    let n = rows.len();
    let feature_count = InputFeature::ALL.len();
    let mtry = ceil_sqrt(feature_count);

    let mut trees = Vec::with_capacity(params.n_trees);
    for tree_index in 0..params.n_trees {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(tree_index as u64));

        let sample: Vec<(DataContext, &OutputLabels)> = if params.bootstrap {
            (0..n).map(|_| rows[rng.gen_range(0..n)]).collect()
        } else {
            rows.clone()
        };

        let subset: Vec<InputFeature> = if mtry >= feature_count {
            InputFeature::ALL.to_vec()
        } else {
            let mut pool = InputFeature::ALL.to_vec();
            let mut chosen = Vec::with_capacity(mtry);
            for _ in 0..mtry {
                let pick = rng.gen_range(0..pool.len());
                chosen.push(pool.swap_remove(pick));
            }
            chosen.sort_unstable();
            chosen
        };

        trees.push(grow_tree(&sample, &params.tree, &subset));
    }

    Ok(RandomForestModel {
        vocab: data.vocab.clone(),
        params,
        seed,
        mtry,
        trees,
    })
}

/// Per-label vote over the trees' predicted sets: a label survives when
/// strictly more than half the trees predict it, with the usual
/// most-voted/lexicographic fallback; the project type is the plurality
/// value.
fn aggregate_votes(predictions: &[OutputLabels]) -> OutputLabels {
    let vote_set = |sets: Vec<LabelSet>| readout::majority_labels(sets.iter());
    OutputLabels {
        preprocessing_tools: vote_set(
            predictions
                .iter()
                .map(|p| p.preprocessing_tools.clone())
                .collect(),
        ),
        model_tools: vote_set(predictions.iter().map(|p| p.model_tools.clone()).collect()),
        project_type: readout::modal_value(predictions.iter().map(|p| p.project_type.as_str()))
            .unwrap_or_default(),
        evaluation_metrics: vote_set(
            predictions
                .iter()
                .map(|p| p.evaluation_metrics.clone())
                .collect(),
        ),
    }
}

impl RandomForestModel {
    pub fn predict_vector(&self, v: &FeatureVector) -> Result<OutputLabels, PredictError> {
        let ctx = self.vocab.decode(v).map_err(encoding_to_predict)?;
        let predictions: Vec<OutputLabels> = self
            .trees
            .iter()
            .map(|tree| route(tree, &ctx).readout())
            .collect();
        Ok(aggregate_votes(&predictions))
    }
}

impl Predictor for RandomForestModel {
    fn approach_name(&self) -> &'static str {
        "random_forest"
    }

    fn predict_labels(&self, ctx: &DataContext) -> Result<OutputLabels, PredictError> {
        let v = self.vocab.encode(ctx).map_err(encoding_to_predict)?;
        self.predict_vector(&v)
    }
}
