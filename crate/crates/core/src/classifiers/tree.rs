//! Decision tree over the two categorical input features.
//!
//! Internal nodes split multiway on one feature (one child per observed
//! category); every node stores per-output-field frequency tables over its
//! training records, so prediction can read out from an internal node when
//! routing meets a category unseen at training time. One joint tree serves
//! all four output fields: with two input features they share the same
//! natural partition, and each leaf simply carries four tables.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{encoding_to_predict, ModelError, TrainingMatrix};
use crate::encoding::{FeatureVector, Vocabulary};
use crate::predict::{PredictError, Predictor};
use crate::readout;
use crate::record::{DataContext, LabelSet, OutputField, OutputLabels};

/// Tree growth limits. Defaults grow the tree fully: unlimited depth,
/// leaves of any size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeParams {
    pub max_depth: Option<u32>,
    pub min_leaf_size: usize,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams {
            max_depth: None,
            min_leaf_size: 1,
        }
    }
}

/// One of the two categorical input features a node can split on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputFeature {
    DataNature,
    DataType,
}

impl InputFeature {
    pub const ALL: [InputFeature; 2] = [InputFeature::DataNature, InputFeature::DataType];

    /// The canonical category name `ctx` takes for this feature; doubles
    /// as the child key in split nodes.
    pub fn value_of(&self, ctx: &DataContext) -> &'static str {
        match self {
            InputFeature::DataNature => ctx.nature.as_str(),
            InputFeature::DataType => ctx.data_type.as_str(),
        }
    }
}

/// One row of a frequency table: a distinct label set and how many of the
/// node's records carry exactly that set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueCount {
    pub labels: LabelSet,
    pub count: usize,
}

/// Frequency table of one output field over a node's training records.
/// Each distinct label set is one table class, so entry counts always sum
/// to the node's record count, multi-label or not.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldTable {
    pub entries: Vec<ValueCount>,
    pub total: usize,
}

impl FieldTable {
    fn from_sets<I>(sets: I) -> Self
    where
        I: IntoIterator<Item = LabelSet>,
    {
        let mut classes: BTreeMap<LabelSet, usize> = BTreeMap::new();
        let mut total = 0;
        for set in sets {
            total += 1;
            *classes.entry(set).or_insert(0) += 1;
        }
        FieldTable {
            entries: classes
                .into_iter()
                .map(|(labels, count)| ValueCount { labels, count })
                .collect(),
            total,
        }
    }

    /// Gini impurity of the table's class distribution: 1 − Σ pᵢ².
    pub fn gini(&self) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        let total = self.total as f64;
        let sum_sq: f64 = self
            .entries
            .iter()
            .map(|e| {
                let p = e.count as f64 / total;
                p * p
            })
            .sum();
        1.0 - sum_sq
    }

    pub fn is_pure(&self) -> bool {
        self.entries.len() <= 1
    }

    /// How many of the node's records contain each individual label.
    fn label_counts(&self) -> BTreeMap<&str, usize> {
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for entry in &self.entries {
            for label in &entry.labels {
                *counts.entry(label.as_str()).or_insert(0) += entry.count;
            }
        }
        counts
    }

    /// Set-field readout: labels in strictly more than half the records,
    /// falling back to the most frequent label (lexicographic on ties).
    pub fn majority_readout(&self) -> LabelSet {
        readout::majority_from_counts(&self.label_counts(), self.total)
    }

    /// Single-value readout for the project type: the modal label.
    pub fn modal_readout(&self) -> Option<String> {
        readout::modal_from_counts(&self.label_counts())
    }
}

/// The four per-field frequency tables of one node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeStats {
    pub count: usize,
    pub preprocessing_tools: FieldTable,
    pub model_tools: FieldTable,
    pub project_type: FieldTable,
    pub evaluation_metrics: FieldTable,
}

impl NodeStats {
    fn from_rows(rows: &[(DataContext, &OutputLabels)], indices: &[usize]) -> Self {
        let field_table = |field: OutputField| {
            FieldTable::from_sets(indices.iter().map(|&i| rows[i].1.field_labels(field)))
        };
        NodeStats {
            count: indices.len(),
            preprocessing_tools: field_table(OutputField::PreprocessingTools),
            model_tools: field_table(OutputField::ModelTools),
            project_type: field_table(OutputField::ProjectType),
            evaluation_metrics: field_table(OutputField::EvaluationMetrics),
        }
    }

    pub fn field(&self, field: OutputField) -> &FieldTable {
        match field {
            OutputField::PreprocessingTools => &self.preprocessing_tools,
            OutputField::ModelTools => &self.model_tools,
            OutputField::ProjectType => &self.project_type,
            OutputField::EvaluationMetrics => &self.evaluation_metrics,
        }
    }

    /// Mean Gini impurity across the four output fields; the split
    /// criterion minimizes the size-weighted sum of this over children.
    pub fn mean_gini(&self) -> f64 {
        OutputField::ALL
            .iter()
            .map(|&f| self.field(f).gini())
            .sum::<f64>()
            / OutputField::ALL.len() as f64
    }

    /// All four fields carry a single distinct label set each.
    pub fn is_pure(&self) -> bool {
        OutputField::ALL.iter().all(|&f| self.field(f).is_pure())
    }

    /// The node's prediction: thresholded majority per set field, modal
    /// value for the project type.
    pub fn readout(&self) -> OutputLabels {
        OutputLabels {
            preprocessing_tools: self.preprocessing_tools.majority_readout(),
            model_tools: self.model_tools.majority_readout(),
            project_type: self.project_type.modal_readout().unwrap_or_default(),
            evaluation_metrics: self.evaluation_metrics.majority_readout(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TreeNode {
    Leaf {
        stats: NodeStats,
    },
    Split {
        feature: InputFeature,
        stats: NodeStats,
        children: BTreeMap<String, TreeNode>,
    },
}

impl TreeNode {
    pub fn stats(&self) -> &NodeStats {
        match self {
            TreeNode::Leaf { stats } => stats,
            TreeNode::Split { stats, .. } => stats,
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Split { children, .. } => children.values().map(TreeNode::leaf_count).sum(),
        }
    }

    pub fn depth(&self) -> u32 {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Split { children, .. } => {
                1 + children.values().map(TreeNode::depth).max().unwrap_or(0)
            }
        }
    }
}

/// Follows split edges for `ctx` down to a leaf; a category with no child
/// branch stops at the current node, whose own stats stand in.
pub(crate) fn route<'a>(node: &'a TreeNode, ctx: &DataContext) -> &'a NodeStats {
    match node {
        TreeNode::Leaf { stats } => stats,
        TreeNode::Split {
            feature,
            stats,
            children,
        } => match children.get(feature.value_of(ctx)) {
            Some(child) => route(child, ctx),
            None => stats,
        },
    }
}

/// Grows a tree over pre-decoded rows, considering only `allowed` features.
pub(crate) fn grow_tree(
    rows: &[(DataContext, &OutputLabels)],
    params: &TreeParams,
    allowed: &[InputFeature],
) -> TreeNode {
    let indices: Vec<usize> = (0..rows.len()).collect();
    grow(rows, params, allowed, indices, &mut Vec::new(), 0)
}

fn grow(
    rows: &[(DataContext, &OutputLabels)],
    params: &TreeParams,
    allowed: &[InputFeature],
    indices: Vec<usize>,
    used: &mut Vec<InputFeature>,
    depth: u32,
) -> TreeNode {
    let stats = NodeStats::from_rows(rows, &indices);

    if stats.is_pure() {
        return TreeNode::Leaf { stats };
    }
    if let Some(limit) = params.max_depth {
        if depth >= limit {
            return TreeNode::Leaf { stats };
        }
    }

    let split = best_split(rows, params, allowed, used, &indices);
    let (feature, groups) = match split {
        Some(found) => found,
        None => return TreeNode::Leaf { stats },
    };

    used.push(feature);
    let children = groups
        .into_iter()
        .map(|(value, group)| {
            let child = grow(rows, params, allowed, group, used, depth + 1);
            (String::from(value), child)
        })
        .collect();
    used.pop();

    TreeNode::Split {
        feature,
        stats,
        children,
    }
}

type Groups = BTreeMap<&'static str, Vec<usize>>;

/// The unused feature whose multiway split minimizes the size-weighted
/// mean Gini over children. Candidates must actually discriminate (at
/// least two distinct values here) and must not undercut `min_leaf_size`;
/// ties keep the earlier feature in declaration order.
fn best_split(
    rows: &[(DataContext, &OutputLabels)],
    params: &TreeParams,
    allowed: &[InputFeature],
    used: &[InputFeature],
    indices: &[usize],
) -> Option<(InputFeature, Groups)> {
    let mut best: Option<(InputFeature, Groups, f64)> = None;
    for feature in InputFeature::ALL {
        if !allowed.contains(&feature) || used.contains(&feature) {
            continue;
        }
        let mut groups: Groups = BTreeMap::new();
        for &i in indices {
            groups
                .entry(feature.value_of(&rows[i].0))
                .or_default()
                .push(i);
        }
        if groups.len() < 2 {
            continue;
        }
        if groups.values().any(|g| g.len() < params.min_leaf_size) {
            continue;
        }
        let total = indices.len() as f64;
        let score: f64 = groups
            .values()
            .map(|g| {
                let child = NodeStats::from_rows(rows, g);
                (g.len() as f64 / total) * child.mean_gini()
            })
            .sum();
        match &best {
            Some((_, _, best_score)) if score >= *best_score => {}
            _ => best = Some((feature, groups, score)),
        }
    }
    best.map(|(feature, groups, _)| (feature, groups))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTreeModel {
    pub vocab: Vocabulary,
    pub params: TreeParams,
    pub root: TreeNode,
}

/// Fits a tree by recursive splitting, choosing at each node the feature
/// that minimizes the mean Gini impurity across the four output fields.
/// Growth stops at `max_depth`, when a split would violate
/// `min_leaf_size`, when the node is pure, or when no unused feature
/// discriminates.
pub fn fit_tree(
    data: &TrainingMatrix,
    params: TreeParams,
) -> Result<DecisionTreeModel, ModelError> {
    data.check_consistent()?;
    if params.min_leaf_size == 0 {
        return Err(ModelError::InvalidParameter {
            name: "min_leaf_size",
            message: String::from("must be at least 1"),
        });
    }
    let rows = decode_rows(data)?;
    let root = grow_tree(&rows, &params, &InputFeature::ALL);
    Ok(DecisionTreeModel {
        vocab: data.vocab.clone(),
        params,
        root,
    })
}

/// Decodes every training vector back to its category pair once, so tree
/// growth works on categories instead of raw bits.
pub(crate) fn decode_rows(
    data: &TrainingMatrix,
) -> Result<Vec<(DataContext, &OutputLabels)>, ModelError> {
    data.vectors
        .iter()
        .zip(data.labels.iter())
        .map(|(v, labels)| Ok((data.vocab.decode(v)?, labels)))
        .collect()
}

impl DecisionTreeModel {
    /// Routes an encoded input to its node and reads the prediction out of
    /// the node's tables.
    pub fn predict_vector(&self, v: &FeatureVector) -> Result<OutputLabels, PredictError> {
        let ctx = self.vocab.decode(v).map_err(encoding_to_predict)?;
        Ok(route(&self.root, &ctx).readout())
    }
}

impl Predictor for DecisionTreeModel {
    fn approach_name(&self) -> &'static str {
        "decision_trees"
    }

    fn predict_labels(&self, ctx: &DataContext) -> Result<OutputLabels, PredictError> {
        let v = self.vocab.encode(ctx).map_err(encoding_to_predict)?;
        self.predict_vector(&v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::record::{DataNature, DataType, FeatureView};
    use alloc::vec;

    fn labels(names: &[&str]) -> LabelSet {
        names.iter().map(|n| String::from(*n)).collect()
    }

    fn view(
        nature: DataNature,
        data_type: DataType,
        preproc: &[&str],
        model: &[&str],
        project_type: &str,
        metrics: &[&str],
    ) -> FeatureView {
        FeatureView {
            inputs: DataContext::new(nature, data_type),
            outputs: OutputLabels {
                preprocessing_tools: labels(preproc),
                model_tools: labels(model),
                project_type: String::from(project_type),
                evaluation_metrics: labels(metrics),
            },
        }
    }

    fn matrix(views: &[FeatureView]) -> TrainingMatrix {
        TrainingMatrix::from_views(views, Vocabulary::full()).unwrap()
    }

    #[test]
    fn single_record_yields_a_leaf_predicting_it() {
        let views = [view(
            DataNature::Unstructured,
            DataType::Image,
            &["opencv"],
            &["tensorflow"],
            "classification",
            &["accuracy"],
        )];
        let model = fit_tree(&matrix(&views), TreeParams::default()).unwrap();
        assert!(matches!(model.root, TreeNode::Leaf { .. }));
        let predicted = model.predict_labels(&views[0].inputs).unwrap();
        assert_eq!(predicted, views[0].outputs);
    }

    #[test]
    fn identical_inputs_stop_splitting_and_read_out_the_majority() {
        // All records share one (nature, type) pair, so no feature
        // discriminates and the root must be a leaf.
        let views = [
            view(
                DataNature::Structured,
                DataType::Numerical,
                &["pandas"],
                &["sklearn"],
                "regression",
                &["mse"],
            ),
            view(
                DataNature::Structured,
                DataType::Numerical,
                &["pandas"],
                &["sklearn"],
                "regression",
                &["mse"],
            ),
            view(
                DataNature::Structured,
                DataType::Numerical,
                &["pandas"],
                &["xgboost"],
                "classification",
                &["accuracy"],
            ),
        ];
        let model = fit_tree(&matrix(&views), TreeParams::default()).unwrap();
        assert!(matches!(model.root, TreeNode::Leaf { .. }));
        let predicted = model.predict_labels(&views[0].inputs).unwrap();
        // 2 of 3 records agree on everything; the majority wins each field.
        assert_eq!(predicted.model_tools, labels(&["sklearn"]));
        assert_eq!(predicted.project_type, "regression");
        assert_eq!(predicted.evaluation_metrics, labels(&["mse"]));
        assert_eq!(predicted.preprocessing_tools, labels(&["pandas"]));
    }

    #[test]
    fn fully_grown_tree_reproduces_all_twelve_groups() {
        let mut views = Vec::new();
        for (i, ctx) in DataContext::all_pairs().enumerate() {
            let tool = alloc::format!("tool{i}");
            views.push(view(
                ctx.nature,
                ctx.data_type,
                &[tool.as_str()],
                &[tool.as_str()],
                "classification",
                &["accuracy"],
            ));
        }
        let model = fit_tree(&matrix(&views), TreeParams::default()).unwrap();
        assert_eq!(model.root.leaf_count(), 12);
        for v in &views {
            let predicted = model.predict_labels(&v.inputs).unwrap();
            assert_eq!(predicted, v.outputs);
        }
    }

    #[test]
    fn leaf_threshold_keeps_labels_in_more_than_half_the_records() {
        let mut views = vec![
            view(
                DataNature::Structured,
                DataType::Numerical,
                &["pandas"],
                &["sklearn"],
                "regression",
                &["mse"]
            );
            3
        ];
        views.push(view(
            DataNature::Structured,
            DataType::Numerical,
            &["dask"],
            &["sklearn"],
            "regression",
            &["mse"],
        ));
        let model = fit_tree(&matrix(&views), TreeParams::default()).unwrap();
        let predicted = model.predict_labels(&views[0].inputs).unwrap();
        // pandas sits in 3 of 4 records; dask in 1 of 4.
        assert_eq!(predicted.preprocessing_tools, labels(&["pandas"]));
    }

    #[test]
    fn leaf_fallback_takes_the_lexicographically_first_most_frequent_label() {
        let views = [
            view(
                DataNature::Structured,
                DataType::Numerical,
                &["a"],
                &["m"],
                "regression",
                &["mse"],
            ),
            view(
                DataNature::Structured,
                DataType::Numerical,
                &["b"],
                &["m"],
                "regression",
                &["mse"],
            ),
        ];
        let model = fit_tree(&matrix(&views), TreeParams::default()).unwrap();
        let predicted = model.predict_labels(&views[0].inputs).unwrap();
        // Neither label clears 1 of 2; fallback picks "a".
        assert_eq!(predicted.preprocessing_tools, labels(&["a"]));
    }

    #[test]
    fn max_depth_zero_pins_the_tree_to_its_root() {
        let views = [
            view(
                DataNature::Structured,
                DataType::Numerical,
                &["pandas"],
                &["sklearn"],
                "regression",
                &["mse"],
            ),
            view(
                DataNature::Unstructured,
                DataType::Image,
                &["opencv"],
                &["keras"],
                "classification",
                &["accuracy"],
            ),
        ];
        let params = TreeParams {
            max_depth: Some(0),
            min_leaf_size: 1,
        };
        let model = fit_tree(&matrix(&views), params).unwrap();
        assert!(matches!(model.root, TreeNode::Leaf { .. }));
    }

    #[test]
    fn min_leaf_size_blocks_splits_that_would_isolate_records() {
        let views = [
            view(
                DataNature::Structured,
                DataType::Numerical,
                &["pandas"],
                &["sklearn"],
                "regression",
                &["mse"],
            ),
            view(
                DataNature::Structured,
                DataType::Numerical,
                &["pandas"],
                &["sklearn"],
                "regression",
                &["mse"],
            ),
            view(
                DataNature::Unstructured,
                DataType::Image,
                &["opencv"],
                &["keras"],
                "classification",
                &["accuracy"],
            ),
        ];
        let params = TreeParams {
            max_depth: None,
            min_leaf_size: 2,
        };
        let model = fit_tree(&matrix(&views), params).unwrap();
        assert!(matches!(model.root, TreeNode::Leaf { .. }));
    }

    #[test]
    fn no_feature_repeats_along_a_path() {
        let mut views = Vec::new();
        for ctx in DataContext::all_pairs() {
            views.push(view(
                ctx.nature,
                ctx.data_type,
                &["p"],
                &[ctx.nature.as_str()],
                "classification",
                &[ctx.data_type.as_str()],
            ));
        }
        let model = fit_tree(&matrix(&views), TreeParams::default()).unwrap();
        assert!(model.root.depth() <= 2);
    }

    #[test]
    fn unseen_branch_falls_back_to_the_parent_node_stats() {
        // Full vocabulary, but no training row is semi_structured. The
        // routing for such an input stops at whichever node lacks the
        // branch and answers from that node's own tables.
        let views = [
            view(
                DataNature::Structured,
                DataType::Numerical,
                &["pandas"],
                &["sklearn"],
                "regression",
                &["mse"],
            ),
            view(
                DataNature::Unstructured,
                DataType::Image,
                &["opencv"],
                &["keras"],
                "classification",
                &["accuracy"],
            ),
        ];
        let model = fit_tree(&matrix(&views), TreeParams::default()).unwrap();
        let probe = DataContext::new(DataNature::SemiStructured, DataType::Numerical);
        let predicted = model.predict_labels(&probe).unwrap();
        assert_eq!(predicted, model.predict_labels(&probe).unwrap());
        assert!(!predicted.project_type.is_empty());
    }

    #[test]
    fn prediction_rejects_vectors_of_the_wrong_width() {
        let views = [view(
            DataNature::Structured,
            DataType::Numerical,
            &["pandas"],
            &["sklearn"],
            "regression",
            &["mse"],
        )];
        let model = fit_tree(&matrix(&views), TreeParams::default()).unwrap();
        let narrow_vocab = Vocabulary::from_observed(
            [DataContext::new(
                DataNature::Structured,
                DataType::Numerical,
            )]
            .iter(),
        )
        .unwrap();
        let narrow = narrow_vocab
            .encode(&DataContext::new(
                DataNature::Structured,
                DataType::Numerical,
            ))
            .unwrap();
        let err = model.predict_vector(&narrow).unwrap_err();
        assert_eq!(
            err,
            PredictError::WidthMismatch {
                expected: 7,
                found: 2
            }
        );
    }

    #[test]
    fn fitting_zero_records_fails() {
        let data = TrainingMatrix::from_views(&[], Vocabulary::full()).unwrap();
        assert_eq!(
            fit_tree(&data, TreeParams::default()).unwrap_err(),
            ModelError::EmptyTrainingData
        );
    }

    #[test]
    fn gini_is_zero_for_pure_and_half_for_even_two_class_tables() {
        let pure = FieldTable::from_sets([labels(&["a"]), labels(&["a"])]);
        assert_eq!(pure.gini(), 0.0);
        assert!(pure.is_pure());

        let even = FieldTable::from_sets([labels(&["a"]), labels(&["b"])]);
        assert!((even.gini() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn field_tables_sum_to_the_record_count() {
        let views = [
            view(
                DataNature::Structured,
                DataType::Numerical,
                &["pandas", "numpy"],
                &["sklearn"],
                "regression",
                &["mse"],
            ),
            view(
                DataNature::Structured,
                DataType::Numerical,
                &["pandas"],
                &["sklearn"],
                "regression",
                &["mse"],
            ),
            view(
                DataNature::Unstructured,
                DataType::Image,
                &["opencv"],
                &["keras"],
                "classification",
                &["accuracy"],
            ),
        ];
        let model = fit_tree(&matrix(&views), TreeParams::default()).unwrap();
        let stats = model.root.stats();
        for field in OutputField::ALL {
            let table = stats.field(field);
            let sum: usize = table.entries.iter().map(|e| e.count).sum();
            assert_eq!(sum, stats.count);
            assert_eq!(table.total, stats.count);
        }
    }

    #[test]
    fn tree_serializes_and_round_trips() {
        let views = [
            view(
                DataNature::Structured,
                DataType::Numerical,
                &["pandas"],
                &["sklearn"],
                "regression",
                &["mse"],
            ),
            view(
                DataNature::Unstructured,
                DataType::Image,
                &["opencv"],
                &["keras"],
                "classification",
                &["accuracy"],
            ),
        ];
        let model = fit_tree(&matrix(&views), TreeParams::default()).unwrap();
        let json = serde_json::to_string(&model).unwrap();
        let back: DecisionTreeModel = serde_json::from_str(&json).unwrap();
        assert_eq!(back, model);
        for v in &views {
            assert_eq!(
                back.predict_labels(&v.inputs).unwrap(),
                model.predict_labels(&v.inputs).unwrap()
            );
        }
    }
}
