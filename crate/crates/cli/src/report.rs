//! Output documents and their text renderings. Every command can print
//! either a human-readable text form or the JSON document it is built from.

use serde::{Deserialize, Serialize};

use opsrec_core::{EvaluationReport, LabelSet, Recommendation, SplitRatio};

/// One approach's held-out scores plus how many test rows it failed to
/// predict (failures score as empty predictions rather than aborting).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ApproachResult {
    pub prediction_failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
    #[serde(flatten)]
    pub report: EvaluationReport,
}

/// The full `evaluate` output: the split that produced it and every
/// approach's scores, ranked best-first by F-measure.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvaluationDocument {
    pub seed: u64,
    pub ratio: SplitRatio,
    pub n_records: usize,
    pub n_train: usize,
    pub n_test: usize,
    pub best: String,
    pub approaches: Vec<ApproachResult>,
}

impl EvaluationDocument {
    pub fn result_for(&self, approach: &str) -> Option<&ApproachResult> {
        self.approaches
            .iter()
            .find(|r| r.report.approach == approach)
    }
}

/// Comparison table in the shape of the headline results: one row per
/// approach with micro-averaged precision, recall, and F-measure.
pub fn evaluation_text(doc: &EvaluationDocument) -> String {
    let name_width = doc
        .approaches
        .iter()
        .map(|r| r.report.approach.len())
        .chain(["approach".len()])
        .max()
        .unwrap_or(8);
    let mut out = format!(
        "{:<name_width$}  {:>9}  {:>9}  {:>9}\n",
        "approach", "precision", "recall", "f-measure"
    );
    for result in &doc.approaches {
        let r = &result.report;
        out.push_str(&format!(
            "{:<name_width$}  {:>9.6}  {:>9.6}  {:>9.6}",
            r.approach, r.precision.value, r.recall.value, r.f_measure.value
        ));
        if result.prediction_failures > 0 {
            out.push_str(&format!(
                "  ({} unpredicted test rows)",
                result.prediction_failures
            ));
        }
        out.push('\n');
    }
    out.push_str(&format!(
        "\nsplit: {} of {} records trained, {} held out (seed {}, ratio {})\n",
        doc.n_train, doc.n_records, doc.n_test, doc.seed, doc.ratio
    ));
    out.push_str(&format!("best approach by f-measure: {}\n", doc.best));
    out
}

/// The same table as comma-separated values.
pub fn evaluation_csv(doc: &EvaluationDocument) -> String {
    let mut out = String::from("approach,precision,recall,f_measure\n");
    for result in &doc.approaches {
        let r = &result.report;
        out.push_str(&format!(
            "{},{:.6},{:.6},{:.6}\n",
            r.approach, r.precision.value, r.recall.value, r.f_measure.value
        ));
    }
    out
}

fn join(set: &LabelSet) -> String {
    if set.is_empty() {
        String::from("(none)")
    } else {
        set.iter().cloned().collect::<Vec<_>>().join(", ")
    }
}

pub fn recommendation_text(rec: &Recommendation) -> String {
    let mut out = format!(
        "inputs: nature={}, type={} (approach: {})\n\n",
        rec.inputs.nature, rec.inputs.data_type, rec.approach
    );
    out.push_str(&format!(
        "preprocessing tools:  {}\n",
        join(&rec.predicted.preprocessing_tools)
    ));
    out.push_str(&format!(
        "model tools:          {}\n",
        join(&rec.predicted.model_tools)
    ));
    let project_type = if rec.predicted.project_type.is_empty() {
        "(none)"
    } else {
        rec.predicted.project_type.as_str()
    };
    out.push_str(&format!("project type:         {project_type}\n"));
    out.push_str(&format!(
        "evaluation metrics:   {}\n",
        join(&rec.predicted.evaluation_metrics)
    ));
    out.push_str("\nmlops tools:\n");
    if rec.mlops_tools.is_empty() {
        out.push_str("  (no catalogue entry integrates with the predicted tools)\n");
    }
    for matched in &rec.mlops_tools {
        let phases = matched
            .tool
            .phases
            .iter()
            .map(|p| p.as_str())
            .collect::<Vec<_>>()
            .join(", ");
        out.push_str(&format!(
            "  {} [{}] via {}\n",
            matched.tool.name,
            phases,
            join(&matched.matched_via)
        ));
    }
    if !rec.uncovered.is_empty() {
        out.push_str(&format!(
            "\nnot covered by the catalogue: {}\n",
            join(&rec.uncovered)
        ));
    }
    out
}
