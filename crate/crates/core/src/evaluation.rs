//! Micro-averaged precision, recall, and F-measure over pooled
//! (record, field, label) counts, plus the approach comparison.
//!
//! Gold and predicted label sets are compared field by field; true/false
//! positives and false negatives are summed across every record and all
//! four output fields before any ratio is taken (micro-averaging). The
//! single-valued project type participates as a singleton set. Degenerate
//! 0/0 ratios are reported as 0 with an explicit flag instead of being
//! dropped.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::record::{OutputField, OutputLabels};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub true_pos: u64,
    pub false_pos: u64,
    pub false_neg: u64,
}

impl ConfusionCounts {
    pub fn add(&mut self, other: ConfusionCounts) {
        self.true_pos += other.true_pos;
        self.false_pos += other.false_pos;
        self.false_neg += other.false_neg;
    }

    /// Counts one gold/predicted set pair: tp = |gold ∩ pred|,
    /// fp = |pred \ gold|, fn = |gold \ pred|.
    pub fn of_sets(gold: &crate::record::LabelSet, predicted: &crate::record::LabelSet) -> Self {
        let true_pos = gold.intersection(predicted).count() as u64;
        ConfusionCounts {
            true_pos,
            false_pos: predicted.len() as u64 - true_pos,
            false_neg: gold.len() as u64 - true_pos,
        }
    }
}

/// A ratio in [0, 1]; `degenerate` marks the 0/0 convention having fired.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metric {
    pub value: f64,
    pub degenerate: bool,
}

impl Metric {
    fn ratio(numerator: u64, denominator: u64) -> Self {
        if denominator == 0 {
            Metric {
                value: 0.0,
                degenerate: true,
            }
        } else {
            Metric {
                value: numerator as f64 / denominator as f64,
                degenerate: false,
            }
        }
    }
}

/// tp / (tp + fp); 0 with the degenerate flag when nothing was predicted.
pub fn precision(c: &ConfusionCounts) -> Metric {
    Metric::ratio(c.true_pos, c.true_pos + c.false_pos)
}

/// tp / (tp + fn); 0 with the degenerate flag when there are no gold labels.
pub fn recall(c: &ConfusionCounts) -> Metric {
    Metric::ratio(c.true_pos, c.true_pos + c.false_neg)
}

/// Harmonic mean 2pr/(p+r); 0 when p + r = 0.
pub fn f_measure(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalError {
    ShapeMismatch { gold: usize, predicted: usize },
    NoReports,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::ShapeMismatch { gold, predicted } => write!(
                f,
                "gold has {gold} records but predictions have {predicted}"
            ),
            EvalError::NoReports => write!(f, "cannot compare zero evaluation reports"),
        }
    }
}

impl core::error::Error for EvalError {}

/// Pools confusion counts over all records and all four output fields.
pub fn score_predictions(
    gold: &[OutputLabels],
    predicted: &[OutputLabels],
) -> Result<ConfusionCounts, EvalError> {
    if gold.len() != predicted.len() {
        return Err(EvalError::ShapeMismatch {
            gold: gold.len(),
            predicted: predicted.len(),
        });
    }
    let mut counts = ConfusionCounts::default();
    for (g, p) in gold.iter().zip(predicted.iter()) {
        for field in OutputField::ALL {
            counts.add(ConfusionCounts::of_sets(
                &g.field_labels(field),
                &p.field_labels(field),
            ));
        }
    }
    Ok(counts)
}

/// Counts restricted to one output field, for the per-field breakdown.
fn score_field(
    gold: &[OutputLabels],
    predicted: &[OutputLabels],
    field: OutputField,
) -> ConfusionCounts {
    let mut counts = ConfusionCounts::default();
    for (g, p) in gold.iter().zip(predicted.iter()) {
        counts.add(ConfusionCounts::of_sets(
            &g.field_labels(field),
            &p.field_labels(field),
        ));
    }
    counts
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldBreakdown {
    pub field: OutputField,
    pub counts: ConfusionCounts,
    pub precision: Metric,
    pub recall: Metric,
    pub f_measure: Metric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub approach: String,
    pub counts: ConfusionCounts,
    pub precision: Metric,
    pub recall: Metric,
    pub f_measure: Metric,
    pub per_field: Vec<FieldBreakdown>,
}

fn metrics_of(counts: ConfusionCounts) -> (Metric, Metric, Metric) {
    let p = precision(&counts);
    let r = recall(&counts);
    let f = Metric {
        value: f_measure(p.value, r.value),
        degenerate: p.value + r.value == 0.0,
    };
    (p, r, f)
}

impl EvaluationReport {
    /// Scores one approach against aligned gold/predicted label rows.
    pub fn from_pairs(
        approach: &str,
        gold: &[OutputLabels],
        predicted: &[OutputLabels],
    ) -> Result<Self, EvalError> {
        let counts = score_predictions(gold, predicted)?;
        let (precision, recall, f) = metrics_of(counts);
        let per_field = OutputField::ALL
            .iter()
            .map(|&field| {
                let counts = score_field(gold, predicted, field);
                let (precision, recall, f) = metrics_of(counts);
                FieldBreakdown {
                    field,
                    counts,
                    precision,
                    recall,
                    f_measure: f,
                }
            })
            .collect();
        Ok(EvaluationReport {
            approach: String::from(approach),
            counts,
            precision,
            recall,
            f_measure: f,
            per_field,
        })
    }
}

/// Reports ranked by F-measure, best first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub ranked: Vec<EvaluationReport>,
    pub best: String,
}

/// Sorts reports by F-measure descending (name ascending on exact ties)
/// and names the winner.
pub fn compare_approaches(reports: Vec<EvaluationReport>) -> Result<Comparison, EvalError> {
    if reports.is_empty() {
        return Err(EvalError::NoReports);
    }
    let mut ranked = reports;
    ranked.sort_by(|a, b| {
        b.f_measure
            .value
            .total_cmp(&a.f_measure.value)
            .then_with(|| a.approach.cmp(&b.approach))
    });
    let best = ranked[0].approach.clone();
    Ok(Comparison { ranked, best })
}
