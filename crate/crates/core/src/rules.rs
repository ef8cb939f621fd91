//! The rule-based approach: conditions over (data nature, data type) mapped
//! to the four output fields.
//!
//! Rules are the product's knowledge base. They can be written by hand in
//! the JSON rule-file format (see [`RuleSet`]) or extracted from training
//! data with [`extract_rules`]. Matching picks the most specific applicable
//! rule; ties fall back to file order.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::predict::{PredictError, Predictor};
use crate::readout;
use crate::record::{
    DataContext, DataNature, DataType, FeatureView, LabelSet, OutputField, OutputLabels,
};

/// Version written into (and required of) rule files.
pub const RULE_FORMAT_VERSION: u32 = 1;

mod wildcard {
    //! Serde adapter mapping `None` to the `"*"` wildcard token.

    use alloc::string::String;
    use core::fmt;
    use core::str::FromStr;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S, T>(value: &Option<T>, serializer: S) -> Result<S::Ok, S::Error>
    where
        S: Serializer,
        T: Serialize,
    {
        match value {
            Some(inner) => inner.serialize(serializer),
            None => serializer.serialize_str("*"),
        }
    }

    pub fn deserialize<'de, D, T>(deserializer: D) -> Result<Option<T>, D::Error>
    where
        D: Deserializer<'de>,
        T: FromStr,
        T::Err: fmt::Display,
    {
        let raw = String::deserialize(deserializer)?;
        if raw.trim() == "*" {
            return Ok(None);
        }
        raw.parse::<T>().map(Some).map_err(serde::de::Error::custom)
    }
}

/// What a rule requires of the input pair. `None` is the `*` wildcard.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition {
    #[serde(with = "wildcard")]
    pub nature: Option<DataNature>,
    #[serde(rename = "type", with = "wildcard")]
    pub data_type: Option<DataType>,
}

impl Condition {
    pub fn exact(ctx: DataContext) -> Self {
        Condition {
            nature: Some(ctx.nature),
            data_type: Some(ctx.data_type),
        }
    }

    pub fn matches(&self, ctx: &DataContext) -> bool {
        self.nature.map_or(true, |n| n == ctx.nature)
            && self.data_type.map_or(true, |t| t == ctx.data_type)
    }

    /// Number of non-wildcard components (0 to 2). Higher wins at match
    /// time.
    pub fn specificity(&self) -> u8 {
        self.nature.is_some() as u8 + self.data_type.is_some() as u8
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nature = self.nature.map_or("*", |n| n.as_str());
        let data_type = self.data_type.map_or("*", |t| t.as_str());
        write!(f, "({nature}, {data_type})")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rule {
    pub id: String,
    pub condition: Condition,
    pub outputs: OutputLabels,
}

/// An ordered collection of rules plus file metadata.
///
/// The serialized form is the rule-file format:
///
/// ```json
/// {
///   "version": 1,
///   "rules": [
///     {
///       "id": "unstructured_image",
///       "condition": { "nature": "unstructured", "type": "image" },
///       "outputs": {
///         "preprocessing_tools": ["opencv"],
///         "model_tools": ["tensorflow"],
///         "project_type": "classification",
///         "evaluation_metrics": ["accuracy"]
///       }
///     }
///   ]
/// }
/// ```
///
/// `"*"` in either condition slot matches any value of that feature.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleSet {
    pub version: u32,
    pub rules: Vec<Rule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleError {
    UnsupportedVersion {
        found: u32,
        supported: u32,
    },
    DuplicateId {
        id: String,
    },
    /// A tool/metric set (or the project type) is empty.
    EmptyOutput {
        rule_id: String,
        field: OutputField,
    },
    /// Both condition components are wildcards.
    WildcardOnly {
        rule_id: String,
    },
    /// Rule extraction over zero records.
    NoRecords,
}

impl fmt::Display for RuleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleError::UnsupportedVersion { found, supported } => {
                write!(
                    f,
                    "rule file version {found} not supported (expected {supported})"
                )
            }
            RuleError::DuplicateId { id } => write!(f, "duplicate rule id \"{id}\""),
            RuleError::EmptyOutput { rule_id, field } => {
                write!(f, "rule \"{rule_id}\" has an empty {field}")
            }
            RuleError::WildcardOnly { rule_id } => {
                write!(
                    f,
                    "rule \"{rule_id}\" needs at least one non-wildcard condition"
                )
            }
            RuleError::NoRecords => write!(f, "cannot extract rules from zero records"),
        }
    }
}

impl core::error::Error for RuleError {}

impl RuleSet {
    pub fn new(rules: Vec<Rule>) -> Self {
        RuleSet {
            version: RULE_FORMAT_VERSION,
            rules,
            provenance: None,
        }
    }

    /// Checks the file-level invariants: supported version, unique ids,
    /// at least one concrete condition component, non-empty outputs.
    pub fn validate(&self) -> Result<(), RuleError> {
        if self.version != RULE_FORMAT_VERSION {
            return Err(RuleError::UnsupportedVersion {
                found: self.version,
                supported: RULE_FORMAT_VERSION,
            });
        }
        let mut seen = alloc::collections::BTreeSet::new();
        for rule in &self.rules {
            if !seen.insert(rule.id.as_str()) {
                return Err(RuleError::DuplicateId {
                    id: rule.id.clone(),
                });
            }
            if rule.condition.specificity() == 0 {
                return Err(RuleError::WildcardOnly {
                    rule_id: rule.id.clone(),
                });
            }
            for field in OutputField::ALL {
                if rule.outputs.field_labels(field).is_empty() {
                    return Err(RuleError::EmptyOutput {
                        rule_id: rule.id.clone(),
                        field,
                    });
                }
            }
        }
        Ok(())
    }

    /// Re-normalizes all rule outputs, for files edited by hand.
    pub fn normalized(self) -> Self {
        RuleSet {
            version: self.version,
            rules: self
                .rules
                .into_iter()
                .map(|rule| Rule {
                    id: rule.id.trim().to_string(),
                    condition: rule.condition,
                    outputs: rule.outputs.normalized(),
                })
                .collect(),
            provenance: self.provenance,
        }
    }

    /// The most specific rule covering `ctx`; among equally specific
    /// matches the one earliest in file order wins.
    pub fn match_rule(&self, ctx: &DataContext) -> Result<&Rule, PredictError> {
        let mut best: Option<&Rule> = None;
        for rule in &self.rules {
            if !rule.condition.matches(ctx) {
                continue;
            }
            match best {
                Some(current)
                    if rule.condition.specificity() <= current.condition.specificity() => {}
                _ => best = Some(rule),
            }
        }
        best.ok_or(PredictError::NoMatch { context: *ctx })
    }
}

impl Predictor for RuleSet {
    fn approach_name(&self) -> &'static str {
        "rule_based"
    }

    /// The matched rule's outputs, verbatim.
    fn predict_labels(&self, ctx: &DataContext) -> Result<OutputLabels, PredictError> {
        self.match_rule(ctx).map(|rule| rule.outputs.clone())
    }
}

/// How [`extract_rules`] turns a group of records into one rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtractStrategy {
    /// Union of every label observed in the group. Maximizes recall on the
    /// extraction data (exactly 1.0 by construction) at the cost of
    /// precision.
    Union,
    /// Labels appearing in strictly more than half of the group's records,
    /// falling back to the most frequent label when none qualifies.
    Majority,
}

impl ExtractStrategy {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExtractStrategy::Union => "union",
            ExtractStrategy::Majority => "majority",
        }
    }
}

impl fmt::Display for ExtractStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExtractStrategy {
    type Err = String;

    fn from_str(raw: &str) -> Result<Self, Self::Err> {
        match raw.trim().to_lowercase().as_str() {
            "union" => Ok(ExtractStrategy::Union),
            "majority" => Ok(ExtractStrategy::Majority),
            other => Err(format!(
                "unknown extraction strategy \"{other}\", allowed: union|majority"
            )),
        }
    }
}

/// Derives one exact-condition rule per distinct observed (nature, type)
/// pair. The project type is always the group's modal value with
/// lexicographic tie-breaking; set-valued fields follow the strategy.
pub fn extract_rules(
    records: &[FeatureView],
    strategy: ExtractStrategy,
) -> Result<RuleSet, RuleError> {
    if records.is_empty() {
        return Err(RuleError::NoRecords);
    }
    let mut groups: BTreeMap<DataContext, Vec<&OutputLabels>> = BTreeMap::new();
    for view in records {
        groups.entry(view.inputs).or_default().push(&view.outputs);
    }

    let mut rules = Vec::with_capacity(groups.len());
    for (ctx, outputs) in &groups {
        let field_set = |field: OutputField| -> LabelSet {
            let sets: Vec<LabelSet> = outputs.iter().map(|o| o.field_labels(field)).collect();
            match strategy {
                ExtractStrategy::Union => sets.into_iter().flatten().collect(),
                ExtractStrategy::Majority => readout::majority_labels(sets.iter()),
            }
        };
        let project_type = readout::modal_value(outputs.iter().map(|o| o.project_type.as_str()))
            .unwrap_or_default();
        rules.push(Rule {
            id: format!("{}_{}", ctx.nature, ctx.data_type),
            condition: Condition::exact(*ctx),
            outputs: OutputLabels {
                preprocessing_tools: field_set(OutputField::PreprocessingTools),
                model_tools: field_set(OutputField::ModelTools),
                project_type,
                evaluation_metrics: field_set(OutputField::EvaluationMetrics),
            },
        });
    }

    Ok(RuleSet {
        version: RULE_FORMAT_VERSION,
        rules,
        provenance: Some(format!(
            "extracted with the {strategy} strategy from {} records",
            records.len()
        )),
    })
}
