//! Seeded synthetic dataset generation.
//!
//! A [`SynthSpec`] describes, per (nature, type) pair, how likely each
//! output label is. Generation is fully reproducible: one ChaCha8 stream
//! keyed by the seed drives every draw, and the draw order per record is
//! fixed (profile, then the three Bernoulli label lists in declaration
//! order, then the project type), so `(spec, n, seed)` always produces the
//! same records.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::record::{DataNature, DataType, LabelSet, ProjectCategory, ProjectRecord};

/// Version written into (and required of) generator spec files.
pub const SYNTH_FORMAT_VERSION: u32 = 1;

/// A label and the independent probability of it appearing in a record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelProb {
    pub label: String,
    pub prob: f64,
}

/// A label and its relative weight in a categorical draw.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelWeight {
    pub label: String,
    pub weight: f64,
}

/// Output-label distributions for one (nature, type) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairProfile {
    pub nature: DataNature,
    pub data_type: DataType,
    /// Relative weight of this pair among all profiles.
    pub weight: f64,
    pub preprocessing_tools: Vec<LabelProb>,
    pub model_tools: Vec<LabelProb>,
    pub evaluation_metrics: Vec<LabelProb>,
    pub project_types: Vec<LabelWeight>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub version: u32,
    pub profiles: Vec<PairProfile>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SynthError {
    UnsupportedVersion {
        found: u32,
        supported: u32,
    },
    NoProfiles,
    /// No positive weight anywhere in a categorical distribution.
    DeadDistribution {
        what: String,
    },
    NegativeWeight {
        what: String,
        weight: f64,
    },
    InvalidProbability {
        label: String,
        prob: f64,
    },
    EmptyLabelList {
        profile: usize,
        field: &'static str,
    },
}

impl fmt::Display for SynthError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SynthError::UnsupportedVersion { found, supported } => write!(
                f,
                "generator spec version {found} not supported (expected {supported})"
            ),
            SynthError::NoProfiles => write!(f, "generator spec declares no profiles"),
            SynthError::DeadDistribution { what } => {
                write!(f, "{what} has no positive weight")
            }
            SynthError::NegativeWeight { what, weight } => {
                write!(f, "{what} has negative weight {weight}")
            }
            SynthError::InvalidProbability { label, prob } => {
                write!(f, "label \"{label}\" has probability {prob} outside [0, 1]")
            }
            SynthError::EmptyLabelList { profile, field } => {
                write!(f, "profile {profile} lists no {field} labels")
            }
        }
    }
}

impl core::error::Error for SynthError {}

impl SynthSpec {
    pub fn validate(&self) -> Result<(), SynthError> {
        if self.version != SYNTH_FORMAT_VERSION {
            return Err(SynthError::UnsupportedVersion {
                found: self.version,
                supported: SYNTH_FORMAT_VERSION,
            });
        }
        if self.profiles.is_empty() {
            return Err(SynthError::NoProfiles);
        }
        for (i, profile) in self.profiles.iter().enumerate() {
            if profile.weight < 0.0 {
                return Err(SynthError::NegativeWeight {
                    what: format!("profile {i}"),
                    weight: profile.weight,
                });
            }
            let lists = [
                ("preprocessing_tools", &profile.preprocessing_tools),
                ("model_tools", &profile.model_tools),
                ("evaluation_metrics", &profile.evaluation_metrics),
            ];
            for (field, list) in lists {
                if list.is_empty() {
                    return Err(SynthError::EmptyLabelList { profile: i, field });
                }
                for lp in list.iter() {
                    if !(0.0..=1.0).contains(&lp.prob) {
                        return Err(SynthError::InvalidProbability {
                            label: lp.label.clone(),
                            prob: lp.prob,
                        });
                    }
                }
            }
            if profile.project_types.is_empty() {
                return Err(SynthError::EmptyLabelList {
                    profile: i,
                    field: "project_types",
                });
            }
            for lw in &profile.project_types {
                if lw.weight < 0.0 {
                    return Err(SynthError::NegativeWeight {
                        what: format!("profile {i} project_type \"{}\"", lw.label),
                        weight: lw.weight,
                    });
                }
            }
            if profile.project_types.iter().all(|lw| lw.weight <= 0.0) {
                return Err(SynthError::DeadDistribution {
                    what: format!("profile {i} project_types"),
                });
            }
        }
        if self.profiles.iter().all(|p| p.weight <= 0.0) {
            return Err(SynthError::DeadDistribution {
                what: String::from("profile weights"),
            });
        }
        Ok(())
    }
}

/// Bernoulli-samples one label list; an all-miss draw falls back to the
/// highest-probability label (first listed on ties) so records always
/// validate, without consuming extra randomness.
fn sample_labels(list: &[LabelProb], rng: &mut ChaCha8Rng) -> LabelSet {
    let mut set = LabelSet::new();
    for lp in list {
        if rng.gen_bool(lp.prob) {
            set.insert(normalize(&lp.label));
        }
    }
    if set.is_empty() {
        let best = list
            .iter()
            .reduce(|best, lp| if lp.prob > best.prob { lp } else { best })
            .expect("validated non-empty list");
        set.insert(normalize(&best.label));
    }
    set
}

fn normalize(label: &str) -> String {
    crate::record::normalize_label(label)
}

/// Draws `n` AI project records from `spec`, reproducibly per
/// `(spec, n, seed)`.
pub fn synth_dataset(
    spec: &SynthSpec,
    n: usize,
    seed: u64,
) -> Result<Vec<ProjectRecord>, SynthError> {
    spec.validate()?;

    let profile_weights =
        WeightedIndex::new(spec.profiles.iter().map(|p| p.weight)).map_err(|_| {
            SynthError::DeadDistribution {
                what: String::from("profile weights"),
            }
        })?;
    let project_type_draws: Vec<WeightedIndex<f64>> = spec
        .profiles
        .iter()
        .enumerate()
        .map(|(i, p)| {
            WeightedIndex::new(p.project_types.iter().map(|lw| lw.weight)).map_err(|_| {
                SynthError::DeadDistribution {
                    what: format!("profile {i} project_types"),
                }
            })
        })
        .collect::<Result<_, _>>()?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::with_capacity(n);
    for i in 0..n {
        let which = profile_weights.sample(&mut rng);
        let profile = &spec.profiles[which];
        let preprocessing_tools = sample_labels(&profile.preprocessing_tools, &mut rng);
        let model_tools = sample_labels(&profile.model_tools, &mut rng);
        let evaluation_metrics = sample_labels(&profile.evaluation_metrics, &mut rng);
        let project_type =
            normalize(&profile.project_types[project_type_draws[which].sample(&mut rng)].label);

        records.push(ProjectRecord {
            name: format!("synthetic project {i:04}"),
            description: format!("generated {} {} project", profile.nature, profile.data_type),
            project_category: ProjectCategory::Ai,
            data_nature: profile.nature,
            data_type: profile.data_type,
            preprocessing_tools,
            project_type,
            technique: "unspecified".to_string(),
            evaluation_metrics,
            model_tools,
        });
    }
    Ok(records)
}
