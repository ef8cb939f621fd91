//! Command-line surface.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};

use opsrec_core::{DataNature, DataType, ExtractStrategy, SplitRatio};

use crate::config::OutputFormat;

#[derive(Debug, Parser)]
#[command(
    name = "opsrec",
    version,
    about = "Recommends ML development tools and an MLOps toolchain from the nature and type of your data",
    after_help = "All randomness flows from --seed; identical inputs and seeds reproduce identical outputs."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Seed for splits, bootstrap resamples, and synthetic data.
    #[arg(long, global = true, value_name = "INT")]
    pub seed: Option<u64>,

    /// JSON config file; flags override its values.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Dataset file (.csv or .json).
    #[arg(long, global = true, value_name = "PATH")]
    pub data: Option<PathBuf>,

    /// Rule file.
    #[arg(long, global = true, value_name = "PATH")]
    pub rules: Option<PathBuf>,

    /// Tool catalogue file.
    #[arg(long, global = true, value_name = "PATH")]
    pub catalogue: Option<PathBuf>,

    /// Directory for persisted models and reports.
    #[arg(long, global = true, value_name = "DIR")]
    pub model_dir: Option<PathBuf>,

    /// Output format for reports and recommendations.
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,

    /// Train share of the split, as a fraction like 8/10 or 0.8.
    #[arg(long, global = true, value_name = "FRACTION")]
    pub ratio: Option<SplitRatio>,

    /// Neighbour count for the knn approach.
    #[arg(long, global = true, value_name = "INT")]
    pub k: Option<usize>,

    /// Tree count for the random forest.
    #[arg(long, global = true, value_name = "INT")]
    pub n_trees: Option<usize>,

    /// Depth limit for tree growth (default: unlimited).
    #[arg(long, global = true, value_name = "INT")]
    pub max_depth: Option<u32>,

    /// Smallest training group a split may create.
    #[arg(long, global = true, value_name = "INT")]
    pub min_leaf_size: Option<usize>,

    /// Rule-extraction strategy (union or majority).
    #[arg(long, global = true, value_name = "STRATEGY", value_parser = ExtractStrategy::from_str)]
    pub strategy: Option<ExtractStrategy>,
}

/// Which approach a command targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ApproachSel {
    #[value(name = "rule_based")]
    RuleBased,
    #[value(name = "decision_trees", alias = "decision_tree")]
    DecisionTrees,
    #[value(name = "random_forest")]
    RandomForest,
    #[value(name = "knn")]
    Knn,
    #[value(name = "all")]
    All,
}

impl ApproachSel {
    /// The approach names this selection expands to, in report order.
    pub fn selected(self) -> &'static [&'static str] {
        match self {
            ApproachSel::RuleBased => &["rule_based"],
            ApproachSel::DecisionTrees => &["decision_trees"],
            ApproachSel::RandomForest => &["random_forest"],
            ApproachSel::Knn => &["knn"],
            ApproachSel::All => &["rule_based", "decision_trees", "random_forest", "knn"],
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic dataset from a generator spec.
    Synth {
        /// Generator spec (JSON).
        #[arg(long, value_name = "PATH")]
        spec: PathBuf,
        /// Number of records to generate.
        #[arg(long, value_name = "COUNT")]
        n: usize,
        /// Output dataset path (.csv or .json).
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
    },
    /// Train the selected approaches on the seeded train split and persist
    /// them under the model directory.
    Train {
        #[arg(long, value_enum, default_value_t = ApproachSel::All)]
        approach: ApproachSel,
    },
    /// Evaluate the persisted approaches on the held-out test split.
    Evaluate,
    /// Recommend development tools and MLOps tools for a data context.
    Recommend {
        /// Data nature: structured, unstructured, or semi_structured.
        #[arg(long, value_name = "NATURE", value_parser = DataNature::from_str)]
        nature: DataNature,
        /// Data type: numerical, textual, image, or video.
        #[arg(long = "type", value_name = "TYPE", value_parser = DataType::from_str)]
        data_type: DataType,
        /// Approach to answer with (default: the best from the last
        /// evaluation, falling back to the rule file).
        #[arg(long, value_enum)]
        approach: Option<ApproachSel>,
    },
    /// Rule-file operations.
    Rules {
        #[command(subcommand)]
        command: RulesCommand,
    },
    /// Catalogue-file operations.
    Catalogue {
        #[command(subcommand)]
        command: CatalogueCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum RulesCommand {
    /// Derive one rule per observed (nature, type) pair from a dataset.
    Extract {
        /// Where to write the extracted rule file.
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum CatalogueCommand {
    /// Check a catalogue file for schema and uniqueness violations.
    Validate {
        /// Catalogue path (defaults to --catalogue).
        path: Option<PathBuf>,
    },
}
