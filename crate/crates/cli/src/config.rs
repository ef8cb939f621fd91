//! Run configuration with flags > config file > defaults precedence.
//!
//! Every command resolves one [`RunConfig`] up front and prints it as an
//! effective-config banner on stderr, so any run can be reproduced from
//! its log output alone.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use opsrec_core::{ExtractStrategy, SplitRatio};

use crate::args::Cli;
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Text => "text",
            OutputFormat::Json => "json",
        })
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub seed: u64,
    pub ratio: SplitRatio,
    pub k: usize,
    pub n_trees: usize,
    pub max_depth: Option<u32>,
    pub min_leaf_size: usize,
    pub strategy: ExtractStrategy,
    pub format: OutputFormat,
    pub data: Option<PathBuf>,
    pub rules: Option<PathBuf>,
    pub catalogue: Option<PathBuf>,
    pub model_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 42,
            ratio: SplitRatio::EIGHT_OF_TEN,
            k: 5,
            n_trees: 100,
            max_depth: None,
            min_leaf_size: 1,
            strategy: ExtractStrategy::Union,
            format: OutputFormat::Text,
            data: None,
            rules: None,
            catalogue: None,
            model_dir: PathBuf::from("models"),
        }
    }
}

/// The JSON config-file schema: every field optional, unknown keys
/// rejected so typos fail loudly.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub seed: Option<u64>,
    pub ratio: Option<String>,
    pub k: Option<usize>,
    pub n_trees: Option<usize>,
    pub max_depth: Option<u32>,
    pub min_leaf_size: Option<usize>,
    pub strategy: Option<String>,
    pub format: Option<String>,
    pub data: Option<PathBuf>,
    pub rules: Option<PathBuf>,
    pub catalogue: Option<PathBuf>,
    pub model_dir: Option<PathBuf>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, &e))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::validation(format!("config file {}: {e}", path.display())))
    }
}

impl RunConfig {
    /// Applies precedence: defaults, then the config file (if any), then
    /// command-line flags.
    pub fn resolve(cli: &Cli) -> Result<Self, CliError> {
        let mut cfg = RunConfig::default();

        if let Some(path) = &cli.config {
            let file = ConfigFile::load(path)?;
            let context = |e: &dyn fmt::Display| {
                CliError::validation(format!("config file {}: {e}", path.display()))
            };
            if let Some(seed) = file.seed {
                cfg.seed = seed;
            }
            if let Some(ratio) = &file.ratio {
                cfg.ratio = ratio
                    .parse()
                    .map_err(|e: opsrec_core::RatioError| context(&e))?;
            }
            if let Some(k) = file.k {
                cfg.k = k;
            }
            if let Some(n_trees) = file.n_trees {
                cfg.n_trees = n_trees;
            }
            if file.max_depth.is_some() {
                cfg.max_depth = file.max_depth;
            }
            if let Some(min_leaf_size) = file.min_leaf_size {
                cfg.min_leaf_size = min_leaf_size;
            }
            if let Some(strategy) = &file.strategy {
                cfg.strategy = strategy.parse().map_err(|e: String| context(&e))?;
            }
            if let Some(format) = &file.format {
                cfg.format = match format.as_str() {
                    "text" => OutputFormat::Text,
                    "json" => OutputFormat::Json,
                    other => {
                        return Err(context(&format!(
                            "unknown format \"{other}\", allowed: json|text"
                        )))
                    }
                };
            }
            if file.data.is_some() {
                cfg.data = file.data;
            }
            if file.rules.is_some() {
                cfg.rules = file.rules;
            }
            if file.catalogue.is_some() {
                cfg.catalogue = file.catalogue;
            }
            if let Some(model_dir) = file.model_dir {
                cfg.model_dir = model_dir;
            }
        }

        if let Some(seed) = cli.seed {
            cfg.seed = seed;
        }
        if let Some(ratio) = cli.ratio {
            cfg.ratio = ratio;
        }
        if let Some(k) = cli.k {
            cfg.k = k;
        }
        if let Some(n_trees) = cli.n_trees {
            cfg.n_trees = n_trees;
        }
        if cli.max_depth.is_some() {
            cfg.max_depth = cli.max_depth;
        }
        if let Some(min_leaf_size) = cli.min_leaf_size {
            cfg.min_leaf_size = min_leaf_size;
        }
        if let Some(strategy) = cli.strategy {
            cfg.strategy = strategy;
        }
        if let Some(format) = cli.format {
            cfg.format = format;
        }
        if cli.data.is_some() {
            cfg.data = cli.data.clone();
        }
        if cli.rules.is_some() {
            cfg.rules = cli.rules.clone();
        }
        if cli.catalogue.is_some() {
            cfg.catalogue = cli.catalogue.clone();
        }
        if let Some(model_dir) = &cli.model_dir {
            cfg.model_dir = model_dir.clone();
        }

        Ok(cfg)
    }

    /// One-line effective configuration, printed to stderr by every run.
    pub fn banner(&self) -> String {
        let join = |p: &Option<PathBuf>| {
            p.as_ref()
                .map(|p| p.display().to_string())
                .unwrap_or_else(|| String::from("-"))
        };
        format!(
            "config: seed={} ratio={} k={} n_trees={} max_depth={} min_leaf_size={} strategy={} format={} data={} rules={} catalogue={} model_dir={}",
            self.seed,
            self.ratio,
            self.k,
            self.n_trees,
            self.max_depth.map_or(String::from("unlimited"), |d| d.to_string()),
            self.min_leaf_size,
            self.strategy,
            self.format,
            join(&self.data),
            join(&self.rules),
            join(&self.catalogue),
            self.model_dir.display(),
        )
    }

    pub fn tree_params(&self) -> opsrec_core::TreeParams {
        opsrec_core::TreeParams {
            max_depth: self.max_depth,
            min_leaf_size: self.min_leaf_size,
        }
    }

    pub fn forest_params(&self) -> opsrec_core::ForestParams {
        opsrec_core::ForestParams {
            n_trees: self.n_trees,
            bootstrap: true,
            tree: self.tree_params(),
        }
    }
}
