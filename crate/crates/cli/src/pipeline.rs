//! Command implementations: each takes the resolved configuration, does
//! the work, prints to stdout in the configured format, and maps every
//! failure to a [`CliError`] with its exit code.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use opsrec_core::{
    compare_approaches, extract_rules, fit_forest, fit_knn, fit_tree, project_features, recommend,
    split_train_test, synth_dataset, DataContext, EvaluationReport, FeatureView, OutputLabels,
    PredictError, Predictor, ProjectRecord, RuleSet, SplitResult, TrainingMatrix, Vocabulary,
};

use crate::args::ApproachSel;
use crate::config::{OutputFormat, RunConfig};
use crate::error::CliError;
use crate::formats::{
    self, load_catalogue, load_model, load_rules, save_model, save_rules, ModelArtifact, ModelFile,
    TrainedOn, MODEL_FORMAT_VERSION,
};
use crate::report::{
    evaluation_csv, evaluation_text, recommendation_text, ApproachResult, EvaluationDocument,
};

const LEARNED_APPROACHES: [&str; 3] = ["decision_trees", "random_forest", "knn"];

/// A dataset loaded, filtered to AI projects, and split for training.
pub struct Prepared {
    pub records: Vec<ProjectRecord>,
    pub views: Vec<FeatureView>,
    pub split: SplitResult,
}

impl Prepared {
    pub fn train_views(&self) -> Vec<FeatureView> {
        self.split
            .train
            .iter()
            .map(|&i| self.views[i].clone())
            .collect()
    }

    pub fn test_views(&self) -> Vec<FeatureView> {
        self.split
            .test
            .iter()
            .map(|&i| self.views[i].clone())
            .collect()
    }
}

fn data_path(cfg: &RunConfig) -> Result<&Path, CliError> {
    cfg.data
        .as_deref()
        .ok_or_else(|| CliError::validation("no dataset given (use --data or the config file)"))
}

/// Loads the dataset, keeps the valid AI projects, and splits them with
/// the configured seed and ratio.
pub fn prepare(cfg: &RunConfig) -> Result<Prepared, CliError> {
    let path = data_path(cfg)?;
    let records = formats::read_records(path)?;
    let total = records.len();
    let records = opsrec_core::filter_ai(records);
    if records.is_empty() {
        return Err(CliError::validation(format!(
            "no AI projects after filtering ({total} records read from {})",
            path.display()
        )));
    }
    let views: Vec<FeatureView> = records.iter().map(project_features).collect();
    let split = split_train_test(records.len(), cfg.ratio, cfg.seed);
    Ok(Prepared {
        records,
        views,
        split,
    })
}

/// Predicts every context, scoring failures as empty label sets so one
/// unmatched pair cannot abort a whole evaluation. Returns the
/// predictions, the failure count, and the first failure message.
pub fn predict_all<P: Predictor + ?Sized>(
    predictor: &P,
    contexts: &[DataContext],
) -> (Vec<OutputLabels>, usize, Option<String>) {
    let mut failures = 0;
    let mut first_failure = None;
    let predicted = contexts
        .iter()
        .map(|ctx| match predictor.predict_labels(ctx) {
            Ok(labels) => labels,
            Err(err) => {
                failures += 1;
                if first_failure.is_none() {
                    first_failure = Some(err.to_string());
                }
                OutputLabels::default()
            }
        })
        .collect();
    (predicted, failures, first_failure)
}

fn print_json<T: Serialize>(value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::runtime(format!("serializing output: {e}")))?;
    println!("{text}");
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::runtime(format!("serializing {}: {e}", path.display())))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::io(path, &e))
}

fn rules_artifact_path(cfg: &RunConfig) -> PathBuf {
    cfg.rules
        .clone()
        .unwrap_or_else(|| cfg.model_dir.join("rule_based.json"))
}

fn model_artifact_path(cfg: &RunConfig, approach: &str) -> PathBuf {
    cfg.model_dir.join(format!("{approach}.json"))
}

fn evaluation_path(cfg: &RunConfig) -> PathBuf {
    cfg.model_dir.join("evaluation.json")
}

// ---------------------------------------------------------------------------
// synth

pub fn cmd_synth(cfg: &RunConfig, spec: &Path, n: usize, out: &Path) -> Result<(), CliError> {
    let spec = formats::load_synth_spec(spec)?;
    let records = synth_dataset(&spec, n, cfg.seed)
        .map_err(|e| CliError::validation(format!("generator spec: {e}")))?;
    formats::write_records(out, &records)?;
    match cfg.format {
        OutputFormat::Text => {
            println!("wrote {} records to {}", records.len(), out.display());
        }
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct SynthSummary<'a> {
                records: usize,
                seed: u64,
                out: &'a Path,
            }
            print_json(&SynthSummary {
                records: records.len(),
                seed: cfg.seed,
                out,
            })?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// train

#[derive(Debug, Serialize)]
struct TrainedArtifact {
    approach: String,
    path: PathBuf,
    train_f_measure: f64,
}

#[derive(Debug, Serialize)]
struct TrainSummary {
    seed: u64,
    ratio: String,
    n_records: usize,
    n_train: usize,
    n_test: usize,
    artifacts: Vec<TrainedArtifact>,
}

fn self_check(
    approach: &str,
    predictor: &dyn Predictor,
    train: &[FeatureView],
) -> Result<EvaluationReport, CliError> {
    let contexts: Vec<DataContext> = train.iter().map(|v| v.inputs).collect();
    let gold: Vec<OutputLabels> = train.iter().map(|v| v.outputs.clone()).collect();
    let (predicted, _, _) = predict_all(predictor, &contexts);
    EvaluationReport::from_pairs(approach, &gold, &predicted)
        .map_err(|e| CliError::runtime(format!("scoring {approach} self-check: {e}")))
}

pub fn cmd_train(cfg: &RunConfig, approach: ApproachSel) -> Result<(), CliError> {
    let prepared = prepare(cfg)?;
    let train = prepared.train_views();
    if train.is_empty() {
        return Err(CliError::validation(format!(
            "empty training split ({} records at ratio {})",
            prepared.records.len(),
            cfg.ratio
        )));
    }
    fs::create_dir_all(&cfg.model_dir).map_err(|e| CliError::io(&cfg.model_dir, &e))?;

    let trained_on = TrainedOn {
        n_records: prepared.records.len(),
        n_train: prepared.split.train.len(),
        n_test: prepared.split.test.len(),
    };
    let matrix = TrainingMatrix::from_views(&train, Vocabulary::full())
        .map_err(|e| CliError::validation(format!("encoding training data: {e}")))?;
    let mut artifacts = Vec::new();

    for &name in approach.selected() {
        if name == "rule_based" {
            let rules = extract_rules(&train, cfg.strategy)
                .map_err(|e| CliError::validation(format!("extracting rules: {e}")))?;
            let path = model_artifact_path(cfg, name);
            save_rules(&path, &rules)?;
            let report = self_check(name, &rules, &train)?;
            artifacts.push(TrainedArtifact {
                approach: name.into(),
                path,
                train_f_measure: report.f_measure.value,
            });
        } else {
            let artifact = match name {
                "decision_trees" => ModelArtifact::DecisionTrees(
                    fit_tree(&matrix, cfg.tree_params())
                        .map_err(|e| CliError::validation(format!("training {name}: {e}")))?,
                ),
                "random_forest" => ModelArtifact::RandomForest(
                    fit_forest(&matrix, cfg.forest_params(), cfg.seed)
                        .map_err(|e| CliError::validation(format!("training {name}: {e}")))?,
                ),
                _ => ModelArtifact::Knn(
                    fit_knn(&matrix, cfg.k)
                        .map_err(|e| CliError::validation(format!("training {name}: {e}")))?,
                ),
            };
            let check = self_check(name, artifact.predictor(), &train)?;
            let f = check.f_measure.value;
            let file = ModelFile {
                format_version: MODEL_FORMAT_VERSION,
                seed: cfg.seed,
                ratio: cfg.ratio,
                trained_on,
                self_check: check,
                artifact,
            };
            let path = model_artifact_path(cfg, name);
            save_model(&path, &file)?;
            artifacts.push(TrainedArtifact {
                approach: name.into(),
                path,
                train_f_measure: f,
            });
        }
    }

    match cfg.format {
        OutputFormat::Text => {
            for artifact in &artifacts {
                println!(
                    "trained {} (train f-measure {:.6}) -> {}",
                    artifact.approach,
                    artifact.train_f_measure,
                    artifact.path.display()
                );
            }
            println!(
                "split: {} of {} records trained, {} held out (seed {}, ratio {})",
                trained_on.n_train, trained_on.n_records, trained_on.n_test, cfg.seed, cfg.ratio
            );
        }
        OutputFormat::Json => print_json(&TrainSummary {
            seed: cfg.seed,
            ratio: cfg.ratio.to_string(),
            n_records: trained_on.n_records,
            n_train: trained_on.n_train,
            n_test: trained_on.n_test,
            artifacts,
        })?,
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// evaluate

fn check_model_matches(
    cfg: &RunConfig,
    n_records: usize,
    file: &ModelFile,
    path: &Path,
) -> Result<(), CliError> {
    if file.seed != cfg.seed || file.ratio != cfg.ratio || file.trained_on.n_records != n_records {
        return Err(CliError::validation(format!(
            "model {} was trained with seed {} ratio {} on {} records, but this run uses seed {} ratio {} on {} records; retrain or adjust the flags",
            path.display(),
            file.seed,
            file.ratio,
            file.trained_on.n_records,
            cfg.seed,
            cfg.ratio,
            n_records
        )));
    }
    Ok(())
}

fn missing_artifact(path: &Path) -> CliError {
    CliError::runtime(format!(
        "missing model artifact {} (run `opsrec train` first)",
        path.display()
    ))
}

pub fn cmd_evaluate(cfg: &RunConfig) -> Result<(), CliError> {
    let prepared = prepare(cfg)?;
    let test = prepared.test_views();
    if test.is_empty() {
        return Err(CliError::validation(format!(
            "empty test set ({} records at ratio {})",
            prepared.records.len(),
            cfg.ratio
        )));
    }
    let contexts: Vec<DataContext> = test.iter().map(|v| v.inputs).collect();
    let gold: Vec<OutputLabels> = test.iter().map(|v| v.outputs.clone()).collect();

    let mut reports = Vec::new();
    let mut failures = std::collections::BTreeMap::new();

    let rules_path = rules_artifact_path(cfg);
    if !rules_path.exists() {
        return Err(missing_artifact(&rules_path));
    }
    let rules = load_rules(&rules_path)?;
    let (predicted, failed, first) = predict_all(&rules, &contexts);
    reports.push(
        EvaluationReport::from_pairs("rule_based", &gold, &predicted)
            .map_err(|e| CliError::runtime(format!("scoring rule_based: {e}")))?,
    );
    failures.insert(String::from("rule_based"), (failed, first));

    for name in LEARNED_APPROACHES {
        let path = model_artifact_path(cfg, name);
        if !path.exists() {
            return Err(missing_artifact(&path));
        }
        let file = load_model(&path)?;
        if file.artifact.approach() != name {
            return Err(CliError::validation(format!(
                "model file {} holds a {} model, expected {name}",
                path.display(),
                file.artifact.approach()
            )));
        }
        check_model_matches(cfg, prepared.records.len(), &file, &path)?;
        let (predicted, failed, first) = predict_all(file.artifact.predictor(), &contexts);
        reports.push(
            EvaluationReport::from_pairs(name, &gold, &predicted)
                .map_err(|e| CliError::runtime(format!("scoring {name}: {e}")))?,
        );
        failures.insert(String::from(name), (failed, first));
    }

    let comparison = compare_approaches(reports)
        .map_err(|e| CliError::runtime(format!("comparing approaches: {e}")))?;
    let approaches = comparison
        .ranked
        .into_iter()
        .map(|report| {
            let (prediction_failures, first_failure) =
                failures.remove(&report.approach).unwrap_or((0, None));
            ApproachResult {
                prediction_failures,
                first_failure,
                report,
            }
        })
        .collect();
    let document = EvaluationDocument {
        seed: cfg.seed,
        ratio: cfg.ratio,
        n_records: prepared.records.len(),
        n_train: prepared.split.train.len(),
        n_test: prepared.split.test.len(),
        best: comparison.best,
        approaches,
    };

    fs::create_dir_all(&cfg.model_dir).map_err(|e| CliError::io(&cfg.model_dir, &e))?;
    write_json(&evaluation_path(cfg), &document)?;
    let csv_path = cfg.model_dir.join("evaluation.csv");
    fs::write(&csv_path, evaluation_csv(&document)).map_err(|e| CliError::io(&csv_path, &e))?;

    match cfg.format {
        OutputFormat::Text => print!("{}", evaluation_text(&document)),
        OutputFormat::Json => print_json(&document)?,
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// recommend

/// Keeps whichever artifact backs the chosen approach alive while the
/// prediction borrows it.
enum LoadedPredictor {
    Rules(RuleSet),
    Model(Box<ModelFile>),
}

impl LoadedPredictor {
    fn predictor(&self) -> &dyn Predictor {
        match self {
            LoadedPredictor::Rules(rules) => rules,
            LoadedPredictor::Model(file) => file.artifact.predictor(),
        }
    }
}

fn resolve_approach(cfg: &RunConfig, approach: Option<ApproachSel>) -> Result<String, CliError> {
    match approach {
        Some(ApproachSel::All) => Err(CliError::validation(
            "recommend needs a single approach, not \"all\"",
        )),
        Some(sel) => Ok(sel.selected()[0].to_string()),
        None => {
            let path = evaluation_path(cfg);
            if path.exists() {
                let text = fs::read_to_string(&path).map_err(|e| CliError::io(&path, &e))?;
                let doc: EvaluationDocument = serde_json::from_str(&text).map_err(|e| {
                    CliError::validation(format!("evaluation summary {}: {e}", path.display()))
                })?;
                Ok(doc.best)
            } else {
                Ok(String::from("rule_based"))
            }
        }
    }
}

fn load_predictor(cfg: &RunConfig, approach: &str) -> Result<LoadedPredictor, CliError> {
    if approach == "rule_based" {
        let path = rules_artifact_path(cfg);
        if !path.exists() {
            return Err(CliError::runtime(format!(
                "missing rule file {} (run `opsrec train` or `opsrec rules extract`, or pass --rules)",
                path.display()
            )));
        }
        return Ok(LoadedPredictor::Rules(load_rules(&path)?));
    }
    let path = model_artifact_path(cfg, approach);
    if !path.exists() {
        return Err(missing_artifact(&path));
    }
    let file = load_model(&path)?;
    if file.artifact.approach() != approach {
        return Err(CliError::validation(format!(
            "model file {} holds a {} model, expected {approach}",
            path.display(),
            file.artifact.approach()
        )));
    }
    Ok(LoadedPredictor::Model(Box::new(file)))
}

fn explain_predict_error(err: PredictError, approach: &str) -> CliError {
    let hint = match &err {
        PredictError::NoMatch { .. } => {
            "; add a wildcard rule or extract rules from data covering this pair"
        }
        _ => "; retrain on data covering this pair",
    };
    CliError::runtime(format!("{approach}: {err}{hint}"))
}

pub fn cmd_recommend(
    cfg: &RunConfig,
    ctx: DataContext,
    approach: Option<ApproachSel>,
) -> Result<(), CliError> {
    let catalogue_path = cfg.catalogue.as_deref().ok_or_else(|| {
        CliError::validation("no catalogue given (use --catalogue or the config file)")
    })?;
    let catalogue = load_catalogue(catalogue_path)?;
    if catalogue.is_empty() {
        eprintln!(
            "warning: catalogue {} lists no tools; the recommendation will name development tools only",
            catalogue_path.display()
        );
    }
    let approach = resolve_approach(cfg, approach)?;
    let loaded = load_predictor(cfg, &approach)?;
    let recommendation = recommend(&ctx, loaded.predictor(), &catalogue)
        .map_err(|e| explain_predict_error(e, &approach))?;
    match cfg.format {
        OutputFormat::Text => print!("{}", recommendation_text(&recommendation)),
        OutputFormat::Json => print_json(&recommendation)?,
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// rules extract

pub fn cmd_rules_extract(cfg: &RunConfig, out: &Path) -> Result<(), CliError> {
    let prepared = prepare(cfg)?;
    let rules = extract_rules(&prepared.views, cfg.strategy)
        .map_err(|e| CliError::validation(format!("extracting rules: {e}")))?;
    save_rules(out, &rules)?;
    match cfg.format {
        OutputFormat::Text => {
            println!(
                "extracted {} rules ({} strategy) to {}",
                rules.rules.len(),
                cfg.strategy,
                out.display()
            );
        }
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct ExtractSummary<'a> {
                rules: usize,
                strategy: String,
                out: &'a Path,
            }
            print_json(&ExtractSummary {
                rules: rules.rules.len(),
                strategy: cfg.strategy.to_string(),
                out,
            })?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// catalogue validate

pub fn cmd_catalogue_validate(cfg: &RunConfig, path: Option<&Path>) -> Result<(), CliError> {
    let path = path.or(cfg.catalogue.as_deref()).ok_or_else(|| {
        CliError::validation("no catalogue given (pass a path or use --catalogue)")
    })?;
    let catalogue = load_catalogue(path)?;
    if catalogue.is_empty() {
        eprintln!("warning: catalogue {} lists no tools", path.display());
    }
    match cfg.format {
        OutputFormat::Text => {
            println!(
                "catalogue ok: {} tools ({})",
                catalogue.tools.len(),
                path.display()
            );
        }
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct ValidateSummary<'a> {
                status: &'static str,
                tools: usize,
                path: &'a Path,
            }
            print_json(&ValidateSummary {
                status: "ok",
                tools: catalogue.tools.len(),
                path,
            })?;
        }
    }
    Ok(())
}
