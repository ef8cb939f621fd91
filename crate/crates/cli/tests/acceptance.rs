//! Acceptance gate: eight checks covering metric arithmetic, split
//! exactness, tree-vs-oracle equivalence, rule-extraction guarantees, the
//! qualitative rules-vs-forest profile, persistence determinism, catalogue
//! soundness, and metric conservation. Each check prints one PASS line
//! with its runtime and asserts the budget it must stay inside.

use std::collections::HashMap;
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use opsrec::formats::{load_model, load_synth_spec};
use opsrec_core::{
    extract_rules, f_measure, fit_forest, fit_knn, fit_tree, match_mlops_tools, recommend,
    score_predictions, split_train_test, synth_dataset, DataContext, DataNature, DataType,
    EvaluationReport, ExtractStrategy, FeatureView, ForestParams, LabelSet, MlopsPhase,
    OutputField, OutputLabels, PredictError, Predictor, SplitRatio, ToolCatalogue, ToolEntry,
    TrainingMatrix, TreeParams, Vocabulary,
};

const NATURES: [DataNature; 3] = [
    DataNature::SemiStructured,
    DataNature::Structured,
    DataNature::Unstructured,
];
const TYPES: [DataType; 4] = [
    DataType::Image,
    DataType::Numerical,
    DataType::Textual,
    DataType::Video,
];

fn finish(name: &str, detail: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    println!(
        "PASS {name}: {detail} ({:.2?} < {:.0?} budget)",
        elapsed, budget
    );
    assert!(
        elapsed < budget,
        "{name} took {elapsed:?}, budget {budget:?}"
    );
}

// ---------------------------------------------------------------------------
// 1. F-measure arithmetic against the four pinned reference rows.

#[test]
fn c1_f_measure_reproduces_reference_rows() {
    let started = Instant::now();
    let rows = [
        (0.683871, 0.582418, 0.629080),
        (0.705521, 0.631868, 0.666667),
        (0.674556, 0.626374, 0.649573),
        (0.498423, 0.868132, 0.633267),
    ];
    for (p, r, expected) in rows {
        let f = f_measure(p, r);
        assert!(
            (f - expected).abs() < 1e-3,
            "f({p}, {r}) = {f}, expected {expected} within 1e-3"
        );
    }
    finish(
        "check 1",
        "f-measure matches all four pinned (precision, recall, F) rows within 1e-3",
        started,
        Duration::from_millis(1),
    );
}

// ---------------------------------------------------------------------------
// 2. Split exactness and partition/determinism invariants.

#[test]
fn c2_split_is_exact_and_deterministic() {
    let started = Instant::now();
    let ratio = SplitRatio::EIGHT_OF_TEN;

    for seed in 0..50 {
        let split = split_train_test(10, ratio, seed);
        assert_eq!(split.train.len(), 8, "seed {seed}");
        assert_eq!(split.test.len(), 2, "seed {seed}");
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0xC2);
    for _ in 0..1_000 {
        let n = rng.gen_range(0..500);
        let seed = rng.gen::<u64>();
        let split = split_train_test(n, ratio, seed);

        let expected_train = (n as u128 * 8 / 10) as usize;
        assert_eq!(split.train.len(), expected_train, "n={n} seed={seed}");
        assert_eq!(split.test.len(), n - expected_train);

        let mut all: Vec<usize> = split
            .train
            .iter()
            .chain(split.test.iter())
            .copied()
            .collect();
        all.sort_unstable();
        assert_eq!(all, (0..n).collect::<Vec<_>>(), "partition of 0..{n}");

        assert_eq!(split, split_train_test(n, ratio, seed), "determinism");
    }
    finish(
        "check 2",
        "10 records split 8/2 for 50 seeds; partition and determinism hold for 1000 random (n, seed)",
        started,
        Duration::from_secs(1),
    );
}

// ---------------------------------------------------------------------------
// 3. Fully grown tree equals an independent group-by oracle.

/// Brute-force readout over one group's gold rows, written independently of
/// the library: count with a HashMap, keep labels on strict majority, fall
/// back to the most frequent (lexicographically first on ties).
fn oracle_set(rows: &[&OutputLabels], field: OutputField) -> LabelSet {
    let mut counts: HashMap<String, usize> = HashMap::new();
    for row in rows {
        for label in row.field_labels(field) {
            *counts.entry(label).or_insert(0) += 1;
        }
    }
    if counts.is_empty() {
        return LabelSet::new();
    }
    let majority: LabelSet = counts
        .iter()
        .filter(|(_, &c)| 2 * c > rows.len())
        .map(|(label, _)| label.clone())
        .collect();
    if !majority.is_empty() {
        return majority;
    }
    let mut ranked: Vec<(&String, &usize)> = counts.iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(a.1).then_with(|| a.0.cmp(b.0)));
    [ranked[0].0.clone()].into_iter().collect()
}

fn oracle_prediction(rows: &[&OutputLabels]) -> OutputLabels {
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for row in rows {
        *counts.entry(row.project_type.as_str()).or_insert(0) += 1;
    }
    let mut ranked: Vec<(&&str, &usize)> = counts.iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(a.1).then_with(|| a.0.cmp(b.0)));
    OutputLabels {
        preprocessing_tools: oracle_set(rows, OutputField::PreprocessingTools),
        model_tools: oracle_set(rows, OutputField::ModelTools),
        project_type: ranked
            .first()
            .map(|(t, _)| t.to_string())
            .unwrap_or_default(),
        evaluation_metrics: oracle_set(rows, OutputField::EvaluationMetrics),
    }
}

fn random_labels(rng: &mut ChaCha8Rng, project_types: &[&str]) -> OutputLabels {
    let subset = |rng: &mut ChaCha8Rng, pool: &[&str]| -> LabelSet {
        let mut set = LabelSet::new();
        for label in pool {
            if rng.gen_bool(0.5) {
                set.insert((*label).to_string());
            }
        }
        if set.is_empty() {
            set.insert(pool[rng.gen_range(0..pool.len())].to_string());
        }
        set
    };
    OutputLabels {
        preprocessing_tools: subset(rng, &["p0", "p1", "p2", "p3"]),
        model_tools: subset(rng, &["m0", "m1", "m2", "m3"]),
        project_type: project_types[rng.gen_range(0..project_types.len())].to_string(),
        evaluation_metrics: subset(rng, &["e0", "e1", "e2"]),
    }
}

fn random_views(rng: &mut ChaCha8Rng, max_n: usize, project_types: &[&str]) -> Vec<FeatureView> {
    let n = rng.gen_range(1..=max_n);
    (0..n)
        .map(|_| FeatureView {
            inputs: DataContext {
                nature: NATURES[rng.gen_range(0..NATURES.len())],
                data_type: TYPES[rng.gen_range(0..TYPES.len())],
            },
            outputs: random_labels(rng, project_types),
        })
        .collect()
}

#[test]
fn c3_fully_grown_tree_matches_group_by_oracle() {
    let started = Instant::now();
    for case in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(0xC3_000 + case);
        let views = random_views(
            &mut rng,
            60,
            &["classification", "regression", "clustering"],
        );
        let matrix = TrainingMatrix::from_views(&views, Vocabulary::full()).unwrap();
        let tree = fit_tree(&matrix, TreeParams::default()).unwrap();

        let mut groups: HashMap<DataContext, Vec<&OutputLabels>> = HashMap::new();
        for view in &views {
            groups.entry(view.inputs).or_default().push(&view.outputs);
        }
        for (ctx, rows) in &groups {
            let predicted = tree.predict_labels(ctx).unwrap();
            let expected = oracle_prediction(rows);
            assert_eq!(
                predicted,
                expected,
                "case {case}: tree disagrees with oracle on {ctx:?} ({} rows)",
                rows.len()
            );
        }
    }
    finish(
        "check 3",
        "fully grown tree equals the brute-force group majority oracle on 200 datasets (n <= 60)",
        started,
        Duration::from_secs(10),
    );
}

// ---------------------------------------------------------------------------
// 4. Union rules: recall 1.0 on extraction data; majority never less precise.

#[test]
fn c4_union_rules_have_exact_recall_majority_at_least_as_precise() {
    let started = Instant::now();
    for case in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(0xC4_000 + case);
        // One project type per (nature, type) pair: the single-valued field
        // is read out modally, so a mixed pair would cap union recall
        // below 1.0 by construction.
        let pair_types: HashMap<(DataNature, DataType), &str> = NATURES
            .iter()
            .flat_map(|&n| TYPES.iter().map(move |&t| (n, t)))
            .map(|pair| {
                let choice = ["classification", "regression", "clustering"][rng.gen_range(0..3)];
                (pair, choice)
            })
            .collect();
        let mut views = random_views(&mut rng, 40, &["placeholder"]);
        for view in &mut views {
            view.outputs.project_type =
                pair_types[&(view.inputs.nature, view.inputs.data_type)].to_string();
        }

        let gold: Vec<OutputLabels> = views.iter().map(|v| v.outputs.clone()).collect();
        let mut reports = Vec::new();
        for strategy in [ExtractStrategy::Union, ExtractStrategy::Majority] {
            let rules = extract_rules(&views, strategy).unwrap();
            let predicted: Vec<OutputLabels> = views
                .iter()
                .map(|v| rules.predict_labels(&v.inputs).unwrap())
                .collect();
            reports.push(EvaluationReport::from_pairs("rules", &gold, &predicted).unwrap());
        }

        assert_eq!(
            reports[0].recall.value, 1.0,
            "case {case}: union recall must be exactly 1.0 on its own extraction data"
        );
        assert!(
            reports[1].precision.value >= reports[0].precision.value,
            "case {case}: majority precision {} < union precision {}",
            reports[1].precision.value,
            reports[0].precision.value
        );
    }
    finish(
        "check 4",
        "union recall = 1.0 exactly and majority precision >= union precision on 100 datasets",
        started,
        Duration::from_secs(10),
    );
}

// ---------------------------------------------------------------------------
// 5. Qualitative profile on the shipped noisy generator spec: rules trade
//    precision for recall, the forest stays balanced.

#[test]
fn c5_noisy_data_shows_rules_recall_skew_and_balanced_forest() {
    let started = Instant::now();
    let spec_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("assets/synth_spec_noisy.json");
    let spec = load_synth_spec(&spec_path).unwrap();

    let mut passes = 0;
    let mut outcomes = Vec::new();
    for seed in 0..20u64 {
        let records = synth_dataset(&spec, 200, seed).unwrap();
        let views: Vec<FeatureView> = records.iter().map(opsrec_core::project_features).collect();
        let split = split_train_test(views.len(), SplitRatio::EIGHT_OF_TEN, seed);
        let train: Vec<FeatureView> = split.train.iter().map(|&i| views[i].clone()).collect();
        let test: Vec<FeatureView> = split.test.iter().map(|&i| views[i].clone()).collect();
        let gold: Vec<OutputLabels> = test.iter().map(|v| v.outputs.clone()).collect();

        let rules = extract_rules(&train, ExtractStrategy::Union).unwrap();
        let matrix = TrainingMatrix::from_views(&train, Vocabulary::full()).unwrap();
        let forest = fit_forest(&matrix, ForestParams::default(), seed).unwrap();

        let score = |predictor: &dyn Predictor| -> EvaluationReport {
            let predicted: Vec<OutputLabels> = test
                .iter()
                .map(|v| predictor.predict_labels(&v.inputs).unwrap_or_default())
                .collect();
            EvaluationReport::from_pairs(predictor.approach_name(), &gold, &predicted).unwrap()
        };
        let rule_report = score(&rules);
        let forest_report = score(&forest);

        let rules_skew = rule_report.recall.value - rule_report.precision.value;
        let forest_gap = (forest_report.precision.value - forest_report.recall.value).abs();
        let ok = rules_skew >= 0.1 && forest_gap <= 0.15;
        if ok {
            passes += 1;
        }
        outcomes.push(format!(
            "seed {seed}: rules r-p = {rules_skew:.3}, forest |p-r| = {forest_gap:.3}{}",
            if ok { "" } else { "  <- miss" }
        ));
    }
    assert!(
        passes >= 16,
        "only {passes}/20 seeds matched the expected profile:\n{}",
        outcomes.join("\n")
    );
    finish(
        "check 5",
        &format!(
            "rules recall-precision >= 0.1 and forest |p-r| <= 0.15 on {passes}/20 seeds (need 16)"
        ),
        started,
        Duration::from_secs(60),
    );
}

// ---------------------------------------------------------------------------
// 6. Persistence determinism through the real binary.

fn run_cli(args: &[&str]) -> std::process::Output {
    let out = Command::new(env!("CARGO_BIN_EXE_opsrec"))
        .args(args)
        .output()
        .expect("binary should run");
    assert!(
        out.status.success(),
        "opsrec {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

#[test]
fn c6_saved_models_are_byte_stable_and_reproduce_predictions() {
    let started = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let spec = Path::new(env!("CARGO_MANIFEST_DIR")).join("assets/synth_spec_noisy.json");
    let catalogue = Path::new(env!("CARGO_MANIFEST_DIR")).join("assets/sample_catalogue.json");
    let data = dir.path().join("data.json");

    run_cli(&[
        "synth",
        "--spec",
        spec.to_str().unwrap(),
        "--n",
        "60",
        "--seed",
        "11",
        "--out",
        data.to_str().unwrap(),
    ]);

    let m1 = dir.path().join("m1");
    let m2 = dir.path().join("m2");
    for model_dir in [&m1, &m2] {
        run_cli(&[
            "train",
            "--data",
            data.to_str().unwrap(),
            "--seed",
            "11",
            "--model-dir",
            model_dir.to_str().unwrap(),
        ]);
    }
    for artifact in ["rule_based", "decision_trees", "random_forest", "knn"] {
        let a = fs::read(m1.join(format!("{artifact}.json"))).unwrap();
        let b = fs::read(m2.join(format!("{artifact}.json"))).unwrap();
        assert_eq!(a, b, "{artifact}.json differs between identical runs");
    }

    // The same models fit in-process must predict exactly what the
    // saved-then-loaded artifacts predict, which in turn must equal what
    // the recommend command prints.
    let records = opsrec::formats::read_records(&data).unwrap();
    let records = opsrec_core::filter_ai(records);
    let views: Vec<FeatureView> = records.iter().map(opsrec_core::project_features).collect();
    let split = split_train_test(views.len(), SplitRatio::EIGHT_OF_TEN, 11);
    let train: Vec<FeatureView> = split.train.iter().map(|&i| views[i].clone()).collect();
    let matrix = TrainingMatrix::from_views(&train, Vocabulary::full()).unwrap();
    let ctx = DataContext {
        nature: DataNature::Unstructured,
        data_type: DataType::Image,
    };

    let in_memory: Vec<(&str, OutputLabels)> = vec![
        (
            "decision_trees",
            fit_tree(&matrix, TreeParams::default())
                .unwrap()
                .predict_labels(&ctx)
                .unwrap(),
        ),
        (
            "random_forest",
            fit_forest(&matrix, ForestParams::default(), 11)
                .unwrap()
                .predict_labels(&ctx)
                .unwrap(),
        ),
        (
            "knn",
            fit_knn(&matrix, 5).unwrap().predict_labels(&ctx).unwrap(),
        ),
    ];
    for (approach, expected) in &in_memory {
        let loaded = load_model(&m1.join(format!("{approach}.json"))).unwrap();
        let reloaded = loaded.artifact.predictor().predict_labels(&ctx).unwrap();
        assert_eq!(
            &reloaded, expected,
            "{approach}: load changed the prediction"
        );

        let out = run_cli(&[
            "recommend",
            "--nature",
            "unstructured",
            "--type",
            "image",
            "--model-dir",
            m1.to_str().unwrap(),
            "--catalogue",
            catalogue.to_str().unwrap(),
            "--approach",
            approach,
            "--format",
            "json",
        ]);
        let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(
            doc["predicted"],
            serde_json::to_value(expected).unwrap(),
            "{approach}: recommend output differs from the in-memory prediction"
        );
    }
    finish(
        "check 6",
        "train runs are byte-identical; save -> load -> recommend reproduces in-memory predictions",
        started,
        Duration::from_secs(5),
    );
}

// ---------------------------------------------------------------------------
// 7. Catalogue matching soundness and exact accounting.

struct Fixed(OutputLabels);

impl Predictor for Fixed {
    fn approach_name(&self) -> &'static str {
        "fixed"
    }
    fn predict_labels(&self, _ctx: &DataContext) -> Result<OutputLabels, PredictError> {
        Ok(self.0.clone())
    }
}

#[test]
fn c7_catalogue_matching_is_sound_with_exact_accounting() {
    let started = Instant::now();
    let tool_pool: Vec<String> = (0..12).map(|i| format!("tool{i:02}")).collect();

    for case in 0..500u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(0xC7_000 + case);
        let subset = |rng: &mut ChaCha8Rng, p: f64| -> LabelSet {
            tool_pool
                .iter()
                .filter(|_| rng.gen_bool(p))
                .cloned()
                .collect()
        };
        let predicted = OutputLabels {
            preprocessing_tools: subset(&mut rng, 0.3),
            model_tools: subset(&mut rng, 0.3),
            project_type: String::from("classification"),
            evaluation_metrics: [String::from("accuracy")].into_iter().collect(),
        };
        let entries = (0..rng.gen_range(0..8))
            .map(|i| ToolEntry {
                name: format!("mlops{i}"),
                phases: [MlopsPhase::ALL[rng.gen_range(0..6)]].into_iter().collect(),
                integrates_with: subset(&mut rng, 0.25),
            })
            .collect();
        let catalogue = ToolCatalogue::new(entries);
        catalogue.validate().unwrap();

        let development: LabelSet = predicted.development_tools();
        let matched = match_mlops_tools(&predicted, &catalogue);
        for m in &matched {
            assert!(
                !m.matched_via.is_empty(),
                "case {case}: empty justification"
            );
            assert!(
                m.matched_via.is_subset(&m.tool.integrates_with),
                "case {case}: justification not in the integration list"
            );
            assert!(
                m.matched_via.is_subset(&development),
                "case {case}: justification not among predicted tools"
            );
        }

        let ctx = DataContext {
            nature: DataNature::Unstructured,
            data_type: DataType::Image,
        };
        let rec = recommend(&ctx, &Fixed(predicted), &catalogue).unwrap();
        let mut accounted: LabelSet = rec.uncovered.clone();
        for m in &rec.mlops_tools {
            accounted.extend(m.matched_via.iter().cloned());
        }
        assert_eq!(
            accounted, development,
            "case {case}: uncovered + matched_via must account for every predicted tool"
        );
    }
    finish(
        "check 7",
        "500 random catalogues: every match is integration-backed and tool accounting is exact",
        started,
        Duration::from_secs(5),
    );
}

// ---------------------------------------------------------------------------
// 8. Confusion-count conservation and micro scale-invariance.

#[test]
fn c8_metric_conservation_and_duplication_invariance() {
    let started = Instant::now();
    for case in 0..1_000u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(0xC8_000 + case);
        let n = rng.gen_range(1..20);
        let gold: Vec<OutputLabels> = (0..n)
            .map(|_| random_labels(&mut rng, &["a", "b", ""]))
            .collect();
        let predicted: Vec<OutputLabels> = (0..n)
            .map(|_| random_labels(&mut rng, &["a", "c", ""]))
            .collect();

        let counts = score_predictions(&gold, &predicted).unwrap();
        let total = |rows: &[OutputLabels]| -> u64 {
            rows.iter()
                .map(|r| {
                    OutputField::ALL
                        .iter()
                        .map(|&f| r.field_labels(f).len() as u64)
                        .sum::<u64>()
                })
                .sum()
        };
        assert_eq!(
            counts.true_pos + counts.false_neg,
            total(&gold),
            "case {case}"
        );
        assert_eq!(
            counts.true_pos + counts.false_pos,
            total(&predicted),
            "case {case}"
        );

        let k = rng.gen_range(2..5);
        let gold_k: Vec<OutputLabels> = gold.iter().cloned().cycle().take(n * k).collect();
        let pred_k: Vec<OutputLabels> = predicted.iter().cloned().cycle().take(n * k).collect();
        let single = EvaluationReport::from_pairs("x", &gold, &predicted).unwrap();
        let repeated = EvaluationReport::from_pairs("x", &gold_k, &pred_k).unwrap();
        assert_eq!(single.precision, repeated.precision, "case {case} x{k}");
        assert_eq!(single.recall, repeated.recall, "case {case} x{k}");
        assert_eq!(single.f_measure, repeated.f_measure, "case {case} x{k}");
    }
    finish(
        "check 8",
        "tp+fn = gold labels, tp+fp = predicted labels, and k-fold duplication leaves metrics unchanged (1000 cases)",
        started,
        Duration::from_secs(5),
    );
}
