use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::folds::{require_class_sizes, stratified_holdout, stratified_kfold};
use super::sfs::{sfs_select, SfsConfig, SfsResult};
use super::{NcvConfig, NcvError, Result};
use crate::mlcore::{classification_metrics, derive_seed, smote, train_model, Dataset, MetricSet, ModelKind};
use crate::radfeat::FeatureTable;
use crate::stats::{redundancy_filter, univariate_screen, ScreeningResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldResult {
    pub fold: usize,
    pub test_indices: Vec<usize>,
    /// Rows given to screening and redundancy filtering.
    pub screening_indices: Vec<usize>,
    /// Rows given to SFS, SMOTE and the final fit.
    pub training_indices: Vec<usize>,
    /// Features passing the optional p-value prefilter.
    pub n_screened: usize,
    /// Features surviving the redundancy filter (SFS candidates).
    pub n_candidates: usize,
    pub sfs: SfsResult,
    pub selected: Vec<String>,
    pub test_scores: Vec<f64>,
    pub metrics: MetricSet,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureCount {
    pub feature: String,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NcvReport {
    pub model: ModelKind,
    pub config: NcvConfig,
    pub n_samples: usize,
    pub n_features: usize,
    pub folds: Vec<FoldResult>,
    /// Per-metric mean over folds; `degenerate` is set if any fold was.
    pub mean: MetricSet,
    /// Per-metric population standard deviation over folds.
    pub std: MetricSet,
    /// Selection counts over folds, by count descending then name.
    pub frequencies: Vec<FeatureCount>,
}

/// Runs the full nested cross-validation for `config.model.kind`.
pub fn run_nested_cv(table: &FeatureTable, config: &NcvConfig) -> Result<NcvReport> {
    config.validate()?;
    let labels = &table.labels;
    let plan = match config.holdout_fraction {
        Some(f) => stratified_holdout(labels, f, derive_seed(config.seed, 0))?,
        None => {
            require_class_sizes(labels, config.outer_k)?;
            stratified_kfold(labels, config.outer_k, derive_seed(config.seed, 0))?
        }
    };
    let all_rows: Vec<usize> = (0..table.n_rows()).collect();
    let mut folds = Vec::with_capacity(plan.k());
    for f in 0..plan.k() {
        let train = plan.train(f);
        let screening_rows = if config.leak_screening_to_all_rows { all_rows.clone() } else { train.clone() };
        folds.push(run_fold(table, config, f, &plan.test[f], &train, screening_rows)?);
    }
    Ok(assemble(table, config, folds))
}

fn run_fold(
    table: &FeatureTable,
    config: &NcvConfig,
    fold: usize,
    test: &[usize],
    train: &[usize],
    screening_rows: Vec<usize>,
) -> Result<FoldResult> {
    let fold_seed = derive_seed(config.seed, 1 + fold as u64);

    // (1) screening and redundancy filtering
    let screen_table = table.select_rows(&screening_rows);
    let screening = univariate_screen(&screen_table)?;
    let screening = match config.prefilter_alpha {
        Some(alpha) => {
            // if nothing reaches alpha, the single strongest feature goes on
            let best = screening.ranked().into_iter().find(|e| !e.degenerate).cloned();
            let mut entries: Vec<_> =
                screening.entries.into_iter().filter(|e| !e.degenerate && e.p_value < alpha).collect();
            if entries.is_empty() {
                entries.extend(best);
            }
            ScreeningResult { entries }
        }
        None => screening,
    };
    let n_screened = screening.entries.iter().filter(|e| !e.degenerate).count();
    let names: Vec<String> = screening.entries.iter().map(|e| e.name.clone()).collect();
    let candidates = redundancy_filter(&screen_table.select_named(&names)?, &screening, config.corr_threshold)?;
    if candidates.is_empty() {
        return Err(NcvError::NoCandidates { fold });
    }

    // (2) wrapper selection on the training rows
    let train_table = table.select_rows(train).select_named(&candidates)?;
    let train_data = Dataset::new(train_table.values, train_table.labels, train_table.names)?;
    let sfs = sfs_select(
        &train_data,
        &SfsConfig {
            inner_k: config.inner_k,
            model: config.model,
            max_features: config.effective_max_features(train.len()),
            smote: config.smote,
            smote_k: config.smote_k,
            seed: derive_seed(fold_seed, 0),
        },
    )?;
    let selected = sfs.selected().to_vec();

    // (3) oversampling and (4) final fit on the training rows
    let cols: Vec<usize> = selected.iter().map(|n| train_data.names.iter().position(|m| m == n).unwrap()).collect();
    let fit_data = train_data.select_columns(&cols);
    let fit_data = if config.smote { smote(&fit_data, config.smote_k, derive_seed(fold_seed, 1))? } else { fit_data };
    let model = train_model(&fit_data, &config.model, derive_seed(fold_seed, 2))?;

    // (5) the only read of the test rows
    let test_table = table.select_rows(test).select_named(&selected)?;
    let test_scores = model.scores(&test_table.values);
    let metrics = classification_metrics(&test_scores, &test_table.labels, model.threshold())?;

    Ok(FoldResult {
        fold,
        test_indices: test.to_vec(),
        screening_indices: screening_rows,
        training_indices: train.to_vec(),
        n_screened,
        n_candidates: candidates.len(),
        sfs,
        selected,
        test_scores,
        metrics,
    })
}

pub(crate) fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

pub(crate) fn aggregate_metrics(folds: &[MetricSet]) -> (MetricSet, MetricSet) {
    let col = |f: fn(&MetricSet) -> f64| mean_std(&folds.iter().map(f).collect::<Vec<_>>());
    let (auc, accuracy, precision, recall, f1) =
        (col(|m| m.auc), col(|m| m.accuracy), col(|m| m.precision), col(|m| m.recall), col(|m| m.f1));
    let degenerate = folds.iter().any(|m| m.degenerate);
    (
        MetricSet { auc: auc.0, accuracy: accuracy.0, precision: precision.0, recall: recall.0, f1: f1.0, degenerate },
        MetricSet { auc: auc.1, accuracy: accuracy.1, precision: precision.1, recall: recall.1, f1: f1.1, degenerate },
    )
}

pub(crate) fn rank_frequencies<'a>(lists: impl IntoIterator<Item = &'a [String]>) -> Vec<FeatureCount> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for list in lists {
        for name in list {
            *counts.entry(name).or_default() += 1;
        }
    }
    let mut out: Vec<FeatureCount> =
        counts.into_iter().map(|(feature, count)| FeatureCount { feature: feature.to_string(), count }).collect();
    out.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.feature.cmp(&b.feature)));
    out
}

fn assemble(table: &FeatureTable, config: &NcvConfig, folds: Vec<FoldResult>) -> NcvReport {
    let metrics: Vec<MetricSet> = folds.iter().map(|f| f.metrics).collect();
    let (mean, std) = aggregate_metrics(&metrics);
    let frequencies = rank_frequencies(folds.iter().map(|f| f.selected.as_slice()));
    NcvReport {
        model: config.model.kind,
        config: config.clone(),
        n_samples: table.n_rows(),
        n_features: table.n_features(),
        folds,
        mean,
        std,
        frequencies,
    }
}
