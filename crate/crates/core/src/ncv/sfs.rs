use serde::{Deserialize, Serialize};

use super::folds::{require_class_sizes, stratified_kfold};
use super::{NcvError, Result};
use crate::mlcore::{derive_seed, roc_auc, smote, train_model, Dataset, ModelSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct SfsConfig {
    pub inner_k: usize,
    pub model: ModelSpec,
    pub max_features: usize,
    pub smote: bool,
    pub smote_k: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SfsResult {
    /// Features in the order SFS added them.
    pub ordered: Vec<String>,
    /// Mean inner-fold AUC after each addition.
    pub inner_auc_trace: Vec<f64>,
    /// Length of the shortest prefix reaching the maximal inner AUC.
    pub best_prefix: usize,
}

impl SfsResult {
    pub fn selected(&self) -> &[String] {
        &self.ordered[..self.best_prefix]
    }

    pub fn best_auc(&self) -> f64 {
        self.inner_auc_trace[self.best_prefix - 1]
    }
}

struct InnerFold {
    train: Dataset,
    test: Dataset,
    smote_seed: u64,
    model_seed: u64,
}

/// Sequential forward selection by mean inner-CV AUC.
///
/// The inner fold plan is fixed for the whole search, so every candidate is
/// scored on the same splits; SMOTE (if enabled) sees only the inner training
/// rows restricted to the candidate subset.
pub fn sfs_select(data: &Dataset, config: &SfsConfig) -> Result<SfsResult> {
    if config.max_features < 1 {
        return Err(NcvError::Config("max_features must be >= 1".into()));
    }
    if data.n_features() == 0 {
        return Err(NcvError::Config("no candidate features".into()));
    }
    require_class_sizes(&data.y, config.inner_k)?;
    let plan = stratified_kfold(&data.y, config.inner_k, derive_seed(config.seed, 0))?;
    let folds: Vec<InnerFold> = (0..plan.k())
        .map(|f| InnerFold {
            train: data.select_rows(&plan.train(f)),
            test: data.select_rows(&plan.test[f]),
            smote_seed: derive_seed(config.seed, 1 + 2 * f as u64),
            model_seed: derive_seed(config.seed, 2 + 2 * f as u64),
        })
        .collect();

    let mut remaining: Vec<usize> = (0..data.n_features()).collect();
    remaining.sort_by(|&a, &b| data.names[a].cmp(&data.names[b]));
    let mut chosen: Vec<usize> = Vec::new();
    let mut trace = Vec::new();
    while chosen.len() < config.max_features && !remaining.is_empty() {
        let mut best: Option<(usize, f64)> = None;
        for (pos, &c) in remaining.iter().enumerate() {
            let mut cols = chosen.clone();
            cols.push(c);
            let auc = inner_auc(&folds, &cols, config)?;
            // candidates are visited in name order, so a strict improvement
            // test keeps the lexicographically first of tied candidates
            if best.is_none_or(|(_, b)| auc > b + 1e-12) {
                best = Some((pos, auc));
            }
        }
        let (pos, auc) = best.expect("remaining is non-empty");
        chosen.push(remaining.remove(pos));
        trace.push(auc);
    }
    let max = trace.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let best_prefix = trace.iter().position(|&a| a >= max - 1e-12).expect("trace is non-empty") + 1;
    Ok(SfsResult {
        ordered: chosen.iter().map(|&c| data.names[c].clone()).collect(),
        inner_auc_trace: trace,
        best_prefix,
    })
}

fn inner_auc(folds: &[InnerFold], cols: &[usize], config: &SfsConfig) -> Result<f64> {
    let mut sum = 0.0;
    for fold in folds {
        let train = fold.train.select_columns(cols);
        let train = if config.smote { smote(&train, config.smote_k, fold.smote_seed)? } else { train };
        let model = train_model(&train, &config.model, fold.model_seed)?;
        let test = fold.test.select_columns(cols);
        sum += roc_auc(&model.scores(&test.x), &test.y)?;
    }
    Ok(sum / folds.len() as f64)
}
