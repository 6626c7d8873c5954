use serde::{Deserialize, Serialize};

use super::{ModelError, Result};
use crate::stats::average_ranks;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSet {
    pub auc: f64,
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Set when no sample was predicted positive (precision and F1 then 0).
    pub degenerate: bool,
}

impl MetricSet {
    pub const NAMES: [&'static str; 5] = ["auc", "accuracy", "precision", "recall", "f1"];

    pub fn values(&self) -> [f64; 5] {
        [self.auc, self.accuracy, self.precision, self.recall, self.f1]
    }
}

fn check(scores: &[f64], labels: &[u8]) -> Result<(usize, usize)> {
    if scores.len() != labels.len() {
        return Err(ModelError::Shape(format!("{} scores but {} labels", scores.len(), labels.len())));
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(ModelError::NonFinite);
    }
    if labels.iter().any(|&l| l > 1) {
        return Err(ModelError::Shape("labels must be 0 or 1".into()));
    }
    let n1 = labels.iter().filter(|&&l| l == 1).count();
    let n0 = labels.len() - n1;
    if n0 == 0 || n1 == 0 {
        return Err(ModelError::SingleClass);
    }
    Ok((n0, n1))
}

/// Area under the ROC curve; tied scores count one half.
///
/// Computed through mid-ranks: `(R1 - n1(n1+1)/2) / (n1 n0)` where `R1` is
/// the rank sum of the positives.
pub fn roc_auc(scores: &[f64], labels: &[u8]) -> Result<f64> {
    let (n0, n1) = check(scores, labels)?;
    let ranks = average_ranks(scores);
    let r1: f64 = ranks.iter().zip(labels).filter(|(_, &l)| l == 1).map(|(r, _)| r).sum();
    let n1f = n1 as f64;
    Ok((r1 - n1f * (n1f + 1.0) / 2.0) / (n1f * n0 as f64))
}

/// Confusion-matrix metrics with `prediction = score >= threshold`.
pub fn classification_metrics(scores: &[f64], labels: &[u8], threshold: f64) -> Result<MetricSet> {
    let auc = roc_auc(scores, labels)?;
    let (mut tp, mut fp, mut tn, mut fn_) = (0usize, 0usize, 0usize, 0usize);
    for (&s, &l) in scores.iter().zip(labels) {
        match (s >= threshold, l == 1) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, false) => tn += 1,
            (false, true) => fn_ += 1,
        }
    }
    let degenerate = tp + fp == 0;
    let precision = if degenerate { 0.0 } else { tp as f64 / (tp + fp) as f64 };
    let recall = tp as f64 / (tp + fn_) as f64;
    let f1 = if precision + recall > 0.0 { 2.0 * precision * recall / (precision + recall) } else { 0.0 };
    Ok(MetricSet {
        auc,
        accuracy: (tp + tn) as f64 / scores.len() as f64,
        precision,
        recall,
        f1,
        degenerate,
    })
}
