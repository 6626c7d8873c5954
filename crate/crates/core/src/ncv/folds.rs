use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{NcvError, Result};

/// Disjoint test-index sets; fold `f` trains on the complement of `test[f]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldPlan {
    pub n: usize,
    pub seed: u64,
    pub test: Vec<Vec<usize>>,
}

impl FoldPlan {
    pub fn k(&self) -> usize {
        self.test.len()
    }

    pub fn train(&self, fold: usize) -> Vec<usize> {
        let mut in_test = vec![false; self.n];
        for &i in &self.test[fold] {
            in_test[i] = true;
        }
        (0..self.n).filter(|&i| !in_test[i]).collect()
    }
}

fn shuffled_classes(labels: &[u8], seed: u64) -> [Vec<usize>; 2] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut by_class = [Vec::new(), Vec::new()];
    for (i, &l) in labels.iter().enumerate() {
        by_class[(l == 1) as usize].push(i);
    }
    for c in &mut by_class {
        c.shuffle(&mut rng);
    }
    by_class
}

/// Stratified k-fold split: indices are shuffled within each class, then dealt
/// round-robin into folds, class 0 first, the dealing position carrying over
/// into class 1 so fold sizes differ by at most one.
///
/// Only `n >= k` is required here (leave-one-out is allowed); callers that
/// need both classes in every fold check class sizes themselves.
pub fn stratified_kfold(labels: &[u8], k: usize, seed: u64) -> Result<FoldPlan> {
    if k < 2 {
        return Err(NcvError::Config(format!("k must be >= 2, got {k}")));
    }
    if labels.len() < k {
        return Err(NcvError::Config(format!("{} samples cannot fill {k} folds", labels.len())));
    }
    let mut test = vec![Vec::new(); k];
    let by_class = shuffled_classes(labels, seed);
    for (pos, &i) in by_class.iter().flatten().enumerate() {
        test[pos % k].push(i);
    }
    for f in &mut test {
        f.sort_unstable();
    }
    Ok(FoldPlan { n: labels.len(), seed, test })
}

/// Single stratified train/test split with `round(test_fraction * n_c)` test
/// samples from each class (at least one).
pub fn stratified_holdout(labels: &[u8], test_fraction: f64, seed: u64) -> Result<FoldPlan> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(NcvError::Config(format!("test fraction must be in (0, 1), got {test_fraction}")));
    }
    let mut test = Vec::new();
    for (class, idx) in shuffled_classes(labels, seed).iter().enumerate() {
        let m = ((idx.len() as f64 * test_fraction).round() as usize).max(1);
        if m >= idx.len() {
            return Err(NcvError::ClassTooSmall { class: class as u8, count: idx.len(), k: 2 });
        }
        test.extend_from_slice(&idx[..m]);
    }
    test.sort_unstable();
    Ok(FoldPlan { n: labels.len(), seed, test: vec![test] })
}

/// Errors unless both classes have at least `k` members.
pub(crate) fn require_class_sizes(labels: &[u8], k: usize) -> Result<()> {
    let ones = labels.iter().filter(|&&l| l == 1).count();
    for (class, count) in [(0u8, labels.len() - ones), (1u8, ones)] {
        if count < k {
            return Err(NcvError::ClassTooSmall { class, count, k });
        }
    }
    Ok(())
}
