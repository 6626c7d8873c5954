use ndarray::ArrayView1;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::tree::grow_cart;
use super::{derive_seed, Dataset, ModelError, Result, TreeModel, TreeParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ForestParams {
    pub n_trees: usize,
    pub max_depth: usize,
    pub min_leaf: usize,
    /// Candidate features per split; `None` means `ceil(sqrt(d))`.
    pub max_features: Option<usize>,
    pub bootstrap: bool,
}

impl Default for ForestParams {
    fn default() -> Self {
        Self { n_trees: 100, max_depth: 6, min_leaf: 1, max_features: None, bootstrap: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForestModel {
    pub trees: Vec<TreeModel>,
}

impl ForestModel {
    /// Mean positive-class fraction over trees.
    pub fn score(&self, x: ArrayView1<'_, f64>) -> f64 {
        self.trees.iter().map(|t| t.score(x)).sum::<f64>() / self.trees.len() as f64
    }
}

/// Random forest of CART trees. Tree `t` draws from its own RNG stream
/// `derive_seed(seed, t)`, so the model does not depend on training order.
pub fn train_forest(data: &Dataset, params: &ForestParams, seed: u64) -> Result<ForestModel> {
    if params.n_trees == 0 {
        return Err(ModelError::InvalidParam("n_trees must be >= 1".into()));
    }
    if params.max_features == Some(0) {
        return Err(ModelError::InvalidParam("max_features must be >= 1".into()));
    }
    data.require_both_classes()?;
    let n = data.n_samples();
    let d = data.n_features();
    let m = params.max_features.unwrap_or_else(|| (d as f64).sqrt().ceil() as usize).clamp(1, d.max(1));
    let tree_params = TreeParams { max_depth: params.max_depth, min_leaf: params.min_leaf, max_features: Some(m) };
    let trees = (0..params.n_trees)
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, t as u64));
            let samples: Vec<usize> =
                if params.bootstrap { (0..n).map(|_| rng.random_range(0..n)).collect() } else { (0..n).collect() };
            grow_cart(data, &tree_params, samples, Some(&mut rng))
        })
        .collect();
    Ok(ForestModel { trees })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mlcore::{roc_auc, train_tree};

    fn clusters() -> Dataset {
        let mut rows = Vec::new();
        let mut y = Vec::new();
        for i in 0..40 {
            let c = (i % 2) as f64;
            let j = (i as f64 * 0.37).sin() * 0.2;
            rows.push(vec![c * 5.0 + j, -c * 5.0 + j * 0.5, j]);
            y.push((i % 2) as u8);
        }
        Dataset::from_rows(&rows, y).unwrap()
    }

    #[test]
    fn single_full_tree_equals_cart() {
        let data = clusters();
        let p = ForestParams { n_trees: 1, max_depth: 4, min_leaf: 2, max_features: Some(3), bootstrap: false };
        let f = train_forest(&data, &p, 9).unwrap();
        let t = train_tree(&data, &TreeParams { max_depth: 4, min_leaf: 2, max_features: None }).unwrap();
        assert_eq!(f.trees[0], t);
    }

    #[test]
    fn deterministic_and_separable() {
        let data = clusters();
        let p = ForestParams { n_trees: 50, ..Default::default() };
        let a = train_forest(&data, &p, 5).unwrap();
        assert_eq!(a, train_forest(&data, &p, 5).unwrap());
        let scores: Vec<f64> = (0..data.n_samples()).map(|i| a.score(data.row(i))).collect();
        assert_eq!(roc_auc(&scores, &data.y).unwrap(), 1.0);
    }

    #[test]
    fn zero_trees_rejected() {
        let p = ForestParams { n_trees: 0, ..Default::default() };
        assert!(matches!(train_forest(&clusters(), &p, 0), Err(ModelError::InvalidParam(_))));
    }
}
