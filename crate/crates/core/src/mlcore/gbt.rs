use ndarray::ArrayView1;
use serde::{Deserialize, Serialize};

use super::tree::{Criterion, Grower};
use super::{Dataset, ModelError, Result, TreeModel};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GbtParams {
    pub n_rounds: usize,
    pub max_depth: usize,
    pub learning_rate: f64,
    /// L2 penalty on leaf values.
    pub lambda: f64,
    pub min_leaf: usize,
}

impl Default for GbtParams {
    fn default() -> Self {
        Self { n_rounds: 50, max_depth: 3, learning_rate: 0.1, lambda: 1.0, min_leaf: 1 }
    }
}

/// Additive logistic model: `score = sigmoid(f0 + lr * sum_t tree_t(x))`.
#[derive(Debug, Clone, PartialEq)]
pub struct GbtModel {
    pub f0: f64,
    pub learning_rate: f64,
    pub trees: Vec<TreeModel>,
}

impl GbtModel {
    pub fn margin(&self, x: ArrayView1<'_, f64>) -> f64 {
        self.f0 + self.learning_rate * self.trees.iter().map(|t| t.score(x)).sum::<f64>()
    }

    pub fn score(&self, x: ArrayView1<'_, f64>) -> f64 {
        sigmoid(self.margin(x))
    }
}

pub(crate) fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// Second-order (Newton) split criterion on logistic-loss gradients.
struct Newton<'a> {
    g: &'a [f64],
    h: &'a [f64],
    lambda: f64,
}

impl Criterion for Newton<'_> {
    type Acc = (f64, f64);

    fn add(&self, acc: &mut Self::Acc, s: usize) {
        acc.0 += self.g[s];
        acc.1 += self.h[s];
    }

    fn sub(&self, t: Self::Acc, l: Self::Acc) -> Self::Acc {
        (t.0 - l.0, t.1 - l.1)
    }

    fn gain(&self, t: Self::Acc, l: Self::Acc, r: Self::Acc) -> f64 {
        let s = |a: Self::Acc| a.0 * a.0 / (a.1 + self.lambda);
        0.5 * (s(l) + s(r) - s(t))
    }

    fn leaf_value(&self, a: Self::Acc) -> f64 {
        -a.0 / (a.1 + self.lambda)
    }

    fn is_terminal(&self, _: Self::Acc) -> bool {
        false
    }

    fn min_gain(&self) -> f64 {
        0.0
    }
}

/// Gradient-boosted regression trees on the logistic loss.
pub fn train_gbt(data: &Dataset, params: &GbtParams) -> Result<GbtModel> {
    if params.n_rounds == 0 {
        return Err(ModelError::InvalidParam("n_rounds must be >= 1".into()));
    }
    if !(params.learning_rate > 0.0 && params.learning_rate <= 1.0) {
        return Err(ModelError::InvalidParam(format!("learning_rate must be in (0, 1], got {}", params.learning_rate)));
    }
    if !(params.lambda >= 0.0) {
        return Err(ModelError::InvalidParam("lambda must be >= 0".into()));
    }
    data.require_both_classes()?;
    let n = data.n_samples();
    let [n0, n1] = data.class_counts();
    let f0 = (n1 as f64 / n0 as f64).ln();
    let y: Vec<f64> = data.y.iter().map(|&l| l as f64).collect();
    let mut margin = vec![f0; n];
    let mut g = vec![0.0; n];
    let mut h = vec![0.0; n];
    let mut trees = Vec::with_capacity(params.n_rounds);
    for _ in 0..params.n_rounds {
        for i in 0..n {
            let p = sigmoid(margin[i]);
            g[i] = p - y[i];
            h[i] = p * (1.0 - p);
        }
        let tree = Grower::<_, rand_chacha::ChaCha8Rng> {
            x: &data.x,
            crit: Newton { g: &g, h: &h, lambda: params.lambda },
            max_depth: params.max_depth,
            min_leaf: params.min_leaf.max(1),
            max_features: None,
            rng: None,
        }
        .grow((0..n).collect());
        for (i, m) in margin.iter_mut().enumerate() {
            *m += params.learning_rate * tree.score(data.row(i));
        }
        trees.push(tree);
    }
    Ok(GbtModel { f0, learning_rate: params.learning_rate, trees })
}
