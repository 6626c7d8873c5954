use ndarray::{Array2, ArrayView1};
use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Dataset, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TreeParams {
    pub max_depth: usize,
    pub min_leaf: usize,
    /// Candidate features per split; `None` means all.
    pub max_features: Option<usize>,
}

impl Default for TreeParams {
    fn default() -> Self {
        Self { max_depth: 4, min_leaf: 2, max_features: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Node {
    Leaf(f64),
    Split { feature: usize, threshold: f64, left: usize, right: usize },
}

/// Binary tree; `x[feature] <= threshold` goes left. Leaf values are
/// positive-class fractions for CART and raw margins for boosting.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeModel {
    pub(crate) nodes: Vec<Node>,
}

impl TreeModel {
    pub fn score(&self, x: ArrayView1<'_, f64>) -> f64 {
        let mut i = 0;
        loop {
            match self.nodes[i] {
                Node::Leaf(v) => return v,
                Node::Split { feature, threshold, left, right } => {
                    i = if x[feature] <= threshold { left } else { right };
                }
            }
        }
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Leaf(_))).count()
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], i: usize) -> usize {
            match nodes[i] {
                Node::Leaf(_) => 0,
                Node::Split { left, right, .. } => 1 + walk(nodes, left).max(walk(nodes, right)),
            }
        }
        walk(&self.nodes, 0)
    }

    /// Root split as (feature, threshold), if any.
    pub fn root_split(&self) -> Option<(usize, f64)> {
        match self.nodes[0] {
            Node::Split { feature, threshold, .. } => Some((feature, threshold)),
            Node::Leaf(_) => None,
        }
    }
}

/// Node-level split criterion shared by CART and gradient boosting.
pub(crate) trait Criterion {
    /// Per-sample statistics accumulated left-to-right during a scan.
    type Acc: Copy + Default;
    fn add(&self, acc: &mut Self::Acc, sample: usize);
    fn sub(&self, total: Self::Acc, left: Self::Acc) -> Self::Acc;
    /// Improvement of splitting `total` into `left` and `right`.
    fn gain(&self, total: Self::Acc, left: Self::Acc, right: Self::Acc) -> f64;
    fn leaf_value(&self, acc: Self::Acc) -> f64;
    /// True if no split could help (e.g. a pure node).
    fn is_terminal(&self, acc: Self::Acc) -> bool;
    /// Smallest gain accepted for a split.
    fn min_gain(&self) -> f64;
}

pub(crate) struct Gini<'a> {
    pub y: &'a [u8],
}

impl Criterion for Gini<'_> {
    // (count, positives)
    type Acc = (f64, f64);

    fn add(&self, acc: &mut Self::Acc, s: usize) {
        acc.0 += 1.0;
        acc.1 += self.y[s] as f64;
    }

    fn sub(&self, t: Self::Acc, l: Self::Acc) -> Self::Acc {
        (t.0 - l.0, t.1 - l.1)
    }

    fn gain(&self, t: Self::Acc, l: Self::Acc, r: Self::Acc) -> f64 {
        gini(t) - (l.0 * gini(l) + r.0 * gini(r)) / t.0
    }

    fn leaf_value(&self, a: Self::Acc) -> f64 {
        a.1 / a.0
    }

    fn is_terminal(&self, a: Self::Acc) -> bool {
        a.1 == 0.0 || a.1 == a.0
    }

    fn min_gain(&self) -> f64 {
        // zero-gain splits are accepted so that interactions such as XOR,
        // invisible to any single split, remain learnable
        f64::NEG_INFINITY
    }
}

fn gini((n, p): (f64, f64)) -> f64 {
    let q = p / n;
    2.0 * q * (1.0 - q)
}

pub(crate) struct Grower<'a, C: Criterion, R: Rng> {
    pub x: &'a Array2<f64>,
    pub crit: C,
    pub max_depth: usize,
    pub min_leaf: usize,
    pub max_features: Option<usize>,
    pub rng: Option<&'a mut R>,
}

impl<C: Criterion, R: Rng> Grower<'_, C, R> {
    pub fn grow(mut self, samples: Vec<usize>) -> TreeModel {
        let mut nodes = Vec::new();
        self.build(&mut nodes, samples, 0);
        TreeModel { nodes }
    }

    fn build(&mut self, nodes: &mut Vec<Node>, samples: Vec<usize>, depth: usize) -> usize {
        let mut total = C::Acc::default();
        for &s in &samples {
            self.crit.add(&mut total, s);
        }
        let id = nodes.len();
        nodes.push(Node::Leaf(self.crit.leaf_value(total)));
        if depth >= self.max_depth || samples.len() < 2 * self.min_leaf || self.crit.is_terminal(total) {
            return id;
        }
        let Some((feature, threshold)) = self.best_split(&samples, total) else {
            return id;
        };
        let (l, r): (Vec<usize>, Vec<usize>) = samples.iter().partition(|&&s| self.x[[s, feature]] <= threshold);
        let left = self.build(nodes, l, depth + 1);
        let right = self.build(nodes, r, depth + 1);
        nodes[id] = Node::Split { feature, threshold, left, right };
        id
    }

    fn candidates(&mut self) -> Vec<usize> {
        let d = self.x.ncols();
        match (self.max_features, self.rng.as_mut()) {
            (Some(m), Some(rng)) if m < d => {
                let mut f = sample(&mut **rng, d, m).into_vec();
                f.sort_unstable();
                f
            }
            _ => (0..d).collect(),
        }
    }

    fn best_split(&mut self, samples: &[usize], total: C::Acc) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        let mut best_gain = self.crit.min_gain();
        let mut order: Vec<(f64, usize)> = Vec::with_capacity(samples.len());
        for f in self.candidates() {
            order.clear();
            order.extend(samples.iter().map(|&s| (self.x[[s, f]], s)));
            order.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut left = C::Acc::default();
            for i in 0..order.len() - 1 {
                self.crit.add(&mut left, order[i].1);
                let (lo, hi) = (order[i].0, order[i + 1].0);
                if lo == hi || i + 1 < self.min_leaf || order.len() - i - 1 < self.min_leaf {
                    continue;
                }
                let right = self.crit.sub(total, left);
                let g = self.crit.gain(total, left, right);
                if g > best_gain + 1e-12 {
                    best_gain = g;
                    let mid = lo + (hi - lo) / 2.0;
                    best = Some((f, if mid < hi { mid } else { lo }));
                }
            }
        }
        best
    }
}

/// CART classification tree with Gini impurity on the full training set.
pub fn train_tree(data: &Dataset, params: &TreeParams) -> Result<TreeModel> {
    data.require_both_classes()?;
    Ok(grow_cart::<rand_chacha::ChaCha8Rng>(data, params, (0..data.n_samples()).collect(), None))
}

pub(crate) fn grow_cart<R: Rng>(data: &Dataset, params: &TreeParams, samples: Vec<usize>, rng: Option<&mut R>) -> TreeModel {
    Grower {
        x: &data.x,
        crit: Gini { y: &data.y },
        max_depth: params.max_depth,
        min_leaf: params.min_leaf.max(1),
        max_features: params.max_features,
        rng,
    }
    .grow(samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xor() -> Dataset {
        let mut rows = Vec::new();
        let mut y = Vec::new();
        for (a, b) in [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)] {
            for _ in 0..3 {
                rows.push(vec![a, b]);
                y.push(((a > 0.5) ^ (b > 0.5)) as u8);
            }
        }
        Dataset::from_rows(&rows, y).unwrap()
    }

    #[test]
    fn xor_is_learned_with_depth_two() {
        let data = xor();
        let t = train_tree(&data, &TreeParams { max_depth: 2, min_leaf: 1, max_features: None }).unwrap();
        for i in 0..data.n_samples() {
            assert_eq!((t.score(data.row(i)) >= 0.5) as u8, data.y[i]);
        }
    }

    #[test]
    fn depth_zero_is_prior() {
        let data = xor();
        let t = train_tree(&data, &TreeParams { max_depth: 0, ..Default::default() }).unwrap();
        assert_eq!(t.n_leaves(), 1);
        assert_eq!(t.score(data.row(0)), 0.5);
    }

    #[test]
    fn perfect_split_on_informative_feature() {
        // feature 0 is noise, feature 1 separates; root gini 0.5 -> 0
        let rows = vec![vec![0.3, 1.0], vec![0.1, 2.0], vec![0.4, 3.0], vec![0.2, 4.0]];
        let data = Dataset::from_rows(&rows, vec![0, 0, 1, 1]).unwrap();
        let t = train_tree(&data, &TreeParams { max_depth: 3, min_leaf: 1, max_features: None }).unwrap();
        assert_eq!(t.root_split(), Some((1, 2.5)));
        assert_eq!(t.depth(), 1);
        let g = Gini { y: &data.y };
        assert_eq!(g.gain((4.0, 2.0), (2.0, 0.0), (2.0, 2.0)), 0.5);
    }

    #[test]
    fn ties_prefer_lowest_feature() {
        let rows = vec![vec![1.0, 1.0], vec![2.0, 2.0], vec![3.0, 3.0], vec![4.0, 4.0]];
        let data = Dataset::from_rows(&rows, vec![0, 0, 1, 1]).unwrap();
        let t = train_tree(&data, &TreeParams::default()).unwrap();
        assert_eq!(t.root_split(), Some((0, 2.5)));
    }

    #[test]
    fn min_leaf_respected() {
        let rows: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64]).collect();
        let y = vec![1, 0, 0, 0, 0, 0, 0, 0, 0, 1];
        let data = Dataset::from_rows(&rows, y).unwrap();
        let t = train_tree(&data, &TreeParams { max_depth: 10, min_leaf: 3, max_features: None }).unwrap();
        assert!(t.n_leaves() >= 2);
        fn leaf_of(t: &TreeModel, x: ArrayView1<'_, f64>) -> usize {
            let mut i = 0;
            loop {
                match t.nodes[i] {
                    Node::Leaf(_) => return i,
                    Node::Split { feature, threshold, left, right } => {
                        i = if x[feature] <= threshold { left } else { right }
                    }
                }
            }
        }
        let mut per_leaf = std::collections::HashMap::new();
        for i in 0..10 {
            *per_leaf.entry(leaf_of(&t, data.row(i))).or_insert(0) += 1;
        }
        assert!(per_leaf.values().all(|&c| c >= 3), "{per_leaf:?}");
    }
}
