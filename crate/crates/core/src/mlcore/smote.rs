use ndarray::{concatenate, Array2, Axis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Dataset, ModelError, Result};

/// Appends synthetic minority samples until both classes have equal counts.
///
/// Each synthetic point is `x + lambda * (nn - x)` for a random minority
/// sample `x`, one of its `k` nearest minority neighbors `nn` (Euclidean, ties
/// by index) and `lambda ~ U[0, 1)`. `k` is clamped to `minority - 1`.
pub fn smote(data: &Dataset, k: usize, seed: u64) -> Result<Dataset> {
    if k == 0 {
        return Err(ModelError::InvalidParam("SMOTE k must be >= 1".into()));
    }
    let [c0, c1] = data.class_counts();
    if c0 == c1 {
        return Ok(data.clone());
    }
    let (minority_label, n_min, n_maj) = if c0 < c1 { (0u8, c0, c1) } else { (1u8, c1, c0) };
    if n_min < 2 {
        return Err(ModelError::MinorityTooSmall(n_min));
    }
    let k = k.min(n_min - 1);
    let minority: Vec<usize> = (0..data.n_samples()).filter(|&i| data.y[i] == minority_label).collect();

    let neighbors: Vec<Vec<usize>> = minority
        .iter()
        .map(|&i| {
            let mut d: Vec<(f64, usize)> = minority
                .iter()
                .filter(|&&j| j != i)
                .map(|&j| {
                    let dist: f64 = data.row(i).iter().zip(data.row(j)).map(|(a, b)| (a - b) * (a - b)).sum();
                    (dist, j)
                })
                .collect();
            d.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            d.into_iter().take(k).map(|(_, j)| j).collect()
        })
        .collect();

    let n_new = n_maj - n_min;
    let d = data.n_features();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut synth = Array2::<f64>::zeros((n_new, d));
    for s in 0..n_new {
        let a = rng.random_range(0..n_min);
        let b = neighbors[a][rng.random_range(0..k)];
        let lambda: f64 = rng.random();
        let (xa, xb) = (data.row(minority[a]), data.row(b));
        for j in 0..d {
            synth[[s, j]] = xa[j] + lambda * (xb[j] - xa[j]);
        }
    }
    let x = concatenate(Axis(0), &[data.x.view(), synth.view()]).map_err(|e| ModelError::Shape(e.to_string()))?;
    let mut y = data.y.clone();
    y.extend(std::iter::repeat_n(minority_label, n_new));
    Dataset::new(x, y, data.names.clone())
}
