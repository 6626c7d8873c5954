use nalgebra::{DMatrix, DVector};
use ndarray::ArrayView1;

use super::{Dataset, ModelError, Result};

/// Linear ridge classifier; `score = w.x + b`, decision threshold 0.
#[derive(Debug, Clone, PartialEq)]
pub struct RidgeModel {
    pub weights: Vec<f64>,
    pub intercept: f64,
}

impl RidgeModel {
    pub fn score(&self, x: ArrayView1<'_, f64>) -> f64 {
        self.intercept + self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>()
    }
}

/// Least squares on targets {-1, +1} with an L2 penalty on the weights only.
///
/// Centering X and y removes the intercept from the normal equations
/// `(Xc'Xc + lambda I) w = Xc'yc`; then `b = mean(y) - mean(x).w`.
pub fn train_ridge(data: &Dataset, lambda: f64) -> Result<RidgeModel> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(ModelError::InvalidParam(format!("ridge lambda must be >= 0, got {lambda}")));
    }
    let (n, d) = (data.n_samples(), data.n_features());
    if n < 2 {
        return Err(ModelError::Shape(format!("ridge needs at least 2 samples, got {n}")));
    }
    let t: Vec<f64> = data.y.iter().map(|&l| if l == 1 { 1.0 } else { -1.0 }).collect();
    let t_mean = t.iter().sum::<f64>() / n as f64;
    let x_mean: Vec<f64> = (0..d).map(|j| data.x.column(j).sum() / n as f64).collect();
    let xc = DMatrix::from_fn(n, d, |i, j| data.x[[i, j]] - x_mean[j]);
    let tc = DVector::from_iterator(n, t.iter().map(|v| v - t_mean));

    let mut gram = xc.transpose() * &xc;
    for j in 0..d {
        gram[(j, j)] += lambda;
    }
    let rhs = xc.transpose() * tc;
    let chol = gram.clone().cholesky().ok_or(ModelError::Singular(lambda))?;
    // Cholesky can succeed on a numerically singular Gram matrix; reject
    // pivots that are negligible relative to the largest diagonal entry.
    let l = chol.l_dirty();
    let max_diag = (0..d).map(|j| gram[(j, j)]).fold(0.0f64, f64::max);
    if (0..d).any(|j| l[(j, j)] * l[(j, j)] <= 1e-12 * max_diag.max(f64::MIN_POSITIVE)) {
        return Err(ModelError::Singular(lambda));
    }
    let w = chol.solve(&rhs);
    let weights: Vec<f64> = w.iter().copied().collect();
    let intercept = t_mean - weights.iter().zip(&x_mean).map(|(a, b)| a * b).sum::<f64>();
    Ok(RidgeModel { weights, intercept })
}
