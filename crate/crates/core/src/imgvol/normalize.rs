use serde::{Deserialize, Serialize};

use super::{Result, Volume3D, VolumeError};

const MIN_SIGMA: f64 = 1e-12;

/// Per-volume intensity statistics used by [`zscore_normalize`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizationParams {
    pub mu: f64,
    pub sigma: f64,
}

impl NormalizationParams {
    pub fn apply(&self, x: f64) -> f64 {
        (x - self.mu) / self.sigma
    }

    pub fn invert(&self, z: f64) -> f64 {
        z * self.sigma + self.mu
    }
}

/// Standardizes the whole volume with its own mean and population std.
pub fn zscore_normalize(vol: &Volume3D) -> Result<(Volume3D, NormalizationParams)> {
    let n = vol.len();
    if n < 2 {
        return Err(VolumeError::Degenerate(format!("z-score needs at least 2 voxels, got {n}")));
    }
    let mu = vol.data().iter().sum::<f64>() / n as f64;
    let var = vol.data().iter().map(|x| (x - mu).powi(2)).sum::<f64>() / n as f64;
    let sigma = var.sqrt();
    if sigma < MIN_SIGMA {
        return Err(VolumeError::Degenerate(format!(
            "intensity std {sigma:e} below {MIN_SIGMA:e} (constant image)"
        )));
    }
    let params = NormalizationParams { mu, sigma };
    let data = vol.data().iter().map(|&x| params.apply(x)).collect();
    Ok((vol.with_data(data)?, params))
}
