use statrs::function::erf::erfc;

use super::ranks::{average_ranks, tie_sizes};
use super::{Result, StatsError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MannWhitney {
    /// U statistic of `group1`: its rank sum minus `n1 (n1 + 1) / 2`.
    pub u: f64,
    /// Two-sided p-value from the tie-corrected normal approximation.
    pub p: f64,
}

/// Two-sided Mann-Whitney U test.
///
/// The normal approximation uses the tie-corrected variance
/// `n0 n1 / 12 * ((N + 1) - sum(t^3 - t) / (N (N - 1)))` and a 0.5
/// continuity correction. If every pooled value is tied, p = 1.
pub fn mann_whitney_u(group0: &[f64], group1: &[f64]) -> Result<MannWhitney> {
    for (g, vals) in [group0, group1].iter().enumerate() {
        if vals.len() < 2 {
            return Err(StatsError::GroupTooSmall { group: g, len: vals.len() });
        }
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(StatsError::NonFinite);
        }
    }
    let (n0, n1) = (group0.len() as f64, group1.len() as f64);
    let pooled: Vec<f64> = group0.iter().chain(group1).copied().collect();
    let ranks = average_ranks(&pooled);
    let r1: f64 = ranks[group0.len()..].iter().sum();
    let u = r1 - n1 * (n1 + 1.0) / 2.0;

    let n = n0 + n1;
    let tie_term: f64 = tie_sizes(&pooled).iter().map(|&t| (t * t * t - t) as f64).sum();
    let var = n0 * n1 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    let p = if var <= 0.0 {
        1.0
    } else {
        let dev = ((u - n0 * n1 / 2.0).abs() - 0.5).max(0.0);
        let z = dev / var.sqrt();
        erfc(z / std::f64::consts::SQRT_2).clamp(0.0, 1.0)
    };
    Ok(MannWhitney { u, p })
}
