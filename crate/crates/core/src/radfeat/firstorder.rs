use crate::imgvol::{Mask3D, Volume3D};

use super::{discretize, entropy_bits, FeatureError, FeatureVector, Result};

pub const FIRSTORDER_NAMES: [&str; 16] = [
    "Mean",
    "Median",
    "Minimum",
    "Maximum",
    "Range",
    "Variance",
    "Skewness",
    "Kurtosis",
    "Energy",
    "RootMeanSquared",
    "MeanAbsoluteDeviation",
    "10Percentile",
    "90Percentile",
    "InterquartileRange",
    "Entropy",
    "Uniformity",
];

/// Linear-interpolation percentile of sorted data, `q` in [0, 1].
pub(crate) fn percentile_sorted(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let t = pos - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * t
}

pub fn firstorder_features(vol: &Volume3D, mask: &Mask3D, n_bins: usize) -> Result<FeatureVector> {
    mask.check_matches(vol)?;
    let mut vals: Vec<f64> = vol
        .data()
        .iter()
        .zip(mask.voxels())
        .filter(|(_, &m)| m)
        .map(|(v, _)| *v)
        .collect();
    if vals.is_empty() {
        return Err(FeatureError::EmptyMask);
    }
    let n = vals.len() as f64;
    let mean = vals.iter().sum::<f64>() / n;
    let m2 = vals.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let m3 = vals.iter().map(|x| (x - mean).powi(3)).sum::<f64>() / n;
    let m4 = vals.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n;
    let (skew, kurt) = if m2 > 0.0 { (m3 / m2.powf(1.5), m4 / (m2 * m2) - 3.0) } else { (0.0, 0.0) };
    let energy = vals.iter().map(|x| x * x).sum::<f64>();
    let mad = vals.iter().map(|x| (x - mean).abs()).sum::<f64>() / n;

    vals.sort_by(|a, b| a.total_cmp(b));
    let min = vals[0];
    let max = vals[vals.len() - 1];
    let p10 = percentile_sorted(&vals, 0.10);
    let p25 = percentile_sorted(&vals, 0.25);
    let p50 = percentile_sorted(&vals, 0.50);
    let p75 = percentile_sorted(&vals, 0.75);
    let p90 = percentile_sorted(&vals, 0.90);

    let droi = discretize(vol, mask, n_bins)?;
    let mut hist = vec![0usize; droi.n_levels() + 1];
    for l in droi.roi_levels() {
        hist[l as usize] += 1;
    }
    let probs: Vec<f64> = hist.iter().map(|&c| c as f64 / n).collect();
    let entropy = entropy_bits(&probs);
    let uniformity = probs.iter().map(|p| p * p).sum::<f64>();

    let values = [
        mean,
        p50,
        min,
        max,
        max - min,
        m2,
        skew,
        kurt,
        energy,
        (energy / n).sqrt(),
        mad,
        p10,
        p90,
        p75 - p25,
        entropy,
        uniformity,
    ];
    let mut fv = FeatureVector::new();
    for (name, v) in FIRSTORDER_NAMES.iter().zip(values) {
        fv.push_continuous(*name, v);
    }
    Ok(fv)
}
