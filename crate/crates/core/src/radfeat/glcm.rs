use super::{entropy_bits, DiscretizedROI, FeatureError, FeatureVector, Result, DIRECTIONS};

pub const GLCM_NAMES: [&str; 10] = [
    "Contrast",
    "Dissimilarity",
    "InverseDifferenceMoment",
    "JointEnergy",
    "JointEntropy",
    "Correlation",
    "Autocorrelation",
    "ClusterShade",
    "ClusterProminence",
    "JointAverage",
];

/// Symmetric co-occurrence matrix for one offset, normalized to sum 1.
/// Row-major `ng x ng`, index `(i - 1) * ng + (j - 1)` for levels `i, j`.
/// `None` when no masked voxel has a masked neighbor at `offset`.
pub fn glcm_matrix(droi: &DiscretizedROI, offset: [isize; 3]) -> Option<Vec<f64>> {
    let ng = droi.n_levels();
    let mut counts = vec![0u64; ng * ng];
    let mut pairs = 0u64;
    for c in droi.coords() {
        let i = droi.level(c[0], c[1], c[2]) as usize;
        let j = droi.level_at(c[0] as isize + offset[0], c[1] as isize + offset[1], c[2] as isize + offset[2]) as usize;
        if j == 0 {
            continue;
        }
        counts[(i - 1) * ng + (j - 1)] += 1;
        counts[(j - 1) * ng + (i - 1)] += 1;
        pairs += 2;
    }
    if pairs == 0 {
        return None;
    }
    Some(counts.into_iter().map(|c| c as f64 / pairs as f64).collect())
}

fn matrix_features(p: &[f64], ng: usize) -> [f64; 10] {
    // symmetric, so row and column marginals coincide
    let mut px = vec![0.0; ng];
    for i in 0..ng {
        for j in 0..ng {
            px[i] += p[i * ng + j];
        }
    }
    let mu: f64 = px.iter().enumerate().map(|(i, v)| (i + 1) as f64 * v).sum();
    let var: f64 = px.iter().enumerate().map(|(i, v)| ((i + 1) as f64 - mu).powi(2) * v).sum();

    let mut f = [0.0; 10];
    let mut joint = 0.0;
    for i in 0..ng {
        for j in 0..ng {
            let pij = p[i * ng + j];
            if pij == 0.0 {
                continue;
            }
            let (li, lj) = ((i + 1) as f64, (j + 1) as f64);
            let d = li - lj;
            f[0] += d * d * pij;
            f[1] += d.abs() * pij;
            f[2] += pij / (1.0 + d * d);
            f[3] += pij * pij;
            joint += li * lj * pij;
            let s = li + lj - 2.0 * mu;
            f[7] += s.powi(3) * pij;
            f[8] += s.powi(4) * pij;
        }
    }
    f[4] = entropy_bits(p);
    f[5] = if var > 1e-12 { ((joint - mu * mu) / var).clamp(-1.0, 1.0) } else { 0.0 };
    f[6] = joint;
    f[9] = mu;
    f
}

/// GLCM features averaged over the given offsets; offsets with no valid
/// pair are skipped.
pub fn glcm_features_for(droi: &DiscretizedROI, offsets: &[[isize; 3]]) -> Result<FeatureVector> {
    let ng = droi.n_levels();
    let mut sums = [0.0; 10];
    let mut used = 0usize;
    for &off in offsets {
        if let Some(p) = glcm_matrix(droi, off) {
            let f = matrix_features(&p, ng);
            for k in 0..10 {
                sums[k] += f[k];
            }
            used += 1;
        }
    }
    if used == 0 {
        return Err(FeatureError::NoNeighborPairs);
    }
    let mut fv = FeatureVector::new();
    for (name, s) in GLCM_NAMES.iter().zip(sums) {
        fv.push_continuous(*name, s / used as f64);
    }
    Ok(fv)
}

/// GLCM features averaged over the 13 unique 3D directions at distance 1.
pub fn glcm_features(droi: &DiscretizedROI) -> Result<FeatureVector> {
    glcm_features_for(droi, &DIRECTIONS)
}
