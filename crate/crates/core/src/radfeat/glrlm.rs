use super::{entropy_bits, DiscretizedROI, FeatureError, FeatureVector, Result, DIRECTIONS};

pub const GLRLM_NAMES: [&str; 12] = [
    "ShortRunEmphasis",
    "LongRunEmphasis",
    "GrayLevelNonUniformity",
    "GrayLevelNonUniformityNormalized",
    "RunLengthNonUniformity",
    "RunLengthNonUniformityNormalized",
    "RunPercentage",
    "GrayLevelVariance",
    "RunVariance",
    "RunEntropy",
    "LowGrayLevelRunEmphasis",
    "HighGrayLevelRunEmphasis",
];

/// Run-length matrix for one direction: `counts[i - 1][j - 1]` is the number
/// of maximal runs of level `i` with length `j` inside the ROI.
pub fn glrlm_matrix(droi: &DiscretizedROI, dir: [isize; 3]) -> Vec<Vec<u64>> {
    let ng = droi.n_levels();
    let mut rows: Vec<Vec<u64>> = vec![Vec::new(); ng];
    for c in droi.coords() {
        let (x, y, z) = (c[0] as isize, c[1] as isize, c[2] as isize);
        let level = droi.level(c[0], c[1], c[2]);
        // only start counting at the first voxel of a run
        if droi.level_at(x - dir[0], y - dir[1], z - dir[2]) == level {
            continue;
        }
        let mut len = 1usize;
        while droi.level_at(x + dir[0] * len as isize, y + dir[1] * len as isize, z + dir[2] * len as isize) == level {
            len += 1;
        }
        let row = &mut rows[level as usize - 1];
        if row.len() < len {
            row.resize(len, 0);
        }
        row[len - 1] += 1;
    }
    rows
}

fn matrix_features(rows: &[Vec<u64>], n_voxels: usize) -> [f64; 12] {
    let max_len = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    let nr: f64 = rows.iter().flatten().sum::<u64>() as f64;
    let mut per_len = vec![0.0; max_len];
    let mut f = [0.0; 12];
    let mut gln = 0.0;
    let mut mu_i = 0.0;
    let mut mu_j = 0.0;
    let mut probs = Vec::new();
    for (i0, row) in rows.iter().enumerate() {
        let i = (i0 + 1) as f64;
        let row_sum: f64 = row.iter().sum::<u64>() as f64;
        gln += row_sum * row_sum;
        for (j0, &c) in row.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let j = (j0 + 1) as f64;
            let c = c as f64;
            per_len[j0] += c;
            f[0] += c / (j * j);
            f[1] += c * j * j;
            f[10] += c / (i * i);
            f[11] += c * i * i;
            let p = c / nr;
            mu_i += p * i;
            mu_j += p * j;
            probs.push(p);
        }
    }
    let rln: f64 = per_len.iter().map(|v| v * v).sum();
    let mut glv = 0.0;
    let mut rv = 0.0;
    for (i0, row) in rows.iter().enumerate() {
        for (j0, &c) in row.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let p = c as f64 / nr;
            glv += p * ((i0 + 1) as f64 - mu_i).powi(2);
            rv += p * ((j0 + 1) as f64 - mu_j).powi(2);
        }
    }
    f[0] /= nr;
    f[1] /= nr;
    f[2] = gln / nr;
    f[3] = gln / (nr * nr);
    f[4] = rln / nr;
    f[5] = rln / (nr * nr);
    f[6] = nr / n_voxels as f64;
    f[7] = glv;
    f[8] = rv;
    f[9] = entropy_bits(&probs);
    f[10] /= nr;
    f[11] /= nr;
    f
}

/// GLRLM features averaged over `dirs`.
pub fn glrlm_features_for(droi: &DiscretizedROI, dirs: &[[isize; 3]]) -> Result<FeatureVector> {
    if droi.voxel_count() == 0 {
        return Err(FeatureError::EmptyMask);
    }
    if dirs.is_empty() {
        return Err(FeatureError::Invalid("no run directions given".into()));
    }
    let mut sums = [0.0; 12];
    for &d in dirs {
        let f = matrix_features(&glrlm_matrix(droi, d), droi.voxel_count());
        for k in 0..12 {
            sums[k] += f[k];
        }
    }
    let mut fv = FeatureVector::new();
    for (name, s) in GLRLM_NAMES.iter().zip(sums) {
        fv.push_continuous(*name, s / dirs.len() as f64);
    }
    Ok(fv)
}

/// GLRLM features averaged over the 13 unique 3D directions.
pub fn glrlm_features(droi: &DiscretizedROI) -> Result<FeatureVector> {
    glrlm_features_for(droi, &DIRECTIONS)
}
