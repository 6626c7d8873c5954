use super::{entropy_bits, DiscretizedROI, FeatureError, FeatureVector, Result};

pub const GLSZM_NAMES: [&str; 10] = [
    "SmallAreaEmphasis",
    "LargeAreaEmphasis",
    "GrayLevelNonUniformity",
    "GrayLevelNonUniformityNormalized",
    "SizeZoneNonUniformity",
    "SizeZoneNonUniformityNormalized",
    "ZonePercentage",
    "GrayLevelVariance",
    "ZoneVariance",
    "ZoneEntropy",
];

/// Zones are 26-connected components of equal level. Returns
/// `(level, size)` for each zone in discovery order.
pub fn glszm_matrix(droi: &DiscretizedROI) -> Vec<(u16, usize)> {
    let [nx, ny, _] = droi.dims();
    let mut seen = vec![false; droi.dims().iter().product()];
    let mut zones = Vec::new();
    let mut stack = Vec::new();
    for c in droi.coords() {
        let start = c[0] + nx * (c[1] + ny * c[2]);
        if seen[start] {
            continue;
        }
        let level = droi.level(c[0], c[1], c[2]);
        seen[start] = true;
        stack.push(*c);
        let mut size = 0usize;
        while let Some(p) = stack.pop() {
            size += 1;
            for dz in -1isize..=1 {
                for dy in -1isize..=1 {
                    for dx in -1isize..=1 {
                        let q = [p[0] as isize + dx, p[1] as isize + dy, p[2] as isize + dz];
                        if droi.level_at(q[0], q[1], q[2]) != level {
                            continue;
                        }
                        let q = [q[0] as usize, q[1] as usize, q[2] as usize];
                        let qi = q[0] + nx * (q[1] + ny * q[2]);
                        if !seen[qi] {
                            seen[qi] = true;
                            stack.push(q);
                        }
                    }
                }
            }
        }
        zones.push((level, size));
    }
    zones
}

pub fn glszm_features(droi: &DiscretizedROI) -> Result<FeatureVector> {
    if droi.voxel_count() == 0 {
        return Err(FeatureError::EmptyMask);
    }
    let zones = glszm_matrix(droi);
    let ng = droi.n_levels();
    let max_size = zones.iter().map(|z| z.1).max().unwrap_or(0);
    // dense P(i, s)
    let mut p = vec![vec![0u64; max_size]; ng];
    for &(l, s) in &zones {
        p[l as usize - 1][s - 1] += 1;
    }
    let nz = zones.len() as f64;
    let np = droi.voxel_count() as f64;

    let mut sae = 0.0;
    let mut lae = 0.0;
    let mut per_size = vec![0.0; max_size];
    let mut gln = 0.0;
    let mut mu_i = 0.0;
    let mut mu_s = 0.0;
    let mut probs = Vec::new();
    for (i0, row) in p.iter().enumerate() {
        let row_sum: f64 = row.iter().sum::<u64>() as f64;
        gln += row_sum * row_sum;
        for (s0, &c) in row.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let (c, s) = (c as f64, (s0 + 1) as f64);
            sae += c / (s * s);
            lae += c * s * s;
            per_size[s0] += c;
            let q = c / nz;
            mu_i += q * (i0 + 1) as f64;
            mu_s += q * s;
            probs.push(q);
        }
    }
    let mut glv = 0.0;
    let mut zv = 0.0;
    for (i0, row) in p.iter().enumerate() {
        for (s0, &c) in row.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let q = c as f64 / nz;
            glv += q * ((i0 + 1) as f64 - mu_i).powi(2);
            zv += q * ((s0 + 1) as f64 - mu_s).powi(2);
        }
    }
    let szn: f64 = per_size.iter().map(|v| v * v).sum();
    let values = [
        sae / nz,
        lae / nz,
        gln / nz,
        gln / (nz * nz),
        szn / nz,
        szn / (nz * nz),
        nz / np,
        glv,
        zv,
        entropy_bits(&probs),
    ];
    let mut fv = FeatureVector::new();
    for (name, v) in GLSZM_NAMES.iter().zip(values) {
        fv.push_continuous(*name, v);
    }
    Ok(fv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roi(dims: [usize; 3], levels: Vec<u16>, ng: usize) -> DiscretizedROI {
        DiscretizedROI::from_levels(dims, [1.0; 3], levels, ng).unwrap()
    }

    #[test]
    fn constant_roi_single_zone() {
        let d = roi([3, 3, 3], vec![1; 27], 1);
        assert_eq!(glszm_matrix(&d), vec![(1, 27)]);
        let f = glszm_features(&d).unwrap();
        assert_eq!(f.get("ZonePercentage"), Some(1.0 / 27.0));
        assert_eq!(f.get("GrayLevelNonUniformityNormalized"), Some(1.0));
    }

    #[test]
    fn two_islands() {
        let mut levels = vec![0u16; 5];
        levels[0] = 1;
        levels[4] = 2;
        let d = roi([5, 1, 1], levels, 2);
        let f = glszm_features(&d).unwrap();
        assert_eq!(glszm_matrix(&d).len(), 2);
        assert_eq!(f.get("GrayLevelNonUniformityNormalized"), Some(0.5));
        assert_eq!(f.get("SizeZoneNonUniformityNormalized"), Some(1.0));
    }

    #[test]
    fn checkerboard_diagonals_connect() {
        let dims = [4, 4, 4];
        let levels: Vec<u16> = (0..64)
            .map(|i| {
                let (x, y, z) = (i % 4, (i / 4) % 4, i / 16);
                if (x + y + z) % 2 == 0 { 1 } else { 2 }
            })
            .collect();
        let d = roi(dims, levels, 2);
        // each color class is 26-connected through edge-diagonal neighbors
        let zones = glszm_matrix(&d);
        assert_eq!(zones.len(), 2);
        assert!(zones.iter().all(|z| z.1 == 32));
    }

    #[test]
    fn sizes_cover_roi() {
        let dims = [6, 5, 4];
        let levels: Vec<u16> = (0..120).map(|i| ((i * 11 + i / 9) % 4) as u16).collect();
        let d = roi(dims, levels, 3);
        let total: usize = glszm_matrix(&d).iter().map(|z| z.1).sum();
        assert_eq!(total, d.voxel_count());
    }
}
