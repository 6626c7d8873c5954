use std::f64::consts::PI;

use nalgebra::{Matrix3, SymmetricEigen};

use crate::imgvol::Mask3D;

use super::{FeatureError, FeatureVector, Result};

pub const SHAPE_NAMES: [&str; 9] = [
    "VoxelVolume",
    "SurfaceArea",
    "Sphericity",
    "Maximum3DDiameter",
    "MajorAxisLength",
    "MinorAxisLength",
    "LeastAxisLength",
    "Elongation",
    "Flatness",
];

const FACE_NEIGHBORS: [[isize; 3]; 6] = [[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]];

fn foreground_at(mask: &Mask3D, p: [isize; 3]) -> bool {
    let d = mask.dims();
    if p.iter().any(|&c| c < 0) || (0..3).any(|a| p[a] as usize >= d[a]) {
        return false;
    }
    mask.get(p[0] as usize, p[1] as usize, p[2] as usize)
}

/// Geometry of the mask: voxel-count volume, exposed-face surface area and
/// principal-axis descriptors of the voxel-center cloud.
pub fn shape_features(mask: &Mask3D, spacing: [f64; 3]) -> Result<FeatureVector> {
    let fg = mask.foreground();
    if fg.is_empty() {
        return Err(FeatureError::EmptyMask);
    }
    let face_area = [spacing[1] * spacing[2], spacing[0] * spacing[2], spacing[0] * spacing[1]];
    let volume = fg.len() as f64 * spacing.iter().product::<f64>();

    let mut area = 0.0;
    let mut boundary = Vec::new();
    for c in &fg {
        let p = [c[0] as isize, c[1] as isize, c[2] as isize];
        let mut exposed = false;
        for (k, off) in FACE_NEIGHBORS.iter().enumerate() {
            if !foreground_at(mask, [p[0] + off[0], p[1] + off[1], p[2] + off[2]]) {
                area += face_area[k / 2];
                exposed = true;
            }
        }
        if exposed {
            boundary.push([c[0] as f64 * spacing[0], c[1] as f64 * spacing[1], c[2] as f64 * spacing[2]]);
        }
    }
    let sphericity = PI.cbrt() * (6.0 * volume).powf(2.0 / 3.0) / area;

    // farthest pair of centers lies on the convex hull, hence on boundary voxels
    let mut max_d2 = 0.0f64;
    for (i, a) in boundary.iter().enumerate() {
        for b in &boundary[i + 1..] {
            let d2 = (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2);
            max_d2 = max_d2.max(d2);
        }
    }

    let n = fg.len() as f64;
    let pts: Vec<[f64; 3]> = fg
        .iter()
        .map(|c| [c[0] as f64 * spacing[0], c[1] as f64 * spacing[1], c[2] as f64 * spacing[2]])
        .collect();
    let mut mean = [0.0; 3];
    for p in &pts {
        for a in 0..3 {
            mean[a] += p[a] / n;
        }
    }
    let mut cov = Matrix3::<f64>::zeros();
    for p in &pts {
        for i in 0..3 {
            for j in 0..3 {
                cov[(i, j)] += (p[i] - mean[i]) * (p[j] - mean[j]) / n;
            }
        }
    }
    let mut eig: Vec<f64> = SymmetricEigen::new(cov).eigenvalues.iter().map(|&l| l.max(0.0)).collect();
    eig.sort_by(|a, b| b.total_cmp(a));
    let (l1, l2, l3) = (eig[0], eig[1], eig[2]);
    // a single voxel has no preferred axis; report it as isotropic
    let ratio = |l: f64| if l1 > 0.0 { (l / l1).sqrt().min(1.0) } else { 1.0 };

    let mut fv = FeatureVector::new();
    let values = [
        volume,
        area,
        sphericity,
        max_d2.sqrt(),
        4.0 * l1.sqrt(),
        4.0 * l2.sqrt(),
        4.0 * l3.sqrt(),
        ratio(l2),
        ratio(l3),
    ];
    for (name, v) in SHAPE_NAMES.iter().zip(values) {
        fv.push_continuous(*name, v);
    }
    Ok(fv)
}
