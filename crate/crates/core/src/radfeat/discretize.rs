use crate::imgvol::{Mask3D, Volume3D};

use super::{FeatureError, Result};

/// Gray levels of the masked voxels on the volume grid.
///
/// `levels` has one entry per grid voxel; 0 marks voxels outside the ROI and
/// masked voxels carry a level in `1..=n_levels`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizedROI {
    dims: [usize; 3],
    spacing: [f64; 3],
    levels: Vec<u16>,
    n_levels: usize,
    coords: Vec<[usize; 3]>,
}

impl DiscretizedROI {
    /// Builds an ROI directly from per-voxel levels (0 = outside). `n_levels`
    /// must cover every level present.
    pub fn from_levels(dims: [usize; 3], spacing: [f64; 3], levels: Vec<u16>, n_levels: usize) -> Result<Self> {
        if levels.len() != dims.iter().product::<usize>() {
            return Err(FeatureError::Invalid(format!(
                "levels length {} does not match dims {dims:?}",
                levels.len()
            )));
        }
        if let Some(bad) = levels.iter().find(|&&l| l as usize > n_levels) {
            return Err(FeatureError::Invalid(format!("level {bad} exceeds n_levels {n_levels}")));
        }
        let [nx, ny, _] = dims;
        let coords: Vec<[usize; 3]> = levels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l > 0)
            .map(|(i, _)| [i % nx, (i / nx) % ny, i / (nx * ny)])
            .collect();
        if coords.is_empty() {
            return Err(FeatureError::EmptyMask);
        }
        Ok(Self {
            dims,
            spacing,
            levels,
            n_levels: n_levels.max(1),
            coords,
        })
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn spacing(&self) -> [f64; 3] {
        self.spacing
    }

    /// Number of gray levels used by the matrix features (1 for a constant ROI).
    pub fn n_levels(&self) -> usize {
        self.n_levels
    }

    pub fn coords(&self) -> &[[usize; 3]] {
        &self.coords
    }

    pub fn voxel_count(&self) -> usize {
        self.coords.len()
    }

    /// Level at `(x, y, z)`, 0 outside the ROI.
    #[inline]
    pub fn level(&self, x: usize, y: usize, z: usize) -> u16 {
        self.levels[x + self.dims[0] * (y + self.dims[1] * z)]
    }

    /// Level at a signed coordinate; 0 outside the grid or the ROI.
    #[inline]
    pub fn level_at(&self, x: isize, y: isize, z: isize) -> u16 {
        if x < 0 || y < 0 || z < 0 {
            return 0;
        }
        let (x, y, z) = (x as usize, y as usize, z as usize);
        if x >= self.dims[0] || y >= self.dims[1] || z >= self.dims[2] {
            return 0;
        }
        self.level(x, y, z)
    }

    /// Levels of the masked voxels in storage order.
    pub fn roi_levels(&self) -> Vec<u16> {
        self.coords.iter().map(|c| self.level(c[0], c[1], c[2])).collect()
    }
}

/// Fixed-bin-count discretization of the masked intensities:
/// `level = min(n_bins, floor((x - min) * n_bins / (max - min)) + 1)`.
pub fn discretize(vol: &Volume3D, mask: &Mask3D, n_bins: usize) -> Result<DiscretizedROI> {
    if n_bins < 2 {
        return Err(FeatureError::Invalid(format!("n_bins must be >= 2, got {n_bins}")));
    }
    if n_bins > u16::MAX as usize {
        return Err(FeatureError::Invalid(format!("n_bins {n_bins} too large")));
    }
    mask.check_matches(vol)?;
    if mask.is_empty_roi() {
        return Err(FeatureError::EmptyMask);
    }
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (v, _) in vol.data().iter().zip(mask.voxels()).filter(|(_, &m)| m) {
        lo = lo.min(*v);
        hi = hi.max(*v);
    }
    let range = hi - lo;
    let constant = !(range > 0.0);
    let levels: Vec<u16> = vol
        .data()
        .iter()
        .zip(mask.voxels())
        .map(|(&v, &m)| {
            if !m {
                0
            } else if constant {
                1
            } else {
                let bin = ((v - lo) * n_bins as f64 / range).floor() as usize + 1;
                bin.min(n_bins) as u16
            }
        })
        .collect();
    let n_levels = if constant { 1 } else { n_bins };
    DiscretizedROI::from_levels(vol.dims(), vol.spacing(), levels, n_levels)
}
