//! Scalar 3D volumes, binary masks and the preprocessing steps applied to
//! them before feature extraction: resampling, bias-field correction and
//! z-score normalization.
//!
//! Voxel data is stored x-fastest: the linear index of `(x, y, z)` is
//! `x + nx * (y + ny * z)`.

mod bias;
mod io;
mod normalize;
mod resample;

pub use bias::correct_bias_field;
pub use io::{load_volume, save_volume, VolumeHeader};
pub use normalize::{zscore_normalize, NormalizationParams};
pub use resample::{resample_mask_nearest, resample_output_dims, resample_trilinear};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum VolumeError {
    #[error("invalid dimensions {0:?}: every axis needs at least one voxel")]
    InvalidDims([usize; 3]),
    #[error("invalid spacing {0:?}: every component must be finite and > 0")]
    InvalidSpacing([f64; 3]),
    #[error("data length {actual} does not match dims product {expected}")]
    SizeMismatch { expected: usize, actual: usize },
    #[error("non-finite voxel value at index {0}")]
    NonFinite(usize),
    #[error("mask dims {mask:?} do not match volume dims {volume:?}")]
    MaskDimsMismatch { volume: [usize; 3], mask: [usize; 3] },
    #[error("mask has no foreground voxels")]
    EmptyMask,
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("non-positive intensity {value} at masked voxel {index}")]
    NonPositiveIntensity { index: usize, value: f64 },
    #[error("unsupported bias polynomial degree {0} (expected 1, 2 or 3)")]
    InvalidDegree(usize),
    #[error("rank-deficient least-squares system for bias field")]
    RankDeficient,
    #[error("header error in {path}: {message}")]
    Header { path: String, message: String },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, VolumeError>;

fn check_dims(dims: [usize; 3]) -> Result<usize> {
    if dims.iter().any(|&n| n == 0) {
        return Err(VolumeError::InvalidDims(dims));
    }
    Ok(dims[0] * dims[1] * dims[2])
}

fn check_spacing(spacing: [f64; 3]) -> Result<()> {
    if spacing.iter().any(|s| !s.is_finite() || *s <= 0.0) {
        return Err(VolumeError::InvalidSpacing(spacing));
    }
    Ok(())
}

/// A real-valued 3D image with physical voxel spacing (mm) and origin (mm).
#[derive(Debug, Clone, PartialEq)]
pub struct Volume3D {
    dims: [usize; 3],
    spacing: [f64; 3],
    origin: [f64; 3],
    data: Vec<f64>,
}

impl Volume3D {
    pub fn new(dims: [usize; 3], spacing: [f64; 3], origin: [f64; 3], data: Vec<f64>) -> Result<Self> {
        let expected = check_dims(dims)?;
        check_spacing(spacing)?;
        if data.len() != expected {
            return Err(VolumeError::SizeMismatch {
                expected,
                actual: data.len(),
            });
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(VolumeError::NonFinite(i));
        }
        Ok(Self {
            dims,
            spacing,
            origin,
            data,
        })
    }

    /// Volume with every voxel set to `value`, origin at zero.
    pub fn filled(dims: [usize; 3], spacing: [f64; 3], value: f64) -> Result<Self> {
        let n = check_dims(dims)?;
        Self::new(dims, spacing, [0.0; 3], vec![value; n])
    }

    /// Builds a volume by evaluating `f(x, y, z)` at every voxel index.
    pub fn from_fn(
        dims: [usize; 3],
        spacing: [f64; 3],
        mut f: impl FnMut(usize, usize, usize) -> f64,
    ) -> Result<Self> {
        check_dims(dims)?;
        let mut data = Vec::with_capacity(dims[0] * dims[1] * dims[2]);
        for z in 0..dims[2] {
            for y in 0..dims[1] {
                for x in 0..dims[0] {
                    data.push(f(x, y, z));
                }
            }
        }
        Self::new(dims, spacing, [0.0; 3], data)
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn spacing(&self) -> [f64; 3] {
        self.spacing
    }

    pub fn origin(&self) -> [f64; 3] {
        self.origin
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn index(&self, x: usize, y: usize, z: usize) -> usize {
        x + self.dims[0] * (y + self.dims[1] * z)
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, z: usize) -> f64 {
        self.data[self.index(x, y, z)]
    }

    /// Same geometry, new data. Used by filters that produce a derived image.
    pub fn with_data(&self, data: Vec<f64>) -> Result<Self> {
        Self::new(self.dims, self.spacing, self.origin, data)
    }

    pub fn with_origin(mut self, origin: [f64; 3]) -> Self {
        self.origin = origin;
        self
    }
}

/// Binary region of interest on the same grid layout as [`Volume3D`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask3D {
    dims: [usize; 3],
    voxels: Vec<bool>,
}

impl Mask3D {
    pub fn new(dims: [usize; 3], voxels: Vec<bool>) -> Result<Self> {
        let expected = check_dims(dims)?;
        if voxels.len() != expected {
            return Err(VolumeError::SizeMismatch {
                expected,
                actual: voxels.len(),
            });
        }
        Ok(Self { dims, voxels })
    }

    pub fn empty(dims: [usize; 3]) -> Result<Self> {
        let n = check_dims(dims)?;
        Self::new(dims, vec![false; n])
    }

    pub fn full(dims: [usize; 3]) -> Result<Self> {
        let n = check_dims(dims)?;
        Self::new(dims, vec![true; n])
    }

    pub fn from_fn(dims: [usize; 3], mut f: impl FnMut(usize, usize, usize) -> bool) -> Result<Self> {
        check_dims(dims)?;
        let mut voxels = Vec::with_capacity(dims[0] * dims[1] * dims[2]);
        for z in 0..dims[2] {
            for y in 0..dims[1] {
                for x in 0..dims[0] {
                    voxels.push(f(x, y, z));
                }
            }
        }
        Self::new(dims, voxels)
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn voxels(&self) -> &[bool] {
        &self.voxels
    }

    #[inline]
    pub fn index(&self, x: usize, y: usize, z: usize) -> usize {
        x + self.dims[0] * (y + self.dims[1] * z)
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, z: usize) -> bool {
        self.voxels[self.index(x, y, z)]
    }

    pub fn set(&mut self, x: usize, y: usize, z: usize, value: bool) {
        let i = self.index(x, y, z);
        self.voxels[i] = value;
    }

    pub fn count(&self) -> usize {
        self.voxels.iter().filter(|&&v| v).count()
    }

    pub fn is_empty_roi(&self) -> bool {
        !self.voxels.iter().any(|&v| v)
    }

    /// Voxel coordinates of every foreground voxel, in storage order.
    pub fn foreground(&self) -> Vec<[usize; 3]> {
        let [nx, ny, _] = self.dims;
        self.voxels
            .iter()
            .enumerate()
            .filter(|(_, &v)| v)
            .map(|(i, _)| [i % nx, (i / nx) % ny, i / (nx * ny)])
            .collect()
    }

    pub fn check_matches(&self, vol: &Volume3D) -> Result<()> {
        if self.dims != vol.dims() {
            return Err(VolumeError::MaskDimsMismatch {
                volume: vol.dims(),
                mask: self.dims,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_wrong_length_and_non_finite() {
        assert!(matches!(
            Volume3D::new([2, 2, 2], [1.0; 3], [0.0; 3], vec![0.0; 7]),
            Err(VolumeError::SizeMismatch { expected: 8, actual: 7 })
        ));
        let mut data = vec![0.0; 8];
        data[3] = f64::NAN;
        assert!(matches!(
            Volume3D::new([2, 2, 2], [1.0; 3], [0.0; 3], data),
            Err(VolumeError::NonFinite(3))
        ));
        assert!(Volume3D::filled([2, 2, 2], [1.0, 0.0, 1.0], 1.0).is_err());
        assert!(Volume3D::filled([2, 0, 2], [1.0; 3], 1.0).is_err());
    }

    #[test]
    fn x_fastest_layout() {
        let v = Volume3D::from_fn([3, 2, 2], [1.0; 3], |x, y, z| (x + 10 * y + 100 * z) as f64).unwrap();
        assert_eq!(v.data()[1], 1.0);
        assert_eq!(v.data()[3], 10.0);
        assert_eq!(v.data()[6], 100.0);
        assert_eq!(v.get(2, 1, 1), 112.0);
        let m = Mask3D::from_fn([3, 2, 2], |x, y, z| x == 2 && y == 1 && z == 0).unwrap();
        assert_eq!(m.foreground(), vec![[2, 1, 0]]);
    }
}
