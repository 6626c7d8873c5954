//! Derived-image filters: scale-normalized Laplacian of Gaussian and a
//! single-level separable Haar wavelet decomposition.

mod log;
mod wavelet;

pub use log::{gaussian_blur, laplacian, log_filter};
pub use wavelet::{wavelet_decompose, wavelet_reconstruct, WaveletBands, BAND_LABELS};

use thiserror::Error;

use crate::imgvol::VolumeError;

#[derive(Debug, Error)]
pub enum FilterError {
    #[error("sigma must be finite and > 0, got {0}")]
    InvalidSigma(f64),
    #[error("kernel radius {radius} along axis {axis} exceeds the volume extent ({len} voxels)")]
    KernelTooLarge { axis: usize, radius: usize, len: usize },
    #[error("inconsistent wavelet bands: {0}")]
    BandMismatch(String),
    #[error(transparent)]
    Volume(#[from] VolumeError),
}

pub type Result<T> = std::result::Result<T, FilterError>;
