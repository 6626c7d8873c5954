//! Radiomic feature extraction from 3D volumes and leakage-free nested
//! cross-validation for binary treatment-response prediction.

pub mod imgfilt;
pub mod imgvol;
pub mod mlcore;
pub mod ncv;
pub mod radfeat;
pub mod stats;
pub mod synth;
