//! Radiomic features over a masked ROI.
//!
//! Families: shape (mask geometry), first-order (intensity histogram), and the
//! texture matrices GLCM, GLRLM and GLSZM computed on a fixed-bin-count
//! discretization. [`extract_all`] runs every family over the original image
//! and its filter-derived images and names each value
//! `<image>_<family>_<feature>`.

mod discretize;
mod extract;
mod firstorder;
mod glcm;
mod glrlm;
mod glszm;
mod shape;
mod table;

pub use discretize::{discretize, DiscretizedROI};
pub use extract::{decimate_mask_majority, expected_feature_count, extract_all, ExtractionConfig};
pub use firstorder::{firstorder_features, FIRSTORDER_NAMES};
pub use glcm::{glcm_features, glcm_features_for, glcm_matrix, GLCM_NAMES};
pub use glrlm::{glrlm_features, glrlm_features_for, glrlm_matrix, GLRLM_NAMES};
pub use glszm::{glszm_features, glszm_matrix, GLSZM_NAMES};
pub use shape::{shape_features, SHAPE_NAMES};
pub use table::FeatureTable;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::imgfilt::FilterError;
use crate::imgvol::VolumeError;

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("mask has no foreground voxels")]
    EmptyMask,
    #[error("no valid neighbor pairs inside the ROI")]
    NoNeighborPairs,
    #[error("{0}")]
    Invalid(String),
    #[error("feature table: {0}")]
    Table(String),
    #[error(transparent)]
    Volume(#[from] VolumeError),
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, FeatureError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureKind {
    Continuous,
    Categorical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Feature {
    pub name: String,
    pub value: f64,
    pub kind: FeatureKind,
}

/// Ordered named feature values.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    features: Vec<Feature>,
}

impl FeatureVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, name: impl Into<String>, value: f64, kind: FeatureKind) {
        self.features.push(Feature {
            name: name.into(),
            value,
            kind,
        });
    }

    pub fn push_continuous(&mut self, name: impl Into<String>, value: f64) {
        self.push(name, value, FeatureKind::Continuous);
    }

    /// Appends `other` with every name prefixed by `<prefix>_`.
    pub fn extend_prefixed(&mut self, prefix: &str, other: FeatureVector) {
        for f in other.features {
            self.features.push(Feature {
                name: format!("{prefix}_{}", f.name),
                ..f
            });
        }
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.features.iter().find(|f| f.name == name).map(|f| f.value)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Feature> {
        self.features.iter()
    }

    pub fn names(&self) -> Vec<&str> {
        self.features.iter().map(|f| f.name.as_str()).collect()
    }

    pub fn values(&self) -> Vec<f64> {
        self.features.iter().map(|f| f.value).collect()
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }
}

/// The 13 unique unit offsets of the 26-neighborhood (first nonzero component positive).
pub const DIRECTIONS: [[isize; 3]; 13] = [
    [1, 0, 0],
    [0, 1, 0],
    [0, 0, 1],
    [1, 1, 0],
    [1, -1, 0],
    [1, 0, 1],
    [1, 0, -1],
    [0, 1, 1],
    [0, 1, -1],
    [1, 1, 1],
    [1, 1, -1],
    [1, -1, 1],
    [1, -1, -1],
];

/// `-sum p log2 p` over positive entries.
pub(crate) fn entropy_bits<'a>(probs: impl IntoIterator<Item = &'a f64>) -> f64 {
    let h: f64 = probs.into_iter().filter(|&&p| p > 0.0).map(|&p| -p * p.log2()).sum();
    // -0.0 from a single certain outcome
    h.max(0.0)
}
