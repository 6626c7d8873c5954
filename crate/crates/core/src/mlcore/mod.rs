//! Classifiers, SMOTE oversampling and evaluation metrics.
//!
//! Every trainer is deterministic given its inputs and seed. Scores are real
//! numbers where higher means more likely class 1 (responder); each model
//! carries the decision threshold that turns scores into hard predictions.

mod dataset;
mod forest;
mod gbt;
mod metrics;
mod model;
mod ridge;
mod smote;
mod tree;

pub use dataset::Dataset;
pub use forest::{train_forest, ForestModel, ForestParams};
pub use gbt::{train_gbt, GbtModel, GbtParams};
pub use metrics::{classification_metrics, roc_auc, MetricSet};
pub use model::{train_model, ModelKind, ModelSpec, RidgeParams, TrainedModel};
pub use ridge::{train_ridge, RidgeModel};
pub use smote::smote;
pub use tree::{train_tree, TreeModel, TreeParams};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("dataset shape mismatch: {0}")]
    Shape(String),
    #[error("non-finite value in features")]
    NonFinite,
    #[error("labels must be binary with both classes present")]
    SingleClass,
    #[error("minority class has {0} samples; SMOTE needs at least 2")]
    MinorityTooSmall(usize),
    #[error("singular normal equations (collinear features with lambda = {0})")]
    Singular(f64),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
}

pub type Result<T> = std::result::Result<T, ModelError>;

/// SplitMix64 mixing of a master seed and a stream id, used to give every
/// tree, fold and SMOTE call its own reproducible RNG stream.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    let mut z = master ^ stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
