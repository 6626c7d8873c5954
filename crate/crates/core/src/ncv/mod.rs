//! Leakage-free nested cross-validation.
//!
//! Every outer fold screens, filters, selects features (SFS with inner
//! stratified folds and inner-fold SMOTE), oversamples and fits using its
//! training rows only; test rows are touched once, at scoring time.

mod config;
mod folds;
mod nested;
mod report;
mod sfs;

pub use config::NcvConfig;
pub use folds::{stratified_holdout, stratified_kfold, FoldPlan};
pub use nested::{run_nested_cv, FeatureCount, FoldResult, NcvReport};
pub use report::{
    aggregate_and_rank, read_report_json, write_report_files, Summary, SummaryRow, FREQUENCIES_CSV, METRICS_CSV, REPORT_JSON,
};
pub use sfs::{sfs_select, SfsConfig, SfsResult};

use thiserror::Error;

use crate::mlcore::ModelError;
use crate::radfeat::FeatureError;
use crate::stats::StatsError;

#[derive(Debug, Error)]
pub enum NcvError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("class {class} has {count} samples but {k} folds were requested")]
    ClassTooSmall { class: u8, count: usize, k: usize },
    #[error("fold {fold}: no features survived screening")]
    NoCandidates { fold: usize },
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {message}")]
    Format { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, NcvError>;
