//! Univariate screening (Mann-Whitney U for continuous features, Pearson
//! chi-squared for categorical ones) and Spearman-based redundancy filtering.

mod chi2;
mod mwu;
mod ranks;
mod screen;
mod spearman;

pub use chi2::{chi2_contingency, chi2_independence, chi2_sf};
pub use mwu::{mann_whitney_u, MannWhitney};
pub use ranks::average_ranks;
pub use screen::{redundancy_filter, univariate_screen, write_screen_report, ScreenEntry, ScreeningResult, TestKind};
pub use spearman::{pearson, spearman_rho};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("group {group} has {len} values; at least 2 required")]
    GroupTooSmall { group: usize, len: usize },
    #[error("need at least {needed} values, got {got}")]
    TooFewValues { needed: usize, got: usize },
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("constant input vector")]
    ConstantInput,
    #[error("contingency table needs at least 2 categories, got {0}")]
    SingleCategory(usize),
    #[error("a label class has no observations")]
    EmptyClass,
    #[error("zero expected count in contingency table")]
    ZeroExpected,
    #[error("labels must be binary with both classes present")]
    InvalidLabels,
    #[error("non-finite value in input")]
    NonFinite,
    #[error("threshold must lie in (0, 1], got {0}")]
    InvalidThreshold(f64),
}

pub type Result<T> = std::result::Result<T, StatsError>;
