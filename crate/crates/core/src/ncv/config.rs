use serde::{Deserialize, Serialize};

use super::{NcvError, Result};
use crate::mlcore::ModelSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NcvConfig {
    pub outer_k: usize,
    pub inner_k: usize,
    pub model: ModelSpec,
    /// Upper bound on the SFS path length.
    pub max_features: usize,
    /// Additionally cap SFS at `floor(n_train / 7)` for small cohorts.
    pub max_features_guard: bool,
    /// |Spearman rho| above which the weaker of two features is dropped.
    pub corr_threshold: f64,
    /// Optional univariate prefilter: keep features with p < alpha only.
    pub prefilter_alpha: Option<f64>,
    pub smote: bool,
    pub smote_k: usize,
    /// Replace the outer k-fold loop by one stratified train/test split with
    /// this test fraction.
    pub holdout_fraction: Option<f64>,
    /// Diagnostic only: screen and redundancy-filter on all rows, test rows
    /// included. Produces an optimistically biased estimate on purpose.
    pub leak_screening_to_all_rows: bool,
    pub seed: u64,
}

impl Default for NcvConfig {
    fn default() -> Self {
        Self {
            outer_k: 5,
            inner_k: 5,
            model: ModelSpec::default(),
            max_features: 15,
            max_features_guard: false,
            corr_threshold: 0.6,
            prefilter_alpha: None,
            smote: true,
            smote_k: 5,
            holdout_fraction: None,
            leak_screening_to_all_rows: false,
            seed: 0,
        }
    }
}

impl NcvConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(NcvError::Config(m));
        if self.outer_k < 2 {
            return bad(format!("outer_k must be >= 2, got {}", self.outer_k));
        }
        if self.inner_k < 2 {
            return bad(format!("inner_k must be >= 2, got {}", self.inner_k));
        }
        if self.max_features < 1 {
            return bad("max_features must be >= 1".into());
        }
        if !(self.corr_threshold > 0.0 && self.corr_threshold <= 1.0) {
            return bad(format!("corr_threshold must be in (0, 1], got {}", self.corr_threshold));
        }
        if let Some(a) = self.prefilter_alpha {
            if !(a > 0.0 && a <= 1.0) {
                return bad(format!("prefilter_alpha must be in (0, 1], got {a}"));
            }
        }
        if let Some(f) = self.holdout_fraction {
            if !(f > 0.0 && f < 1.0) {
                return bad(format!("holdout_fraction must be in (0, 1), got {f}"));
            }
        }
        if self.smote_k < 1 {
            return bad("smote_k must be >= 1".into());
        }
        Ok(())
    }

    /// SFS length bound for a training set of `n_train` rows.
    pub fn effective_max_features(&self, n_train: usize) -> usize {
        if self.max_features_guard {
            self.max_features.min(n_train / 7).max(1)
        } else {
            self.max_features
        }
    }
}
