use std::path::Path;

use serde::{Deserialize, Serialize};

use radvol_core::ncv::NcvConfig;
use radvol_core::radfeat::ExtractionConfig;
use radvol_core::synth::CohortSpec;

use crate::CliError;

/// Preprocessing applied before feature extraction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExtractSettings {
    /// Isotropic voxel size after resampling.
    pub target_spacing_mm: f64,
    /// Degree of the log-polynomial bias field; 0 skips bias correction.
    pub bias_degree: usize,
    pub features: ExtractionConfig,
}

impl Default for ExtractSettings {
    fn default() -> Self {
        Self { target_spacing_mm: 1.0, bias_degree: 2, features: ExtractionConfig::default() }
    }
}

/// Whole-run configuration, read from TOML. Every section is optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Feature-table columns tested with chi-squared instead of Mann-Whitney.
    pub categorical_columns: Vec<String>,
    /// Number of features listed by `report`.
    pub top_features: usize,
    pub synth: CohortSpec,
    pub extract: ExtractSettings,
    pub ncv: NcvConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            categorical_columns: vec!["sex".to_string()],
            top_features: 5,
            synth: CohortSpec::default(),
            extract: ExtractSettings::default(),
            ncv: NcvConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::invalid(format!("config: {e}")))
    }

    /// Defaults when `path` is `None`.
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::invalid(format!("cannot read config {}: {e}", p.display())))?;
                Self::from_toml(&text).map_err(|e| CliError::invalid(format!("{}: {e}", p.display())))
            }
        }
    }

    /// Applies `--seed` to every seeded stage.
    pub fn with_seed(mut self, seed: Option<u64>) -> Self {
        if let Some(s) = seed {
            self.synth.seed = s;
            self.ncv.seed = s;
        }
        self
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.synth.validate().map_err(CliError::invalid)?;
        self.extract.features.validate().map_err(CliError::invalid)?;
        if !(self.extract.target_spacing_mm > 0.0 && self.extract.target_spacing_mm.is_finite()) {
            return Err(CliError::invalid("extract.target_spacing_mm must be > 0"));
        }
        if self.extract.bias_degree > 3 {
            return Err(CliError::invalid("extract.bias_degree must be 0..=3"));
        }
        self.ncv.validate().map_err(CliError::invalid)?;
        Ok(())
    }
}
