//! Synthetic phantom cohorts with a controllable texture signal.
//!
//! Each patient is an ellipsoidal lesion in a noisy background. Inside the
//! lesion, Gaussian-smoothed white noise provides texture whose correlation
//! length grows with the texture effect size for responders, so the signal is
//! carried by texture rather than by mean intensity or shape. With both effect
//! sizes at 0 the labels are independent of everything that is generated.

mod cohort;
mod label;

pub use cohort::{generate_cohort, read_clinical_csv, simulate_patient, write_clinical_csv, ClinicalRecord, CohortSpec, SynthPatient, CLINICAL_CSV};
pub use label::{label_from_volumes, ResponseClass};

use thiserror::Error;

use crate::imgfilt::FilterError;
use crate::imgvol::VolumeError;

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("invalid cohort spec: {0}")]
    Spec(String),
    #[error("volumes must be positive, got baseline {baseline} cc and follow-up {followup} cc")]
    NonPositiveVolume { baseline: f64, followup: f64 },
    #[error(transparent)]
    Volume(#[from] VolumeError),
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

pub type Result<T> = std::result::Result<T, SynthError>;
