use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Result, SynthError};

/// Volumetric response category at follow-up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ResponseClass {
    /// Partial response: volume reduced by more than 20%.
    PR,
    /// Stable disease.
    SD,
    /// Progressive disease: volume increased by more than 20%.
    PD,
}

impl ResponseClass {
    /// Binary label: 1 for responders (PR), 0 otherwise.
    pub fn label(self) -> u8 {
        (self == ResponseClass::PR) as u8
    }

    pub fn name(self) -> &'static str {
        match self {
            ResponseClass::PR => "PR",
            ResponseClass::SD => "SD",
            ResponseClass::PD => "PD",
        }
    }
}

impl fmt::Display for ResponseClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Classifies the relative volume change; the +/-20% boundaries are SD.
pub fn label_from_volumes(baseline_cc: f64, followup_cc: f64) -> Result<ResponseClass> {
    if !(baseline_cc > 0.0 && followup_cc > 0.0 && baseline_cc.is_finite() && followup_cc.is_finite()) {
        return Err(SynthError::NonPositiveVolume { baseline: baseline_cc, followup: followup_cc });
    }
    let change = (followup_cc - baseline_cc) / baseline_cc;
    Ok(if change < -0.20 {
        ResponseClass::PR
    } else if change > 0.20 {
        ResponseClass::PD
    } else {
        ResponseClass::SD
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn categories() {
        assert_eq!(label_from_volumes(10.0, 7.0).unwrap(), ResponseClass::PR);
        assert_eq!(label_from_volumes(10.0, 10.0).unwrap(), ResponseClass::SD);
        assert_eq!(label_from_volumes(10.0, 13.0).unwrap(), ResponseClass::PD);
        assert_eq!(ResponseClass::PR.label(), 1);
        assert_eq!(ResponseClass::PD.label(), 0);
    }

    #[test]
    fn boundaries_are_stable_disease() {
        assert_eq!(label_from_volumes(10.0, 8.0).unwrap(), ResponseClass::SD);
        assert_eq!(label_from_volumes(10.0, 12.0).unwrap(), ResponseClass::SD);
        assert_eq!(label_from_volumes(10.0, 7.999).unwrap(), ResponseClass::PR);
    }

    #[test]
    fn non_positive_rejected() {
        assert!(label_from_volumes(0.0, 1.0).is_err());
        assert!(label_from_volumes(1.0, -1.0).is_err());
    }
}
