use serde::{Deserialize, Serialize};

use crate::imgfilt::{log_filter, wavelet_decompose};
use crate::imgvol::{Mask3D, Volume3D};

use super::{
    discretize, firstorder_features, glcm_features, glrlm_features, glszm_features, shape_features, FeatureError,
    FeatureVector, Result, FIRSTORDER_NAMES, GLCM_NAMES, GLRLM_NAMES, GLSZM_NAMES, SHAPE_NAMES,
};

/// Which derived images are generated and how intensities are binned.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExtractionConfig {
    pub n_bins: usize,
    pub log_sigmas_mm: Vec<f64>,
    pub wavelet: bool,
    /// Only `"haar"` is implemented.
    pub wavelet_basis: String,
}

impl Default for ExtractionConfig {
    fn default() -> Self {
        Self {
            n_bins: 32,
            log_sigmas_mm: vec![1.0, 3.0, 5.0],
            wavelet: true,
            wavelet_basis: "haar".to_string(),
        }
    }
}

impl ExtractionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_bins < 2 {
            return Err(FeatureError::Invalid(format!("n_bins must be >= 2, got {}", self.n_bins)));
        }
        if let Some(s) = self.log_sigmas_mm.iter().find(|s| !s.is_finite() || **s <= 0.0) {
            return Err(FeatureError::Invalid(format!("LoG sigma must be > 0, got {s}")));
        }
        let mut sorted = self.log_sigmas_mm.clone();
        sorted.sort_by(|a, b| a.total_cmp(b));
        sorted.dedup();
        if sorted.len() != self.log_sigmas_mm.len() {
            return Err(FeatureError::Invalid("duplicate LoG sigma".into()));
        }
        if self.wavelet && self.wavelet_basis != "haar" {
            return Err(FeatureError::Invalid(format!(
                "unsupported wavelet basis '{}' (only 'haar')",
                self.wavelet_basis
            )));
        }
        Ok(())
    }

    /// Image-type prefixes in extraction order.
    pub fn image_types(&self) -> Vec<String> {
        let mut out = vec!["original".to_string()];
        out.extend(self.log_sigmas_mm.iter().map(|&s| log_image_name(s)));
        if self.wavelet {
            out.extend(crate::imgfilt::BAND_LABELS.iter().map(|l| format!("wavelet-{l}")));
        }
        out
    }
}

fn log_image_name(sigma: f64) -> String {
    if sigma.fract() == 0.0 {
        format!("log-sigma-{sigma:.1}mm")
    } else {
        format!("log-sigma-{sigma}mm")
    }
}

/// Shape features plus four families on each image type.
pub fn expected_feature_count(config: &ExtractionConfig) -> usize {
    let per_image = FIRSTORDER_NAMES.len() + GLCM_NAMES.len() + GLRLM_NAMES.len() + GLSZM_NAMES.len();
    SHAPE_NAMES.len() + config.image_types().len() * per_image
}

/// Halves the mask grid by majority vote over each 2x2x2 block (odd axes
/// edge-replicated first). Blocks with 4 or more foreground voxels are
/// foreground. If that leaves nothing, any foreground voxel in a block counts.
pub fn decimate_mask_majority(mask: &Mask3D) -> Result<Mask3D> {
    let d = mask.dims();
    let out = [d[0].div_ceil(2), d[1].div_ceil(2), d[2].div_ceil(2)];
    let mut counts = Vec::with_capacity(out.iter().product());
    for z in 0..out[2] {
        for y in 0..out[1] {
            for x in 0..out[0] {
                let mut c = 0u8;
                for (dx, dy, dz) in (0..8).map(|b| (b & 1, (b >> 1) & 1, (b >> 2) & 1)) {
                    let (px, py, pz) = ((2 * x + dx).min(d[0] - 1), (2 * y + dy).min(d[1] - 1), (2 * z + dz).min(d[2] - 1));
                    c += mask.get(px, py, pz) as u8;
                }
                counts.push(c);
            }
        }
    }
    let majority: Vec<bool> = counts.iter().map(|&c| c >= 4).collect();
    if majority.iter().any(|&b| b) {
        return Ok(Mask3D::new(out, majority)?);
    }
    Ok(Mask3D::new(out, counts.iter().map(|&c| c > 0).collect())?)
}

fn image_families(vol: &Volume3D, mask: &Mask3D, n_bins: usize) -> Result<FeatureVector> {
    let mut fv = FeatureVector::new();
    fv.extend_prefixed("firstorder", firstorder_features(vol, mask, n_bins)?);
    let droi = discretize(vol, mask, n_bins)?;
    fv.extend_prefixed("glcm", glcm_features(&droi)?);
    fv.extend_prefixed("glrlm", glrlm_features(&droi)?);
    fv.extend_prefixed("glszm", glszm_features(&droi)?);
    Ok(fv)
}

/// Full feature vector for one preprocessed volume and its ROI.
pub fn extract_all(vol: &Volume3D, mask: &Mask3D, config: &ExtractionConfig) -> Result<FeatureVector> {
    config.validate()?;
    mask.check_matches(vol)?;
    if mask.is_empty_roi() {
        return Err(FeatureError::EmptyMask);
    }
    let mut out = FeatureVector::new();
    let mut shape = FeatureVector::new();
    shape.extend_prefixed("shape", shape_features(mask, vol.spacing())?);
    out.extend_prefixed("original", shape);
    out.extend_prefixed("original", image_families(vol, mask, config.n_bins)?);

    for &sigma in &config.log_sigmas_mm {
        let filtered = log_filter(vol, sigma)?;
        out.extend_prefixed(&log_image_name(sigma), image_families(&filtered, mask, config.n_bins)?);
    }

    if config.wavelet {
        let bands = wavelet_decompose(vol)?;
        let band_mask = decimate_mask_majority(mask)?;
        for (label, band) in bands.iter() {
            out.extend_prefixed(&format!("wavelet-{label}"), image_families(band, &band_mask, config.n_bins)?);
        }
    }
    if let Some(f) = out.iter().find(|f| !f.value.is_finite()) {
        return Err(FeatureError::Invalid(format!("feature {} is not finite", f.name)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phantom(n: usize) -> (Volume3D, Mask3D) {
        let c = (n as f64 - 1.0) / 2.0;
        let mask = Mask3D::from_fn([n; 3], |x, y, z| {
            [x, y, z].iter().map(|&v| (v as f64 - c).powi(2)).sum::<f64>() <= (n as f64 / 3.0).powi(2)
        })
        .unwrap();
        let vol = Volume3D::from_fn([n; 3], [1.0; 3], |x, y, z| ((x * 17 + y * 5 + z * 11) % 23) as f64 * 0.1 + (x as f64 * 0.3).sin()).unwrap();
        (vol, mask)
    }

    #[test]
    fn default_count_and_unique_names() {
        let cfg = ExtractionConfig::default();
        // 9 shape + (1 original + 3 LoG + 8 wavelet) * (16 + 10 + 12 + 10)
        assert_eq!(expected_feature_count(&cfg), 9 + 12 * 48);
        assert_eq!(expected_feature_count(&cfg), 585);
        let (v, m) = phantom(22);
        let f = extract_all(&v, &m, &cfg).unwrap();
        assert_eq!(f.len(), 585);
        let mut names = f.names();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), 585);
        assert!(f.get("original_glrlm_GrayLevelNonUniformityNormalized").is_some());
        assert!(f.get("log-sigma-3.0mm_glcm_Contrast").is_some());
        assert!(f.get("wavelet-HLH_glszm_ZoneEntropy").is_some());
        assert!(f.get("original_shape_VoxelVolume").is_some());
    }

    #[test]
    fn deterministic() {
        let (v, m) = phantom(22);
        let cfg = ExtractionConfig::default();
        assert_eq!(extract_all(&v, &m, &cfg).unwrap(), extract_all(&v, &m, &cfg).unwrap());
    }

    #[test]
    fn empty_mask_fails_first() {
        let (v, _) = phantom(20);
        let m = Mask3D::empty([20; 3]).unwrap();
        assert!(matches!(extract_all(&v, &m, &ExtractionConfig::default()), Err(FeatureError::EmptyMask)));
    }

    #[test]
    fn majority_vote_ties_to_foreground() {
        let m = Mask3D::from_fn([4, 2, 2], |x, _, z| x < 2 && z == 0 || x == 2 && z == 0).unwrap();
        // block 0 has 4 of 8 set, block 1 has 2 of 8
        let d = decimate_mask_majority(&m).unwrap();
        assert_eq!(d.voxels(), &[true, false]);
        let mut single = Mask3D::empty([4, 4, 4]).unwrap();
        single.set(3, 3, 3, true);
        assert_eq!(decimate_mask_majority(&single).unwrap().count(), 1);
    }

    #[test]
    fn rejects_bad_config() {
        let mut cfg = ExtractionConfig::default();
        cfg.wavelet_basis = "db4".into();
        assert!(cfg.validate().is_err());
        let cfg = ExtractionConfig {
            log_sigmas_mm: vec![1.0, 1.0],
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn normalized_texture_invariant_to_shift() {
        let (v, m) = phantom(16);
        let shifted = v.with_data(v.data().iter().map(|x| x + 123.5).collect()).unwrap();
        let a = discretize(&v, &m, 16).unwrap();
        let b = discretize(&shifted, &m, 16).unwrap();
        let fa = glrlm_features(&a).unwrap();
        let fb = glrlm_features(&b).unwrap();
        assert_eq!(fa, fb);
        assert_eq!(glcm_features(&a).unwrap(), glcm_features(&b).unwrap());
        assert_eq!(glszm_features(&a).unwrap(), glszm_features(&b).unwrap());
    }
}
