use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{label_from_volumes, ResponseClass, Result, SynthError};
use crate::imgfilt::gaussian_blur;
use crate::imgvol::{save_volume, Mask3D, Volume3D};
use crate::mlcore::derive_seed;

pub const CLINICAL_CSV: &str = "clinical.csv";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CohortSpec {
    pub n_patients: usize,
    pub responder_fraction: f64,
    pub dims: [usize; 3],
    pub spacing_mm: [f64; 3],
    /// Range of the ellipsoid semi-axes.
    pub lesion_radius_mm: [f64; 2],
    /// 0 gives class-independent texture, 1 the full correlation-length gap.
    pub texture_effect: f64,
    /// 0 makes age, dose and sex independent of the label.
    pub clinical_effect: f64,
    /// Amplitude of the smooth multiplicative intensity field (0 disables).
    pub bias_strength: f64,
    pub seed: u64,
}

impl Default for CohortSpec {
    fn default() -> Self {
        Self {
            n_patients: 104,
            responder_fraction: 0.644,
            dims: [64, 64, 64],
            spacing_mm: [1.0, 1.0, 1.0],
            lesion_radius_mm: [6.0, 12.0],
            texture_effect: 1.0,
            clinical_effect: 0.3,
            bias_strength: 0.05,
            seed: 0,
        }
    }
}

// Texture correlation length (Gaussian sigma, mm): non-responders draw from
// BASE + U(0, JITTER); responders are shifted by texture_effect * SHIFT.
const CORR_BASE_MM: f64 = 1.0;
const CORR_JITTER_MM: f64 = 0.8;
const CORR_SHIFT_MM: f64 = 1.0;
const BACKGROUND: f64 = 100.0;
const LESION_BASE: f64 = 150.0;

impl CohortSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(SynthError::Spec(m));
        if self.n_patients < 2 {
            return bad(format!("n_patients must be >= 2, got {}", self.n_patients));
        }
        if !(self.responder_fraction > 0.0 && self.responder_fraction < 1.0) {
            return bad(format!("responder_fraction must be in (0, 1), got {}", self.responder_fraction));
        }
        let n_pos = self.n_responders();
        if n_pos == 0 || n_pos == self.n_patients {
            return bad(format!("responder_fraction {} leaves a class empty", self.responder_fraction));
        }
        if let Some(d) = self.dims.iter().find(|&&d| d < 16) {
            return bad(format!("every dimension must be >= 16, got {d}"));
        }
        if self.spacing_mm.iter().any(|&s| !(s > 0.0 && s.is_finite())) {
            return bad("spacing must be positive".into());
        }
        let [rmin, rmax] = self.lesion_radius_mm;
        if !(rmin > 0.0 && rmin <= rmax) {
            return bad(format!("invalid lesion radius range [{rmin}, {rmax}]"));
        }
        for a in 0..3 {
            let extent = self.dims[a] as f64 * self.spacing_mm[a];
            if 2.0 * rmax + 4.0 * self.spacing_mm[a] > extent {
                return bad(format!("lesion radius {rmax} mm does not fit a {extent} mm axis"));
            }
        }
        for (name, v) in [("texture_effect", self.texture_effect), ("clinical_effect", self.clinical_effect)] {
            if !(0.0..=1.0).contains(&v) {
                return bad(format!("{name} must be in [0, 1], got {v}"));
            }
        }
        if !(0.0..=1.0).contains(&self.bias_strength) {
            return bad(format!("bias_strength must be in [0, 1], got {}", self.bias_strength));
        }
        Ok(())
    }

    pub fn n_responders(&self) -> usize {
        (self.n_patients as f64 * self.responder_fraction).round() as usize
    }

    /// Exactly `n_responders()` ones in seeded random order.
    pub fn labels(&self) -> Vec<u8> {
        let mut labels: Vec<u8> = (0..self.n_patients).map(|i| (i < self.n_responders()) as u8).collect();
        labels.shuffle(&mut ChaCha8Rng::seed_from_u64(derive_seed(self.seed, 0)));
        labels
    }

    pub fn patient_id(&self, index: usize) -> String {
        format!("patient_{:03}", index + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClinicalRecord {
    pub patient_id: String,
    pub age: f64,
    pub dose_gy: f64,
    pub sex: String,
    pub label: u8,
    pub sublabel: ResponseClass,
}

#[derive(Debug, Clone)]
pub struct SynthPatient {
    pub record: ClinicalRecord,
    pub volume: Volume3D,
    pub mask: Mask3D,
    pub baseline_cc: f64,
    pub followup_cc: f64,
    pub correlation_mm: f64,
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// Generates patient `index` of the cohort with the given label.
pub fn simulate_patient(spec: &CohortSpec, index: usize, label: u8) -> Result<SynthPatient> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(spec.seed, 1 + index as u64));
    let sign = if label == 1 { 1.0 } else { -1.0 };
    let [rmin, rmax] = spec.lesion_radius_mm;
    let sp = spec.spacing_mm;
    let extent: Vec<f64> = (0..3).map(|a| spec.dims[a] as f64 * sp[a]).collect();

    // geometry, independent of the label
    let radii: [f64; 3] = std::array::from_fn(|_| rng.random_range(rmin..=rmax));
    let center: [f64; 3] = std::array::from_fn(|a| {
        let slack = (extent[a] / 2.0 - radii[a] - 2.0 * sp[a]).max(0.0) * 0.5;
        extent[a] / 2.0 + rng.random_range(-1.0..=1.0) * slack
    });
    let mask = Mask3D::from_fn(spec.dims, |x, y, z| {
        let p = [x as f64 * sp[0], y as f64 * sp[1], z as f64 * sp[2]];
        (0..3).map(|a| ((p[a] - center[a]) / radii[a]).powi(2)).sum::<f64>() <= 1.0
    })?;

    // texture: the class-dependent component plus label-independent nuisance
    // heterogeneity (second texture scale, skew, amplitude, noise level and a
    // darker core), so that null cohorts are not driven by a single latent
    // parameter
    let correlation_mm =
        CORR_BASE_MM + rng.random_range(0.0..CORR_JITTER_MM) + spec.texture_effect * CORR_SHIFT_MM * label as f64;
    let nuisance_mm = rng.random_range(0.5..3.0);
    let nuisance_weight = rng.random_range(0.0..0.5);
    let skew = rng.random_range(-0.3..0.3);
    let amplitude = rng.random_range(12.0..28.0);
    let noise_sd = rng.random_range(2.0..5.0);
    let core_ratio: f64 = rng.random_range(0.0..0.5);
    let core_offset = rng.random_range(0.0..30.0);
    let lesion_base = LESION_BASE + 10.0 * normal(&mut rng);
    let bias: [f64; 3] = std::array::from_fn(|_| spec.bias_strength * rng.random_range(-1.0..=1.0));

    let n = spec.dims.iter().product::<usize>();
    let mut smooth_noise = |sigma: f64| -> Result<Vec<f64>> {
        let white: Vec<f64> = (0..n).map(|_| normal(&mut rng)).collect();
        let t = gaussian_blur(&Volume3D::new(spec.dims, sp, [0.0; 3], white)?, sigma)?.into_data();
        let inside: Vec<f64> = t.iter().zip(mask.voxels()).filter(|(_, &m)| m).map(|(v, _)| *v).collect();
        let mean = inside.iter().sum::<f64>() / inside.len() as f64;
        let sd = (inside.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / inside.len() as f64).sqrt().max(1e-12);
        Ok(t.into_iter().map(|v| (v - mean) / sd).collect())
    };
    let primary = smooth_noise(correlation_mm)?;
    let secondary = smooth_noise(nuisance_mm)?;

    let half: Vec<f64> = (0..3).map(|a| (spec.dims[a] as f64 - 1.0).max(1.0) / 2.0).collect();
    let mut data = Vec::with_capacity(n);
    for z in 0..spec.dims[2] {
        for y in 0..spec.dims[1] {
            for x in 0..spec.dims[0] {
                let i = mask.index(x, y, z);
                let clean = if mask.voxels()[i] {
                    let t = (1.0 - nuisance_weight) * primary[i] + nuisance_weight * secondary[i];
                    let p = [x as f64 * sp[0], y as f64 * sp[1], z as f64 * sp[2]];
                    let r2 = (0..3).map(|a| ((p[a] - center[a]) / radii[a]).powi(2)).sum::<f64>();
                    let core = if r2 < core_ratio * core_ratio { core_offset } else { 0.0 };
                    lesion_base - core + amplitude * (t + skew * (t * t - 1.0))
                } else {
                    BACKGROUND
                };
                let u = [x as f64 / half[0] - 1.0, y as f64 / half[1] - 1.0, z as f64 / half[2] - 1.0];
                let field = (bias[0] * u[0] + bias[1] * u[1] + bias[2] * u[2]).exp();
                data.push((clean + noise_sd * normal(&mut rng)).max(1.0) * field);
            }
        }
    }
    let volume = Volume3D::new(spec.dims, sp, [0.0; 3], data)?;

    // follow-up volume drawn away from the +/-20% boundaries
    let voxel_cc = sp.iter().product::<f64>() / 1000.0;
    let baseline_cc = mask.count() as f64 * voxel_cc;
    let change = if label == 1 {
        rng.random_range(-0.7..-0.25)
    } else if rng.random_bool(0.5) {
        rng.random_range(-0.15..0.15)
    } else {
        rng.random_range(0.25..0.7)
    };
    let followup_cc = baseline_cc * (1.0 + change);
    let sublabel = label_from_volumes(baseline_cc, followup_cc)?;
    debug_assert_eq!(sublabel.label(), label);

    let e = spec.clinical_effect;
    let age = 60.0 + 10.0 * normal(&mut rng) - 5.0 * e * sign;
    let dose_gy = 60.0 + 6.0 * normal(&mut rng) + 6.0 * e * sign;
    let male = rng.random_bool(0.5 + 0.25 * e * sign);
    Ok(SynthPatient {
        record: ClinicalRecord {
            patient_id: spec.patient_id(index),
            age,
            dose_gy,
            sex: if male { "M" } else { "F" }.to_string(),
            label,
            sublabel,
        },
        volume,
        mask,
        baseline_cc,
        followup_cc,
        correlation_mm,
    })
}

pub fn write_clinical_csv(path: &Path, records: &[ClinicalRecord]) -> Result<()> {
    let io = |source: std::io::Error| SynthError::Io { path: path.display().to_string(), source };
    let mut w = csv::Writer::from_path(path).map_err(|e| io(e.into()))?;
    for r in records {
        w.serialize(r).map_err(|e| io(e.into()))?;
    }
    w.flush().map_err(io)
}

pub fn read_clinical_csv(path: &Path) -> Result<Vec<ClinicalRecord>> {
    let io = |source: std::io::Error| SynthError::Io { path: path.display().to_string(), source };
    let mut r = csv::Reader::from_path(path).map_err(|e| io(e.into()))?;
    r.deserialize().map(|row| row.map_err(|e| io(e.into()))).collect()
}

/// Writes `patient_XXX.json` (+ raw data and mask) per patient and
/// `clinical.csv` into `out_dir`, returning the clinical records.
pub fn generate_cohort(spec: &CohortSpec, out_dir: &Path) -> Result<Vec<ClinicalRecord>> {
    spec.validate()?;
    fs::create_dir_all(out_dir).map_err(|source| SynthError::Io { path: out_dir.display().to_string(), source })?;
    let mut records = Vec::with_capacity(spec.n_patients);
    for (i, label) in spec.labels().into_iter().enumerate() {
        let p = simulate_patient(spec, i, label)?;
        save_volume(&p.volume, Some(&p.mask), out_dir.join(format!("{}.json", p.record.patient_id)))?;
        records.push(p.record);
    }
    write_clinical_csv(&out_dir.join(CLINICAL_CSV), &records)?;
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> CohortSpec {
        CohortSpec { n_patients: 10, dims: [24, 24, 24], lesion_radius_mm: [5.0, 7.0], ..Default::default() }
    }

    #[test]
    fn paper_label_count() {
        let spec = CohortSpec::default();
        assert_eq!(spec.n_responders(), 67);
        assert_eq!(spec.labels().iter().filter(|&&l| l == 1).count(), 67);
        assert_eq!(spec.labels(), spec.labels());
    }

    #[test]
    fn mask_volume_close_to_ellipsoid() {
        let spec = small();
        for i in 0..4 {
            let p = simulate_patient(&spec, i, (i % 2) as u8).unwrap();
            // reconstruct radii through the seeded stream
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(spec.seed, 1 + i as u64));
            let r: [f64; 3] = std::array::from_fn(|_| rng.random_range(5.0..=7.0));
            let analytic = 4.0 / 3.0 * std::f64::consts::PI * r[0] * r[1] * r[2] / 1000.0;
            assert!((p.baseline_cc - analytic).abs() / analytic < 0.05, "{} vs {analytic}", p.baseline_cc);
        }
    }

    #[test]
    fn sublabels_follow_labels() {
        let spec = small();
        for (i, l) in spec.labels().into_iter().enumerate() {
            let p = simulate_patient(&spec, i, l).unwrap();
            assert_eq!(p.record.sublabel.label(), l);
            assert_eq!(label_from_volumes(p.baseline_cc, p.followup_cc).unwrap(), p.record.sublabel);
            assert!(p.volume.data().iter().all(|v| v.is_finite() && *v > 0.0));
        }
    }

    #[test]
    fn correlation_length_tracks_effect() {
        let spec = small();
        let r = simulate_patient(&spec, 0, 1).unwrap().correlation_mm;
        let n = simulate_patient(&spec, 0, 0).unwrap().correlation_mm;
        assert!((r - n - 1.0).abs() < 1e-12);
        let null = CohortSpec { texture_effect: 0.0, ..small() };
        let r = simulate_patient(&null, 0, 1).unwrap().correlation_mm;
        let n = simulate_patient(&null, 0, 0).unwrap().correlation_mm;
        assert_eq!(r, n);
    }

    #[test]
    fn invalid_specs() {
        assert!(CohortSpec { responder_fraction: 1.5, ..small() }.validate().is_err());
        assert!(CohortSpec { dims: [8, 24, 24], ..small() }.validate().is_err());
        assert!(CohortSpec { lesion_radius_mm: [5.0, 30.0], ..small() }.validate().is_err());
        assert!(CohortSpec { texture_effect: 2.0, ..small() }.validate().is_err());
    }

    #[test]
    fn files_are_deterministic() {
        let spec = CohortSpec { n_patients: 3, ..small() };
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        generate_cohort(&spec, a.path()).unwrap();
        generate_cohort(&spec, b.path()).unwrap();
        let mut names: Vec<_> = fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
        names.sort();
        assert_eq!(names.len(), 3 * 3 + 1);
        for n in names {
            assert_eq!(fs::read(a.path().join(&n)).unwrap(), fs::read(b.path().join(&n)).unwrap());
        }
        let csv = fs::read_to_string(a.path().join(CLINICAL_CSV)).unwrap();
        assert!(csv.starts_with("patient_id,age,dose_gy,sex,label,sublabel\n"));
        let back = read_clinical_csv(&a.path().join(CLINICAL_CSV)).unwrap();
        assert_eq!(back.len(), 3);
        assert_eq!(back[0].patient_id, "patient_001");
    }
}
