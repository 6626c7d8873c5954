use radvol_core::imgvol::zscore_normalize;
use radvol_core::mlcore::roc_auc;
use radvol_core::radfeat::{extract_all, ExtractionConfig, FeatureTable};
use radvol_core::stats::spearman_rho;
use radvol_core::synth::{simulate_patient, CohortSpec};

fn extract_cohort(spec: &CohortSpec) -> FeatureTable {
    // original image only keeps this test quick
    let cfg = ExtractionConfig { log_sigmas_mm: vec![], wavelet: false, ..Default::default() };
    let rows = spec
        .labels()
        .into_iter()
        .enumerate()
        .map(|(i, l)| {
            let p = simulate_patient(spec, i, l).unwrap();
            let (vol, _) = zscore_normalize(&p.volume).unwrap();
            (p.record.patient_id, l, extract_all(&vol, &p.mask, &cfg).unwrap())
        })
        .collect();
    FeatureTable::from_vectors(rows).unwrap()
}

fn small_spec(texture_effect: f64, seed: u64) -> CohortSpec {
    CohortSpec {
        dims: [32, 32, 32],
        lesion_radius_mm: [6.0, 10.0],
        texture_effect,
        clinical_effect: 0.0,
        seed,
        ..Default::default()
    }
}

#[test]
fn null_cohort_features_are_unrelated_to_labels() {
    let t = extract_cohort(&small_spec(0.0, 21));
    assert_eq!(t.labels.iter().filter(|&&l| l == 1).count(), 67);
    let labels: Vec<f64> = t.labels.iter().map(|&l| l as f64).collect();
    let rhos: Vec<f64> = (0..t.n_features())
        .filter_map(|j| spearman_rho(&t.column(j).to_vec(), &labels).ok())
        .map(f64::abs)
        .collect();
    let mean = rhos.iter().sum::<f64>() / rhos.len() as f64;
    assert!(mean < 0.2, "mean |rho| = {mean}");
}

#[test]
fn texture_effect_yields_a_strong_texture_feature() {
    let t = extract_cohort(&small_spec(1.0, 22));
    let best = t
        .names
        .iter()
        .enumerate()
        .filter(|(_, n)| n.contains("_glcm_") || n.contains("_glrlm_"))
        .map(|(j, _)| {
            let auc = roc_auc(&t.column(j).to_vec(), &t.labels).unwrap();
            auc.max(1.0 - auc)
        })
        .fold(0.0, f64::max);
    assert!(best >= 0.85, "best texture AUC {best}");
}
