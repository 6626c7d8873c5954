use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, Context};

use radvol_core::imgvol::{
    correct_bias_field, load_volume, resample_mask_nearest, resample_trilinear, zscore_normalize, Mask3D, Volume3D,
};
use radvol_core::ncv::{aggregate_and_rank, read_report_json, run_nested_cv, write_report_files, NcvError, NcvReport};
use radvol_core::radfeat::{extract_all, FeatureKind, FeatureTable, FeatureVector};
use radvol_core::synth::{generate_cohort, read_clinical_csv, ClinicalRecord, SynthError, CLINICAL_CSV};

use crate::{Cli, CliError, Command, ExtractSettings, ModelChoice, RunConfig};

type Result<T> = std::result::Result<T, CliError>;

/// Dispatches a parsed command line; printable output goes to stdout.
pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Synth { common, out } => {
            let cfg = RunConfig::load(common.config.as_deref())?.with_seed(common.seed);
            let records = cmd_synth(&cfg, &out)?;
            println!("wrote {} patients to {}", records.len(), out.display());
        }
        Command::Extract { common, cohort, out } => {
            let cfg = RunConfig::load(common.config.as_deref())?.with_seed(common.seed);
            let table = cmd_extract(&cfg, &cohort, &out)?;
            println!("wrote {} rows x {} features to {}", table.n_rows(), table.n_features(), out.display());
        }
        Command::Ncv { common, features, model, holdout, out } => {
            let mut cfg = RunConfig::load(common.config.as_deref())?.with_seed(common.seed);
            if holdout.is_some() {
                cfg.ncv.holdout_fraction = holdout;
            }
            let reports = cmd_ncv(&cfg, &features, model, &out)?;
            print!("{}", format_summary(&reports, cfg.top_features));
        }
        Command::Report { common, out } => {
            let cfg = RunConfig::load(common.config.as_deref())?;
            print!("{}", cmd_report(&out, cfg.top_features)?);
        }
    }
    Ok(())
}

pub fn cmd_synth(cfg: &RunConfig, out_dir: &Path) -> Result<Vec<ClinicalRecord>> {
    cfg.synth.validate().map_err(CliError::invalid)?;
    generate_cohort(&cfg.synth, out_dir).map_err(|e| match e {
        SynthError::Spec(_) => CliError::invalid(e),
        e => CliError::Runtime(anyhow!(e).context("generating cohort")),
    })
}

/// Resample to isotropic spacing, correct the bias field, z-score, extract.
pub fn extract_patient(vol: &Volume3D, mask: &Mask3D, settings: &ExtractSettings) -> anyhow::Result<FeatureVector> {
    let target = [settings.target_spacing_mm; 3];
    let (vol, mask) = if vol.spacing() == target {
        (vol.clone(), mask.clone())
    } else {
        (resample_trilinear(vol, target)?, resample_mask_nearest(mask, vol.spacing(), target)?)
    };
    if mask.is_empty_roi() {
        return Err(anyhow!("mask is empty"));
    }
    let vol = if settings.bias_degree > 0 { correct_bias_field(&vol, &mask, settings.bias_degree)? } else { vol };
    let (vol, _) = zscore_normalize(&vol)?;
    Ok(extract_all(&vol, &mask, &settings.features)?)
}

/// Appends `age`, `dose_gy` and `sex` (F = 0, M = 1, categorical).
fn push_clinical(fv: &mut FeatureVector, r: &ClinicalRecord) -> anyhow::Result<()> {
    fv.push_continuous("age", r.age);
    fv.push_continuous("dose_gy", r.dose_gy);
    let sex = match r.sex.as_str() {
        "F" => 0.0,
        "M" => 1.0,
        other => return Err(anyhow!("sex must be F or M, got '{other}'")),
    };
    fv.push("sex", sex, FeatureKind::Categorical);
    Ok(())
}

pub fn cmd_extract(cfg: &RunConfig, cohort_dir: &Path, out_csv: &Path) -> Result<FeatureTable> {
    cfg.extract.features.validate().map_err(CliError::invalid)?;
    let records = read_clinical_csv(&cohort_dir.join(CLINICAL_CSV)).context("reading clinical table")?;
    if records.is_empty() {
        return Err(CliError::Runtime(anyhow!("{} lists no patients", CLINICAL_CSV)));
    }
    let mut rows = Vec::with_capacity(records.len());
    for r in &records {
        let fv = (|| -> anyhow::Result<FeatureVector> {
            let (vol, mask) = load_volume(cohort_dir.join(format!("{}.json", r.patient_id)))?;
            let mask = mask.ok_or_else(|| anyhow!("no mask referenced by the header"))?;
            let mut fv = extract_patient(&vol, &mask, &cfg.extract)?;
            push_clinical(&mut fv, r)?;
            Ok(fv)
        })()
        .with_context(|| format!("patient {}", r.patient_id))?;
        rows.push((r.patient_id.clone(), r.label, fv));
    }
    let table = FeatureTable::from_vectors(rows).context("assembling feature table")?;
    if let Some(parent) = out_csv.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    let file = fs::File::create(out_csv).with_context(|| format!("creating {}", out_csv.display()))?;
    table.write_csv(std::io::BufWriter::new(file)).with_context(|| format!("writing {}", out_csv.display()))?;
    Ok(table)
}

fn ncv_err(e: NcvError) -> CliError {
    match e {
        NcvError::Config(_) | NcvError::ClassTooSmall { .. } => CliError::invalid(e),
        e => CliError::Runtime(anyhow!(e)),
    }
}

pub fn cmd_ncv(cfg: &RunConfig, features_csv: &Path, model: Option<ModelChoice>, out_dir: &Path) -> Result<Vec<NcvReport>> {
    cfg.ncv.validate().map_err(ncv_err)?;
    let file = fs::File::open(features_csv).with_context(|| format!("opening {}", features_csv.display()))?;
    let table = FeatureTable::read_csv(std::io::BufReader::new(file), &cfg.categorical_columns)
        .map_err(|e| CliError::invalid(format!("{}: {e}", features_csv.display())))?;
    let kinds = model.unwrap_or(ModelChoice::One(cfg.ncv.model.kind)).kinds();
    let mut reports = Vec::with_capacity(kinds.len());
    for kind in kinds {
        let mut ncv = cfg.ncv.clone();
        ncv.model.kind = kind;
        reports.push(run_nested_cv(&table, &ncv).map_err(ncv_err)?);
    }
    write_report_files(out_dir, &reports).map_err(ncv_err)?;
    Ok(reports)
}

/// Aggregate table (mean +/- std per metric) followed by the top features.
pub fn format_summary(reports: &[NcvReport], top_m: usize) -> String {
    let mut s = String::new();
    let _ = write!(s, "{:<8}", "model");
    for m in radvol_core::mlcore::MetricSet::NAMES {
        let _ = write!(s, " {m:>15}");
    }
    s.push('\n');
    for r in reports {
        let _ = write!(s, "{:<8}", r.model.name());
        for row in aggregate_and_rank(r, top_m).rows {
            let _ = write!(s, " {:>15}", format!("{:.3} ± {:.3}", row.mean, row.std));
        }
        s.push('\n');
    }
    for r in reports {
        let summary = aggregate_and_rank(r, top_m);
        let _ = writeln!(s, "\ntop {} features ({}, {} folds):", top_m, r.model.name(), r.folds.len());
        for (i, c) in summary.top_features.iter().enumerate() {
            let _ = writeln!(s, "{:>3}. {} ({}/{})", i + 1, c.feature, c.count, r.folds.len());
        }
    }
    s
}

pub fn cmd_report(out_dir: &Path, top_m: usize) -> Result<String> {
    let reports = read_report_json(out_dir).map_err(|e| CliError::Runtime(anyhow!(e)))?;
    if reports.is_empty() {
        return Err(CliError::Runtime(anyhow!("{} contains no reports", out_dir.display())));
    }
    Ok(format_summary(&reports, top_m))
}
