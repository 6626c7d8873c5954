use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::nested::{FeatureCount, NcvReport};
use super::{NcvError, Result};
use crate::mlcore::{MetricSet, ModelKind};

pub const REPORT_JSON: &str = "report.json";
pub const METRICS_CSV: &str = "metrics.csv";
pub const FREQUENCIES_CSV: &str = "frequencies.csv";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub metric: String,
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub model: ModelKind,
    pub rows: Vec<SummaryRow>,
    pub top_features: Vec<FeatureCount>,
}

/// Mean and std per metric plus the `top_m` most frequently selected features.
pub fn aggregate_and_rank(report: &NcvReport, top_m: usize) -> Summary {
    let rows = MetricSet::NAMES
        .iter()
        .zip(report.mean.values().iter().zip(report.std.values()))
        .map(|(name, (&mean, std))| SummaryRow { metric: name.to_string(), mean, std })
        .collect();
    Summary {
        model: report.model,
        rows,
        top_features: report.frequencies.iter().take(top_m).cloned().collect(),
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> NcvError + '_ {
    move |source| NcvError::Io { path: path.display().to_string(), source }
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> NcvError + '_ {
    move |e| NcvError::Format { path: path.display().to_string(), message: e.to_string() }
}

/// Writes `report.json`, `metrics.csv` and `frequencies.csv` into `dir`.
pub fn write_report_files(dir: &Path, reports: &[NcvReport]) -> Result<()> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;

    let path = dir.join(REPORT_JSON);
    let json = serde_json::to_string_pretty(reports)
        .map_err(|e| NcvError::Format { path: path.display().to_string(), message: e.to_string() })?;
    fs::write(&path, json + "\n").map_err(io_err(&path))?;

    let path = dir.join(METRICS_CSV);
    let mut w = csv::Writer::from_path(&path).map_err(csv_err(&path))?;
    let mut header = vec!["model", "fold"];
    header.extend(MetricSet::NAMES);
    w.write_record(&header).map_err(csv_err(&path))?;
    for r in reports {
        let mut rows: Vec<(String, [f64; 5])> =
            r.folds.iter().map(|f| (f.fold.to_string(), f.metrics.values())).collect();
        rows.push(("mean".into(), r.mean.values()));
        rows.push(("std".into(), r.std.values()));
        for (fold, values) in rows {
            let mut rec = vec![r.model.name().to_string(), fold];
            rec.extend(values.iter().map(|v| v.to_string()));
            w.write_record(&rec).map_err(csv_err(&path))?;
        }
    }
    w.flush().map_err(io_err(&path))?;

    let path = dir.join(FREQUENCIES_CSV);
    let mut w = csv::Writer::from_path(&path).map_err(csv_err(&path))?;
    w.write_record(["model", "feature", "count"]).map_err(csv_err(&path))?;
    for r in reports {
        for c in &r.frequencies {
            w.write_record([r.model.name(), &c.feature, &c.count.to_string()]).map_err(csv_err(&path))?;
        }
    }
    w.flush().map_err(io_err(&path))?;
    Ok(())
}

pub fn read_report_json(dir: &Path) -> Result<Vec<NcvReport>> {
    let path = dir.join(REPORT_JSON);
    let text = fs::read_to_string(&path).map_err(io_err(&path))?;
    serde_json::from_str(&text).map_err(|e| NcvError::Format { path: path.display().to_string(), message: e.to_string() })
}
