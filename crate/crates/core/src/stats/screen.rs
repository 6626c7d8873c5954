use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::radfeat::{FeatureKind, FeatureTable};

use super::ranks::average_ranks;
use super::{chi2_independence, mann_whitney_u, pearson, Result, StatsError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestKind {
    MannWhitney,
    ChiSquared,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScreenEntry {
    pub name: String,
    pub kind: FeatureKind,
    pub test: TestKind,
    pub statistic: f64,
    pub p_value: f64,
    /// Set when the feature cannot discriminate at all (constant column or a
    /// single category); such entries carry p = 1.
    pub degenerate: bool,
}

/// One entry per feature, in table column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScreeningResult {
    pub entries: Vec<ScreenEntry>,
}

impl ScreeningResult {
    pub fn get(&self, name: &str) -> Option<&ScreenEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// Entries ordered by ascending p, ties broken by name.
    pub fn ranked(&self) -> Vec<&ScreenEntry> {
        let mut v: Vec<&ScreenEntry> = self.entries.iter().collect();
        v.sort_by(|a, b| a.p_value.total_cmp(&b.p_value).then_with(|| a.name.cmp(&b.name)));
        v
    }
}

fn check_labels(labels: &[u8]) -> Result<()> {
    if labels.iter().any(|&l| l > 1) || !labels.contains(&0) || !labels.contains(&1) {
        return Err(StatsError::InvalidLabels);
    }
    Ok(())
}

/// Tests every feature against the labels, dispatching on the feature kind.
pub fn univariate_screen(table: &FeatureTable) -> Result<ScreeningResult> {
    let labels = &table.labels;
    check_labels(labels)?;
    let mut entries = Vec::with_capacity(table.n_features());
    for (j, name) in table.names.iter().enumerate() {
        let col: Vec<f64> = table.column(j).to_vec();
        let kind = table.kinds[j];
        let entry = match kind {
            FeatureKind::Continuous => {
                let constant = col.iter().all(|&v| v == col[0]);
                if constant {
                    ScreenEntry {
                        name: name.clone(),
                        kind,
                        test: TestKind::MannWhitney,
                        statistic: 0.0,
                        p_value: 1.0,
                        degenerate: true,
                    }
                } else {
                    let g0: Vec<f64> = col.iter().zip(labels).filter(|(_, &l)| l == 0).map(|(v, _)| *v).collect();
                    let g1: Vec<f64> = col.iter().zip(labels).filter(|(_, &l)| l == 1).map(|(v, _)| *v).collect();
                    let r = mann_whitney_u(&g0, &g1)?;
                    ScreenEntry {
                        name: name.clone(),
                        kind,
                        test: TestKind::MannWhitney,
                        statistic: r.u,
                        p_value: r.p,
                        degenerate: false,
                    }
                }
            }
            FeatureKind::Categorical => match chi2_independence(&col, labels) {
                Ok((stat, p)) => ScreenEntry {
                    name: name.clone(),
                    kind,
                    test: TestKind::ChiSquared,
                    statistic: stat,
                    p_value: p,
                    degenerate: false,
                },
                Err(StatsError::SingleCategory(_)) => ScreenEntry {
                    name: name.clone(),
                    kind,
                    test: TestKind::ChiSquared,
                    statistic: 0.0,
                    p_value: 1.0,
                    degenerate: true,
                },
                Err(e) => return Err(e),
            },
        };
        entries.push(entry);
    }
    Ok(ScreeningResult { entries })
}

/// Greedy collinearity filter.
///
/// Features are visited by ascending p (ties by name). A continuous feature is
/// kept unless its |Spearman rho| with an already kept continuous feature
/// exceeds `threshold`; categorical features are not compared. Degenerate
/// features are dropped. Returns kept names in visiting order.
pub fn redundancy_filter(table: &FeatureTable, screening: &ScreeningResult, threshold: f64) -> Result<Vec<String>> {
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(StatsError::InvalidThreshold(threshold));
    }
    let mut kept: Vec<String> = Vec::new();
    let mut kept_ranks: Vec<Vec<f64>> = Vec::new();
    for entry in screening.ranked() {
        if entry.degenerate {
            continue;
        }
        let j = table
            .column_index(&entry.name)
            .ok_or_else(|| StatsError::LengthMismatch(screening.entries.len(), table.n_features()))?;
        match table.kinds[j] {
            FeatureKind::Categorical => kept.push(entry.name.clone()),
            FeatureKind::Continuous => {
                let ranks = average_ranks(&table.column(j).to_vec());
                let mut redundant = false;
                for other in &kept_ranks {
                    let rho = match pearson(&ranks, other) {
                        Ok(r) => r,
                        Err(StatsError::ConstantInput) => 0.0,
                        Err(e) => return Err(e),
                    };
                    if rho.abs() > threshold {
                        redundant = true;
                        break;
                    }
                }
                if !redundant {
                    kept.push(entry.name.clone());
                    kept_ranks.push(ranks);
                }
            }
        }
    }
    Ok(kept)
}

/// CSV with columns `feature,kind,statistic,p_value,kept`.
pub fn write_screen_report<W: Write>(mut w: W, screening: &ScreeningResult, kept: &[String]) -> std::io::Result<()> {
    writeln!(w, "feature,kind,statistic,p_value,kept")?;
    for e in &screening.entries {
        let kind = match e.kind {
            FeatureKind::Continuous => "continuous",
            FeatureKind::Categorical => "categorical",
        };
        let k = kept.iter().any(|n| n == &e.name) as u8;
        writeln!(w, "{},{},{:?},{:?},{}", e.name, kind, e.statistic, e.p_value, k)?;
    }
    Ok(())
}
