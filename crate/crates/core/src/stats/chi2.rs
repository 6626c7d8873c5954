use std::collections::BTreeMap;

use ordered_float::OrderedFloat;
use statrs::function::gamma::gamma_ur;

use super::{Result, StatsError};

/// Chi-square survival function, `Q(df / 2, x / 2)`.
pub fn chi2_sf(x: f64, df: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    gamma_ur(df / 2.0, x / 2.0).clamp(0.0, 1.0)
}

/// Pearson statistic for a table whose rows are categories and whose two
/// columns are the label classes. Returns `(chi2, df, p)`.
pub fn chi2_contingency(table: &[[f64; 2]]) -> Result<(f64, usize, f64)> {
    if table.len() < 2 {
        return Err(StatsError::SingleCategory(table.len()));
    }
    let col = [table.iter().map(|r| r[0]).sum::<f64>(), table.iter().map(|r| r[1]).sum::<f64>()];
    if col.iter().any(|&c| c <= 0.0) {
        return Err(StatsError::EmptyClass);
    }
    let total = col[0] + col[1];
    let mut stat = 0.0;
    for row in table {
        let row_total = row[0] + row[1];
        for k in 0..2 {
            let expected = row_total * col[k] / total;
            if expected <= 0.0 {
                return Err(StatsError::ZeroExpected);
            }
            stat += (row[k] - expected).powi(2) / expected;
        }
    }
    let df = table.len() - 1;
    Ok((stat, df, chi2_sf(stat, df as f64)))
}

/// Pearson chi-squared test of independence between a categorical feature
/// (any distinct values) and binary labels. Returns `(chi2, p)`.
pub fn chi2_independence(feature: &[f64], labels: &[u8]) -> Result<(f64, f64)> {
    if feature.len() != labels.len() {
        return Err(StatsError::LengthMismatch(feature.len(), labels.len()));
    }
    if labels.iter().any(|&l| l > 1) {
        return Err(StatsError::InvalidLabels);
    }
    let mut counts: BTreeMap<OrderedFloat<f64>, [f64; 2]> = BTreeMap::new();
    for (&v, &l) in feature.iter().zip(labels) {
        if !v.is_finite() {
            return Err(StatsError::NonFinite);
        }
        counts.entry(OrderedFloat(v)).or_insert([0.0; 2])[l as usize] += 1.0;
    }
    let table: Vec<[f64; 2]> = counts.into_values().collect();
    let (stat, _, p) = chi2_contingency(&table)?;
    Ok((stat, p))
}
