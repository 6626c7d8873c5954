use std::io::{Read, Write};

use ndarray::{Array2, ArrayView1, Axis};
use serde::{Deserialize, Serialize};

use super::{FeatureError, FeatureKind, FeatureVector, Result};

/// Patients x named features, with a kind tag per column and a binary label
/// per patient (1 = responder).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureTable {
    pub patient_ids: Vec<String>,
    pub labels: Vec<u8>,
    pub names: Vec<String>,
    pub kinds: Vec<FeatureKind>,
    pub values: Array2<f64>,
}

fn table_err(msg: impl Into<String>) -> FeatureError {
    FeatureError::Table(msg.into())
}

impl FeatureTable {
    pub fn new(
        patient_ids: Vec<String>,
        labels: Vec<u8>,
        names: Vec<String>,
        kinds: Vec<FeatureKind>,
        values: Array2<f64>,
    ) -> Result<Self> {
        let (rows, cols) = values.dim();
        if patient_ids.len() != rows || labels.len() != rows {
            return Err(table_err(format!(
                "{} ids / {} labels for {rows} rows",
                patient_ids.len(),
                labels.len()
            )));
        }
        if names.len() != cols || kinds.len() != cols {
            return Err(table_err(format!("{} names / {} kinds for {cols} columns", names.len(), kinds.len())));
        }
        if let Some(l) = labels.iter().find(|&&l| l > 1) {
            return Err(table_err(format!("label {l} is not binary")));
        }
        let mut sorted: Vec<&String> = names.iter().collect();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(table_err(format!("duplicate feature name {}", w[0])));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(table_err("non-finite feature value"));
        }
        Ok(Self {
            patient_ids,
            labels,
            names,
            kinds,
            values,
        })
    }

    /// Stacks per-patient vectors that share the same names in the same order.
    pub fn from_vectors(rows: Vec<(String, u8, FeatureVector)>) -> Result<Self> {
        let first = rows.first().ok_or_else(|| table_err("no rows"))?;
        let names: Vec<String> = first.2.names().into_iter().map(String::from).collect();
        let kinds: Vec<FeatureKind> = first.2.iter().map(|f| f.kind).collect();
        let mut values = Array2::zeros((rows.len(), names.len()));
        for (r, (id, _, fv)) in rows.iter().enumerate() {
            if fv.len() != names.len() || fv.iter().zip(&names).any(|(f, n)| &f.name != n) {
                return Err(table_err(format!("patient {id} has a different feature layout")));
            }
            for (c, f) in fv.iter().enumerate() {
                values[[r, c]] = f.value;
            }
        }
        let (ids, labels) = rows.into_iter().map(|(id, l, _)| (id, l)).unzip();
        Self::new(ids, labels, names, kinds, values)
    }

    pub fn n_rows(&self) -> usize {
        self.values.nrows()
    }

    pub fn n_features(&self) -> usize {
        self.values.ncols()
    }

    pub fn column(&self, j: usize) -> ArrayView1<'_, f64> {
        self.values.column(j)
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self {
            patient_ids: rows.iter().map(|&r| self.patient_ids[r].clone()).collect(),
            labels: rows.iter().map(|&r| self.labels[r]).collect(),
            names: self.names.clone(),
            kinds: self.kinds.clone(),
            values: self.values.select(Axis(0), rows),
        }
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self {
            patient_ids: self.patient_ids.clone(),
            labels: self.labels.clone(),
            names: cols.iter().map(|&c| self.names[c].clone()).collect(),
            kinds: cols.iter().map(|&c| self.kinds[c]).collect(),
            values: self.values.select(Axis(1), cols),
        }
    }

    /// Columns by name, in the order given.
    pub fn select_named(&self, names: &[String]) -> Result<Self> {
        let cols = names
            .iter()
            .map(|n| self.column_index(n).ok_or_else(|| table_err(format!("unknown feature {n}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.select_columns(&cols))
    }

    /// Writes `patient_id,label,<features...>`; floats use the shortest
    /// representation that round-trips.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec!["patient_id".to_string(), "label".to_string()];
        header.extend(self.names.iter().cloned());
        w.write_record(&header).map_err(|e| table_err(e.to_string()))?;
        for (r, row) in self.values.outer_iter().enumerate() {
            let mut rec = vec![self.patient_ids[r].clone(), self.labels[r].to_string()];
            rec.extend(row.iter().map(|v| format!("{v:?}")));
            w.write_record(&rec).map_err(|e| table_err(e.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads the CSV layout of [`Self::write_csv`]. Columns listed in
    /// `categorical` are tagged categorical, all others continuous.
    pub fn read_csv<R: Read>(reader: R, categorical: &[String]) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(reader);
        let header = rd.headers().map_err(|e| table_err(e.to_string()))?.clone();
        if header.len() < 3 || &header[0] != "patient_id" || &header[1] != "label" {
            return Err(table_err("header must start with patient_id,label and name at least one feature"));
        }
        let names: Vec<String> = header.iter().skip(2).map(String::from).collect();
        let kinds = names
            .iter()
            .map(|n| {
                if categorical.contains(n) {
                    FeatureKind::Categorical
                } else {
                    FeatureKind::Continuous
                }
            })
            .collect();
        let mut ids = Vec::new();
        let mut labels = Vec::new();
        let mut flat = Vec::new();
        for (line, rec) in rd.records().enumerate() {
            let rec = rec.map_err(|e| table_err(e.to_string()))?;
            if rec.len() != header.len() {
                return Err(table_err(format!("row {} has {} fields, expected {}", line + 1, rec.len(), header.len())));
            }
            ids.push(rec[0].to_string());
            labels.push(
                rec[1]
                    .trim()
                    .parse::<u8>()
                    .map_err(|_| table_err(format!("row {}: label '{}' is not 0/1", line + 1, &rec[1])))?,
            );
            for (k, field) in rec.iter().skip(2).enumerate() {
                let v: f64 = field
                    .trim()
                    .parse()
                    .map_err(|_| table_err(format!("row {}: '{}' in {} is not a number", line + 1, field, names[k])))?;
                flat.push(v);
            }
        }
        let values = Array2::from_shape_vec((ids.len(), names.len()), flat).map_err(|e| table_err(e.to_string()))?;
        Self::new(ids, labels, names, kinds, values)
    }
}
