use ndarray::{Array2, ArrayView1, Axis};

use super::{ModelError, Result};

/// Samples x features with binary labels (1 = responder).
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub x: Array2<f64>,
    pub y: Vec<u8>,
    pub names: Vec<String>,
}

impl Dataset {
    pub fn new(x: Array2<f64>, y: Vec<u8>, names: Vec<String>) -> Result<Self> {
        if x.nrows() != y.len() {
            return Err(ModelError::Shape(format!("{} rows but {} labels", x.nrows(), y.len())));
        }
        if x.ncols() != names.len() {
            return Err(ModelError::Shape(format!("{} columns but {} names", x.ncols(), names.len())));
        }
        if y.iter().any(|&l| l > 1) {
            return Err(ModelError::Shape("labels must be 0 or 1".into()));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(ModelError::NonFinite);
        }
        Ok(Self { x, y, names })
    }

    /// Convenience constructor with generated names `f0, f1, ...`.
    pub fn from_rows(rows: &[Vec<f64>], y: Vec<u8>) -> Result<Self> {
        let d = rows.first().map(|r| r.len()).unwrap_or(0);
        if rows.iter().any(|r| r.len() != d) {
            return Err(ModelError::Shape("ragged rows".into()));
        }
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        let x = Array2::from_shape_vec((rows.len(), d), flat).map_err(|e| ModelError::Shape(e.to_string()))?;
        Self::new(x, y, (0..d).map(|j| format!("f{j}")).collect())
    }

    pub fn n_samples(&self) -> usize {
        self.x.nrows()
    }

    pub fn n_features(&self) -> usize {
        self.x.ncols()
    }

    pub fn row(&self, i: usize) -> ArrayView1<'_, f64> {
        self.x.row(i)
    }

    pub fn class_counts(&self) -> [usize; 2] {
        let ones = self.y.iter().filter(|&&l| l == 1).count();
        [self.y.len() - ones, ones]
    }

    pub fn require_both_classes(&self) -> Result<()> {
        let c = self.class_counts();
        if c[0] == 0 || c[1] == 0 {
            return Err(ModelError::SingleClass);
        }
        Ok(())
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self {
            x: self.x.select(Axis(0), rows),
            y: rows.iter().map(|&r| self.y[r]).collect(),
            names: self.names.clone(),
        }
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self {
            x: self.x.select(Axis(1), cols),
            y: self.y.clone(),
            names: cols.iter().map(|&c| self.names[c].clone()).collect(),
        }
    }
}
