use std::fmt;
use std::str::FromStr;

use ndarray::{Array2, ArrayView1};
use serde::{Deserialize, Serialize};

use super::{
    train_forest, train_gbt, train_ridge, train_tree, Dataset, ForestModel, ForestParams, GbtModel, GbtParams, ModelError,
    Result, RidgeModel, TreeModel, TreeParams,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Ridge,
    Tree,
    Forest,
    Gbt,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [ModelKind::Ridge, ModelKind::Tree, ModelKind::Forest, ModelKind::Gbt];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Ridge => "ridge",
            ModelKind::Tree => "tree",
            ModelKind::Forest => "forest",
            ModelKind::Gbt => "gbt",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| ModelError::InvalidParam(format!("unknown model kind '{s}' (expected ridge, tree, forest or gbt)")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RidgeParams {
    pub lambda: f64,
}

impl Default for RidgeParams {
    fn default() -> Self {
        Self { lambda: 1.0 }
    }
}

/// Model family plus hyperparameters for every family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub ridge: RidgeParams,
    pub tree: TreeParams,
    pub forest: ForestParams,
    pub gbt: GbtParams,
}

impl Default for ModelSpec {
    fn default() -> Self {
        Self {
            kind: ModelKind::Forest,
            ridge: RidgeParams::default(),
            tree: TreeParams::default(),
            forest: ForestParams::default(),
            gbt: GbtParams::default(),
        }
    }
}

impl ModelSpec {
    pub fn with_kind(mut self, kind: ModelKind) -> Self {
        self.kind = kind;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TrainedModel {
    Ridge(RidgeModel),
    Tree(TreeModel),
    Forest(ForestModel),
    Gbt(GbtModel),
}

impl TrainedModel {
    pub fn kind(&self) -> ModelKind {
        match self {
            TrainedModel::Ridge(_) => ModelKind::Ridge,
            TrainedModel::Tree(_) => ModelKind::Tree,
            TrainedModel::Forest(_) => ModelKind::Forest,
            TrainedModel::Gbt(_) => ModelKind::Gbt,
        }
    }

    /// Ridge margins are thresholded at 0, probability-like scores at 0.5.
    pub fn threshold(&self) -> f64 {
        match self {
            TrainedModel::Ridge(_) => 0.0,
            _ => 0.5,
        }
    }

    pub fn score(&self, x: ArrayView1<'_, f64>) -> f64 {
        match self {
            TrainedModel::Ridge(m) => m.score(x),
            TrainedModel::Tree(m) => m.score(x),
            TrainedModel::Forest(m) => m.score(x),
            TrainedModel::Gbt(m) => m.score(x),
        }
    }

    pub fn scores(&self, x: &Array2<f64>) -> Vec<f64> {
        x.rows().into_iter().map(|r| self.score(r)).collect()
    }
}

/// Fits the family selected by `spec.kind`; `seed` only matters for forests.
pub fn train_model(data: &Dataset, spec: &ModelSpec, seed: u64) -> Result<TrainedModel> {
    Ok(match spec.kind {
        ModelKind::Ridge => TrainedModel::Ridge(train_ridge(data, spec.ridge.lambda)?),
        ModelKind::Tree => TrainedModel::Tree(train_tree(data, &spec.tree)?),
        ModelKind::Forest => TrainedModel::Forest(train_forest(data, &spec.forest, seed)?),
        ModelKind::Gbt => TrainedModel::Gbt(train_gbt(data, &spec.gbt)?),
    })
}
