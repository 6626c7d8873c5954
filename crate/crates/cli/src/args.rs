use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use radvol_core::mlcore::ModelKind;

#[derive(Debug, Parser)]
#[command(name = "radvol", version, about = "Radiomics response-prediction pipeline with nested cross-validation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// TOML run configuration; built-in defaults when omitted.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Master seed, overriding the configured one.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic phantom cohort.
    Synth {
        #[command(flatten)]
        common: CommonArgs,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Preprocess a cohort and write the feature table CSV.
    Extract {
        #[command(flatten)]
        common: CommonArgs,
        /// Cohort directory containing clinical.csv and patient headers.
        #[arg(long)]
        cohort: PathBuf,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run nested cross-validation on a feature table.
    Ncv {
        #[command(flatten)]
        common: CommonArgs,
        /// Feature table CSV written by `extract`.
        #[arg(long)]
        features: PathBuf,
        /// ridge, tree, forest, gbt or all; defaults to the configured model.
        #[arg(long)]
        model: Option<ModelChoice>,
        /// Use one stratified holdout split with this test fraction instead
        /// of the outer k-fold loop.
        #[arg(long)]
        holdout: Option<f64>,
        /// Output directory for report.json, metrics.csv, frequencies.csv.
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the aggregate table and top features of an `ncv` run.
    Report {
        #[command(flatten)]
        common: CommonArgs,
        /// Directory written by `ncv`.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelChoice {
    One(ModelKind),
    All,
}

impl ModelChoice {
    pub fn kinds(self) -> Vec<ModelKind> {
        match self {
            ModelChoice::One(k) => vec![k],
            ModelChoice::All => ModelKind::ALL.to_vec(),
        }
    }
}

impl FromStr for ModelChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "all" {
            return Ok(ModelChoice::All);
        }
        s.parse().map(ModelChoice::One).map_err(|e: radvol_core::mlcore::ModelError| e.to_string())
    }
}
