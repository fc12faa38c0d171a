//! JSON report documents. Every document carries `schema_version` and the
//! name of the command that produced it; unknown fields are rejected when
//! reading a report back.

use serde::{Deserialize, Serialize};

use crate::eval::{GridPoint, Metrics};
use crate::forecast::{Prediction, Preprocess};
use crate::stats::{CorrelationResult, StationarityResult};
use crate::svm::Kernel;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IouReport {
    pub schema_version: u32,
    pub command: String,
    pub consumption: String,
    pub output: String,
    pub start_year: i32,
    pub end_year: i32,
    pub n: usize,
    pub lambda: f64,
    pub lambda_std_error: f64,
    pub ln_delta: f64,
    pub ln_delta_std_error: f64,
    pub rse: f64,
    pub r_squared: f64,
    pub adj_r_squared: f64,
    #[serde(with = "crate::extended_float")]
    pub f_statistic: f64,
    pub f_p_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrelationRow {
    pub column: String,
    pub pearson: CorrelationResult,
    pub kendall: CorrelationResult,
    pub spearman: CorrelationResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrelationReport {
    pub schema_version: u32,
    pub command: String,
    pub target: String,
    pub n: usize,
    pub rows: Vec<CorrelationRow>,
}

/// ADF and KPSS results after `order` differences. A test that could not be
/// run records its error instead.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StationarityLevel {
    pub order: usize,
    pub adf: Option<StationarityResult>,
    pub adf_error: Option<String>,
    pub kpss: Option<StationarityResult>,
    pub kpss_error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StationarityRow {
    pub column: String,
    pub selected_order: usize,
    pub levels: Vec<StationarityLevel>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StationarityReport {
    pub schema_version: u32,
    pub command: String,
    pub max_diff: usize,
    pub columns: Vec<StationarityRow>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColumnOrder {
    pub column: String,
    pub order: usize,
}

/// Settings shared by the model-fitting reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSetup {
    pub target: String,
    pub preprocess: Preprocess,
    pub kernel: Kernel,
    pub epsilon: f64,
    pub folds: usize,
    pub repeats: usize,
    pub train_fraction: f64,
    pub seed: u64,
    pub orders: Vec<ColumnOrder>,
    pub warnings: Vec<String>,
    pub train_rows: usize,
    pub test_rows: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TuneReport {
    pub schema_version: u32,
    pub command: String,
    pub setup: ModelSetup,
    pub grid: Vec<GridPoint>,
    pub best_c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainReport {
    pub schema_version: u32,
    pub command: String,
    pub setup: ModelSetup,
    pub c: f64,
    pub n_support: usize,
    pub train_metrics: Metrics,
    pub test_metrics: Metrics,
    pub baseline_test_rmse: f64,
    pub test_predictions: Vec<Prediction>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForecastDocument {
    pub schema_version: u32,
    pub command: String,
    pub setup: ModelSetup,
    pub c: f64,
    pub horizon: usize,
    pub years: Vec<i32>,
    pub levels: Vec<f64>,
}
