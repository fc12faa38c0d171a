//! End-to-end consumption forecasting.
//!
//! Each column is differenced to its minimal ADF-stationary order and
//! standardized. An SVR with a cross-validated `C` maps transformed
//! predictors to the transformed target. Future predictors come from a
//! straight-line fit on their raw levels; they pass through the same
//! transforms, and the predicted target is destandardized and integrated
//! forward from the last observed levels.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::{
    compute_metrics, split, tune_c, CvSpec, Metrics, SplitSpec, TuneResult, DEFAULT_C_GRID,
};
use crate::series::{
    difference_values, Column, DifferenceState, Panel, StandardizationParams, TimeSeries,
};
use crate::stats::stationarity::adf_test_values;
use crate::svm::{train_svr, Kernel, KernelMachine, SvmProblem, SvrModel};

pub const MAX_DIFF: usize = 2;

/// Straight-line least-squares fit of `values` on `t = 0..n-1`, evaluated
/// at `t = n..n+horizon-1`.
pub fn extrapolate_linear(s: &TimeSeries, horizon: i64) -> Result<Vec<f64>> {
    if horizon < 0 {
        return Err(Error::BadHorizon(horizon));
    }
    let y = s.values();
    let n = y.len();
    if n < 2 {
        return Err(Error::TooShort { needed: 2, got: n });
    }
    let t_mean = (n - 1) as f64 / 2.0;
    let y_mean = y.iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, v) in y.iter().enumerate() {
        let dt = i as f64 - t_mean;
        sxy += dt * (v - y_mean);
        sxx += dt * dt;
    }
    let slope = sxy / sxx;
    Ok((0..horizon as usize)
        .map(|h| y_mean + slope * ((n + h) as f64 - t_mean))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preprocess {
    /// Standardize raw levels only.
    None,
    #[default]
    Difference,
}

/// How one column was transformed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnTransform {
    pub name: String,
    pub order: usize,
    /// ADF p-value at the chosen order; absent when the column is an exact
    /// deterministic trend or no test was run.
    pub adf_p_value: Option<f64>,
    /// Differencing state for the level window that feeds the aligned panel.
    pub difference: DifferenceState,
    pub standardization: StandardizationParams,
    /// Complete observed levels, used to continue the differences forward.
    #[serde(skip)]
    levels: Vec<f64>,
}

impl ColumnTransform {
    /// Transformed values for `future` levels that follow the observed ones.
    pub fn transform_future(&self, future: &[f64]) -> Result<Vec<f64>> {
        let mut all = self.levels.clone();
        all.extend_from_slice(future);
        let (diffs, _, _) = difference_values(&all, self.order)?;
        Ok(diffs[diffs.len() - future.len()..]
            .iter()
            .map(|&v| self.standardization.apply(v))
            .collect())
    }

    /// Levels that follow the observed series, given future transformed values.
    pub fn invert_future(&self, transformed: &[f64]) -> Result<Vec<f64>> {
        let diffs: Vec<f64> = transformed
            .iter()
            .map(|&z| self.standardization.invert(z))
            .collect();
        self.difference.continue_levels(&diffs)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineState {
    pub columns: Vec<ColumnTransform>,
    pub preprocess: Preprocess,
    pub warnings: Vec<String>,
    /// First year of the transformed panel.
    pub start_year: i32,
}

impl PipelineState {
    pub fn column(&self, name: &str) -> Result<&ColumnTransform> {
        self.columns
            .iter()
            .find(|c| c.name == name)
            .ok_or_else(|| Error::UnknownSeries(name.to_string()))
    }
}

fn choose_order(
    name: &str,
    values: &[f64],
    max_diff: usize,
    adf_lag: Option<usize>,
    warnings: &mut Vec<String>,
) -> Result<(usize, Option<f64>)> {
    for d in 0..=max_diff {
        let (diffs, _, _) = difference_values(values, d)?;
        match adf_test_values(&diffs, adf_lag) {
            Ok(r) if r.p_value < 0.05 => return Ok((d, Some(r.p_value))),
            Ok(r) if d == max_diff => {
                warnings.push(format!(
                    "{name}: not stationary after {d} difference(s) (ADF p = {:.4})",
                    r.p_value
                ));
                return Ok((d, Some(r.p_value)));
            }
            Ok(_) => {}
            Err(Error::SingularDesign { .. }) => {
                warnings.push(format!(
                    "{name}: exact deterministic trend at order {d}, no further differencing"
                ));
                return Ok((d, None));
            }
            Err(e) => return Err(e),
        }
    }
    unreachable!("loop returns at d = max_diff")
}

/// Differences every column to its minimal stationary order (at most
/// `max_diff`), trims all columns to the shortest common span and
/// standardizes them.
pub fn prepare(
    panel: &Panel,
    max_diff: usize,
    adf_lag: Option<usize>,
) -> Result<(Panel, PipelineState)> {
    prepare_with(panel, Preprocess::Difference, max_diff, adf_lag)
}

pub fn prepare_with(
    panel: &Panel,
    preprocess: Preprocess,
    max_diff: usize,
    adf_lag: Option<usize>,
) -> Result<(Panel, PipelineState)> {
    if max_diff > MAX_DIFF {
        return Err(Error::Config(format!(
            "max_diff must be at most {MAX_DIFF}, got {max_diff}"
        )));
    }
    if !panel.is_consecutive() {
        return Err(Error::InvalidState(
            "panel rows are not consecutive years".into(),
        ));
    }
    let mut warnings = Vec::new();
    let mut orders = Vec::with_capacity(panel.columns().len());
    for c in panel.columns() {
        orders.push(match preprocess {
            Preprocess::None => (0, None),
            Preprocess::Difference => {
                choose_order(&c.name, &c.values, max_diff, adf_lag, &mut warnings)?
            }
        });
    }
    let top = orders.iter().map(|o| o.0).max().unwrap_or(0);
    let n = panel.n_rows();
    if n < top + 2 {
        return Err(Error::TooShort {
            needed: top + 2,
            got: n,
        });
    }
    let start_year = panel.start_year() + top as i32;

    let mut columns = Vec::with_capacity(orders.len());
    let mut transforms = Vec::with_capacity(orders.len());
    for (c, &(order, adf_p_value)) in panel.columns().iter().zip(&orders) {
        let window = &c.values[top - order..];
        let (diffs, anchors, tails) = difference_values(window, order)?;
        let standardization = StandardizationParams::fit(&c.name, &diffs)?;
        columns.push(Column::new(
            c.name.clone(),
            diffs.iter().map(|&v| standardization.apply(v)).collect(),
        ));
        transforms.push(ColumnTransform {
            name: c.name.clone(),
            order,
            adf_p_value,
            difference: DifferenceState {
                order,
                anchors,
                tails,
                start_year_out: start_year,
            },
            standardization,
            levels: c.values.clone(),
        });
    }
    let out = Panel::new(panel.years()[top..].to_vec(), columns, panel.target_name())?;
    Ok((
        out,
        PipelineState {
            columns: transforms,
            preprocess,
            warnings,
            start_year,
        },
    ))
}

/// Kernel selection; an RBF width left unset defaults to the number of
/// predictors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum KernelChoice {
    Linear,
    Rbf { sigma_squared: Option<f64> },
}

impl KernelChoice {
    pub fn resolve(&self, n_predictors: usize) -> Result<Kernel> {
        match *self {
            KernelChoice::Linear => Ok(Kernel::Linear),
            KernelChoice::Rbf { sigma_squared } => {
                Kernel::rbf(sigma_squared.unwrap_or(n_predictors as f64))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForecastConfig {
    pub preprocess: Preprocess,
    pub kernel: KernelChoice,
    pub epsilon: f64,
    pub c_grid: Vec<f64>,
    pub folds: usize,
    pub repeats: usize,
    pub train_fraction: f64,
    pub seed: u64,
    pub max_diff: usize,
    pub adf_lag: Option<usize>,
}

impl Default for ForecastConfig {
    fn default() -> Self {
        Self {
            preprocess: Preprocess::Difference,
            kernel: KernelChoice::Linear,
            epsilon: 0.1,
            c_grid: DEFAULT_C_GRID.to_vec(),
            folds: 10,
            repeats: 3,
            train_fraction: 0.7,
            seed: 42,
            max_diff: MAX_DIFF,
            adf_lag: None,
        }
    }
}

impl ForecastConfig {
    pub fn cv_spec(&self) -> CvSpec {
        CvSpec {
            folds: self.folds,
            repeats: self.repeats,
            seed: self.seed,
        }
    }

    pub fn split_spec(&self) -> SplitSpec {
        SplitSpec {
            train_fraction: self.train_fraction,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForecastReport {
    pub years: Vec<i32>,
    pub levels: Vec<f64>,
    pub horizon: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub year: i32,
    pub actual: f64,
    pub predicted: f64,
}

/// A fitted model together with its evaluation on the held-out split.
/// Metrics and predictions are on the transformed target scale.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainedPipeline {
    pub state: PipelineState,
    pub transformed: Panel,
    pub kernel: Kernel,
    pub tuning: TuneResult,
    pub model: SvrModel,
    pub train_metrics: Metrics,
    pub test_metrics: Metrics,
    /// RMSE on the test rows of predicting the training-set target mean.
    pub baseline_test_rmse: f64,
    pub test_predictions: Vec<Prediction>,
}

fn predictions(model: &SvrModel, panel: &Panel) -> Result<Vec<Prediction>> {
    panel
        .feature_rows()
        .iter()
        .zip(panel.target())
        .zip(panel.years())
        .map(|((x, &actual), &year)| {
            Ok(Prediction {
                year,
                actual,
                predicted: model.decision(x)?,
            })
        })
        .collect()
}

fn metrics_of(p: &[Prediction]) -> Result<Metrics> {
    let (a, f): (Vec<f64>, Vec<f64>) = p.iter().map(|r| (r.actual, r.predicted)).unzip();
    compute_metrics(&a, &f)
}

/// Prepares the panel, splits it, tunes `C` by cross-validation on the
/// training rows and fits the final SVR on the training rows.
pub fn train_pipeline(panel: &Panel, config: &ForecastConfig) -> Result<TrainedPipeline> {
    if panel.predictors().next().is_none() {
        return Err(Error::Schema(
            "forecasting needs at least one predictor column".into(),
        ));
    }
    let (transformed, state) =
        prepare_with(panel, config.preprocess, config.max_diff, config.adf_lag)?;
    let kernel = config.kernel.resolve(panel.predictors().count())?;
    let parts = split(&transformed, &config.split_spec())?;
    let tuning = tune_c(
        &parts.train,
        &config.c_grid,
        kernel,
        config.epsilon,
        &config.cv_spec(),
    )?;
    let problem = SvmProblem::new(
        parts.train.feature_rows(),
        parts.train.target().to_vec(),
        tuning.best_c,
        config.epsilon,
    )?;
    let model = train_svr(&problem, kernel)?;
    let train_predictions = predictions(&model, &parts.train)?;
    let test_predictions = predictions(&model, &parts.test)?;
    let train_mean = parts.train.target().iter().sum::<f64>() / parts.train.n_rows() as f64;
    let baseline = compute_metrics(parts.test.target(), &vec![train_mean; parts.test.n_rows()])?;
    Ok(TrainedPipeline {
        train_metrics: metrics_of(&train_predictions)?,
        test_metrics: metrics_of(&test_predictions)?,
        baseline_test_rmse: baseline.rmse,
        test_predictions,
        state,
        transformed,
        kernel,
        tuning,
        model,
    })
}

impl TrainedPipeline {
    /// Target levels for the `horizon` years after the last observation.
    pub fn forecast(&self, panel: &Panel, horizon: i64) -> Result<ForecastReport> {
        if horizon < 1 {
            return Err(Error::BadHorizon(horizon));
        }
        let h = horizon as usize;
        let names = panel.predictor_names();
        let mut future_features = vec![Vec::with_capacity(names.len()); h];
        for name in &names {
            let raw = extrapolate_linear(&panel.series(name)?, horizon)?;
            let z = self.state.column(name)?.transform_future(&raw)?;
            for (row, v) in future_features.iter_mut().zip(z) {
                row.push(v);
            }
        }
        let predicted = future_features
            .iter()
            .map(|x| self.model.decision(x))
            .collect::<Result<Vec<_>>>()?;
        let levels = self
            .state
            .column(panel.target_name())?
            .invert_future(&predicted)?;
        Ok(ForecastReport {
            years: (1..=h as i32).map(|k| panel.end_year() + k).collect(),
            levels,
            horizon: h,
        })
    }
}

pub fn forecast(panel: &Panel, horizon: i64, config: &ForecastConfig) -> Result<ForecastReport> {
    if horizon < 1 {
        return Err(Error::BadHorizon(horizon));
    }
    train_pipeline(panel, config)?.forecast(panel, horizon)
}
