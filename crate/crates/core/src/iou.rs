//! Intensity of use and the log-linear consumption/output power law
//! `C_t = delta * Y_t^lambda`, fitted as `ln C_t = ln delta + lambda ln Y_t`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::regression::{ols_fit, DesignMatrix, LinearModel};
use crate::series::TimeSeries;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IouFit {
    /// Output elasticity of consumption.
    pub lambda: f64,
    pub ln_delta: f64,
    pub diagnostics: LinearModel,
    pub iu_series: TimeSeries,
}

impl IouFit {
    pub fn delta(&self) -> f64 {
        self.ln_delta.exp()
    }

    /// Consumption implied by the fitted power law at output `y`.
    pub fn consumption_at(&self, y: f64) -> f64 {
        self.delta() * y.powf(self.lambda)
    }
}

fn common_period(c: &TimeSeries, y: &TimeSeries) -> Result<(TimeSeries, TimeSeries)> {
    let from = c.start_year().max(y.start_year());
    let to = c.end_year().min(y.end_year());
    if from > to {
        return Err(Error::NoCommonPeriod);
    }
    Ok((c.window(from, to)?, y.window(from, to)?))
}

/// `IU_t = C_t / Y_t` over the common period of the two series.
pub fn intensity_of_use(c: &TimeSeries, y: &TimeSeries) -> Result<TimeSeries> {
    let (c, y) = common_period(c, y)?;
    if let Some((year, _)) = y.years().zip(y.values()).find(|(_, &v)| v <= 0.0) {
        return Err(Error::NonPositiveOutput { year });
    }
    let values = c
        .values()
        .iter()
        .zip(y.values())
        .map(|(a, b)| a / b)
        .collect();
    Ok(TimeSeries::new(
        format!("{}_per_{}", c.name(), y.name()),
        c.start_year(),
        values,
    )?
    .with_unit(format!("{} per {}", c.unit(), y.unit())))
}

pub fn fit_iou(c: &TimeSeries, y: &TimeSeries) -> Result<IouFit> {
    let (c, y) = common_period(c, y)?;
    if c.len() < 3 {
        return Err(Error::TooShort {
            needed: 3,
            got: c.len(),
        });
    }
    for s in [&c, &y] {
        if let Some((year, &value)) = s.years().zip(s.values()).find(|(_, &v)| v <= 0.0) {
            return Err(Error::NonPositiveInput { year, value });
        }
    }
    let ln_c: Vec<f64> = c.values().iter().map(|v| v.ln()).collect();
    let ln_y: Vec<f64> = y.values().iter().map(|v| v.ln()).collect();
    let design = DesignMatrix::from_columns(&[&ln_y], true)?;
    let diagnostics = ols_fit(&design, &ln_c)?;
    let iu_series = intensity_of_use(&c, &y)?;
    Ok(IouFit {
        lambda: diagnostics.coefficients[1],
        ln_delta: diagnostics.coefficients[0],
        diagnostics,
        iu_series,
    })
}
