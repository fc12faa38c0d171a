//! Annual series, aligned panels, and the reversible transforms applied to
//! them before model fitting (standardization and differencing).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A named annual series. Years run consecutively from `start_year`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    name: String,
    start_year: i32,
    values: Vec<f64>,
    unit: String,
}

impl TimeSeries {
    pub fn new(name: impl Into<String>, start_year: i32, values: Vec<f64>) -> Result<Self> {
        let name = name.into();
        if values.is_empty() {
            return Err(Error::TooShort { needed: 1, got: 0 });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidValue(format!(
                "`{name}` has a non-finite value at year {}",
                start_year + i as i32
            )));
        }
        Ok(Self {
            name,
            start_year,
            values,
            unit: String::new(),
        })
    }

    pub fn with_unit(mut self, unit: impl Into<String>) -> Self {
        self.unit = unit.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn start_year(&self) -> i32 {
        self.start_year
    }

    /// Last covered year, inclusive.
    pub fn end_year(&self) -> i32 {
        self.start_year + self.values.len() as i32 - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn unit(&self) -> &str {
        &self.unit
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn years(&self) -> impl Iterator<Item = i32> + '_ {
        (0..self.values.len()).map(move |i| self.start_year + i as i32)
    }

    /// Value observed in `year`, if covered.
    pub fn at(&self, year: i32) -> Option<f64> {
        let offset = year.checked_sub(self.start_year)?;
        usize::try_from(offset)
            .ok()
            .and_then(|i| self.values.get(i).copied())
    }

    /// Sub-series over `[from, to]`, both inclusive and inside the covered span.
    pub fn window(&self, from: i32, to: i32) -> Result<TimeSeries> {
        if from < self.start_year || to > self.end_year() || from > to {
            return Err(Error::NoCommonPeriod);
        }
        let lo = (from - self.start_year) as usize;
        let hi = (to - self.start_year) as usize;
        Ok(TimeSeries {
            name: self.name.clone(),
            start_year: from,
            values: self.values[lo..=hi].to_vec(),
            unit: self.unit.clone(),
        })
    }

    fn derived(&self, start_year: i32, values: Vec<f64>) -> TimeSeries {
        TimeSeries {
            name: self.name.clone(),
            start_year,
            values,
            unit: self.unit.clone(),
        }
    }
}

/// One named column of a [`Panel`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    pub values: Vec<f64>,
}

impl Column {
    pub fn new(name: impl Into<String>, values: Vec<f64>) -> Self {
        Self {
            name: name.into(),
            values,
        }
    }
}

/// A table of equally long columns sharing a year index, with one column
/// marked as the modelling target.
///
/// Panels produced by [`align`] or CSV ingestion cover consecutive years.
/// Row subsets (train/test splits, CV folds) keep the original year of each
/// row, so their year index may have gaps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Panel {
    years: Vec<i32>,
    columns: Vec<Column>,
    target: String,
}

impl Panel {
    pub fn new(years: Vec<i32>, columns: Vec<Column>, target: impl Into<String>) -> Result<Self> {
        let target = target.into();
        if columns.is_empty() {
            return Err(Error::Schema("panel has no columns".into()));
        }
        if years.is_empty() {
            return Err(Error::TooShort { needed: 1, got: 0 });
        }
        for (i, c) in columns.iter().enumerate() {
            if columns[..i].iter().any(|o| o.name == c.name) {
                return Err(Error::DuplicateName(c.name.clone()));
            }
            if c.values.len() != years.len() {
                return Err(Error::ShapeError(format!(
                    "column `{}` has {} values for {} years",
                    c.name,
                    c.values.len(),
                    years.len()
                )));
            }
        }
        if !columns.iter().any(|c| c.name == target) {
            return Err(Error::UnknownSeries(target));
        }
        Ok(Self {
            years,
            columns,
            target,
        })
    }

    pub fn years(&self) -> &[i32] {
        &self.years
    }

    pub fn start_year(&self) -> i32 {
        self.years[0]
    }

    pub fn end_year(&self) -> i32 {
        *self.years.last().expect("panel rows are non-empty")
    }

    pub fn n_rows(&self) -> usize {
        self.years.len()
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn target_name(&self) -> &str {
        &self.target
    }

    pub fn column(&self, name: &str) -> Result<&[f64]> {
        self.columns
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.values.as_slice())
            .ok_or_else(|| Error::UnknownSeries(name.to_string()))
    }

    pub fn target(&self) -> &[f64] {
        self.column(&self.target).expect("target is a column")
    }

    /// Non-target columns in panel order.
    pub fn predictors(&self) -> impl Iterator<Item = &Column> {
        self.columns.iter().filter(move |c| c.name != self.target)
    }

    pub fn predictor_names(&self) -> Vec<String> {
        self.predictors().map(|c| c.name.clone()).collect()
    }

    /// Predictor values as one feature vector per row.
    pub fn feature_rows(&self) -> Vec<Vec<f64>> {
        let preds: Vec<&Column> = self.predictors().collect();
        (0..self.n_rows())
            .map(|r| preds.iter().map(|c| c.values[r]).collect())
            .collect()
    }

    /// True when the year index has no gaps.
    pub fn is_consecutive(&self) -> bool {
        self.years.windows(2).all(|w| w[1] == w[0] + 1)
    }

    /// A column as a [`TimeSeries`]; fails for panels with gaps in the year index.
    pub fn series(&self, name: &str) -> Result<TimeSeries> {
        if !self.is_consecutive() {
            return Err(Error::InvalidState(
                "panel rows are not consecutive years".into(),
            ));
        }
        TimeSeries::new(name, self.start_year(), self.column(name)?.to_vec())
    }

    /// Rows at `indices`, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> Result<Panel> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.n_rows()) {
            return Err(Error::ShapeError(format!(
                "row {bad} out of range for {} rows",
                self.n_rows()
            )));
        }
        Ok(Panel {
            years: indices.iter().map(|&i| self.years[i]).collect(),
            columns: self
                .columns
                .iter()
                .map(|c| Column {
                    name: c.name.clone(),
                    values: indices.iter().map(|&i| c.values[i]).collect(),
                })
                .collect(),
            target: self.target.clone(),
        })
    }

    /// Same rows with a different target column.
    pub fn with_target(&self, target: &str) -> Result<Panel> {
        Panel::new(self.years.clone(), self.columns.clone(), target)
    }
}

/// Restricts every series to the largest common period and builds a panel.
pub fn align(series: &[TimeSeries], target: &str) -> Result<Panel> {
    if series.is_empty() {
        return Err(Error::Schema("no series to align".into()));
    }
    for (i, s) in series.iter().enumerate() {
        if series[..i].iter().any(|o| o.name == s.name) {
            return Err(Error::DuplicateName(s.name.clone()));
        }
    }
    if !series.iter().any(|s| s.name == target) {
        return Err(Error::UnknownSeries(target.to_string()));
    }
    let from = series.iter().map(TimeSeries::start_year).max().unwrap();
    let to = series.iter().map(TimeSeries::end_year).min().unwrap();
    if from > to {
        return Err(Error::NoCommonPeriod);
    }
    let columns = series
        .iter()
        .map(|s| {
            s.window(from, to).map(|w| Column {
                name: w.name,
                values: w.values,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Panel::new((from..=to).collect(), columns, target)
}

/// Mean and sample standard deviation removed by [`standardize`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StandardizationParams {
    pub mean: f64,
    pub std: f64,
}

impl StandardizationParams {
    /// Estimates mean and sample (n-1) standard deviation.
    pub fn fit(name: &str, values: &[f64]) -> Result<Self> {
        let n = values.len();
        if n < 2 {
            return Err(Error::TooShort { needed: 2, got: n });
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
        let std = (ss / (n - 1) as f64).sqrt();
        // Relative test so that a constant series with rounding noise in the
        // mean still counts as constant.
        let scale = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if !(std > 1e-14 * scale.max(f64::MIN_POSITIVE)) {
            return Err(Error::ZeroVariance(name.to_string()));
        }
        Ok(Self { mean, std })
    }

    pub fn apply(&self, x: f64) -> f64 {
        (x - self.mean) / self.std
    }

    pub fn invert(&self, z: f64) -> f64 {
        z * self.std + self.mean
    }
}

/// Rescales to zero mean and unit sample standard deviation.
pub fn standardize(s: &TimeSeries) -> Result<(TimeSeries, StandardizationParams)> {
    let params = StandardizationParams::fit(&s.name, &s.values)?;
    let values = s.values.iter().map(|&v| params.apply(v)).collect();
    Ok((s.derived(s.start_year, values), params))
}

pub fn invert_standardize(s: &TimeSeries, params: &StandardizationParams) -> Result<TimeSeries> {
    if !(params.std > 0.0) {
        return Err(Error::InvalidState(
            "standard deviation must be positive".into(),
        ));
    }
    let values = s.values.iter().map(|&z| params.invert(z)).collect();
    Ok(s.derived(s.start_year, values))
}

/// Bookkeeping for undoing `order` rounds of differencing.
///
/// `anchors[k]` is the first value of the level-`k` series (the value dropped
/// when producing level `k + 1`); `tails[k]` is its last value. Anchors
/// rebuild the original series; tails continue it past its end.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DifferenceState {
    pub order: usize,
    pub anchors: Vec<f64>,
    pub tails: Vec<f64>,
    pub start_year_out: i32,
}

impl DifferenceState {
    /// Integrates differences that follow the end of the differenced series,
    /// returning the continued original-level values.
    pub fn continue_levels(&self, future_diffs: &[f64]) -> Result<Vec<f64>> {
        if self.tails.len() != self.order {
            return Err(Error::InvalidState(format!(
                "{} tails for order {}",
                self.tails.len(),
                self.order
            )));
        }
        let mut current = future_diffs.to_vec();
        for &tail in self.tails.iter().rev() {
            let mut acc = tail;
            for v in current.iter_mut() {
                acc += *v;
                *v = acc;
            }
        }
        Ok(current)
    }
}

fn diff_once(values: &[f64]) -> Vec<f64> {
    values.windows(2).map(|w| w[1] - w[0]).collect()
}

/// Applies `d` rounds of first differencing, returning the differenced
/// values and the state needed to invert it.
pub(crate) fn difference_values(
    values: &[f64],
    d: usize,
) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    if values.len() <= d {
        return Err(Error::TooShort {
            needed: d + 1,
            got: values.len(),
        });
    }
    let mut anchors = Vec::with_capacity(d);
    let mut tails = Vec::with_capacity(d);
    let mut current = values.to_vec();
    for _ in 0..d {
        anchors.push(current[0]);
        tails.push(*current.last().unwrap());
        current = diff_once(&current);
    }
    Ok((current, anchors, tails))
}

pub fn difference(s: &TimeSeries, d: usize) -> Result<(TimeSeries, DifferenceState)> {
    let (values, anchors, tails) = difference_values(&s.values, d)?;
    let start = s.start_year + d as i32;
    Ok((
        s.derived(start, values),
        DifferenceState {
            order: d,
            anchors,
            tails,
            start_year_out: start,
        },
    ))
}

/// Inverse of [`difference`]: cumulative sums seeded from the anchors.
pub fn integrate(diffs: &TimeSeries, state: &DifferenceState) -> Result<TimeSeries> {
    if state.anchors.len() != state.order {
        return Err(Error::InvalidState(format!(
            "{} anchors for order {}",
            state.anchors.len(),
            state.order
        )));
    }
    if diffs.start_year != state.start_year_out {
        return Err(Error::InvalidState(format!(
            "differences start in {} but state expects {}",
            diffs.start_year, state.start_year_out
        )));
    }
    let mut current = diffs.values.clone();
    for &anchor in state.anchors.iter().rev() {
        let mut level = Vec::with_capacity(current.len() + 1);
        let mut acc = anchor;
        level.push(acc);
        for v in &current {
            acc += v;
            level.push(acc);
        }
        current = level;
    }
    Ok(diffs.derived(state.start_year_out - state.order as i32, current))
}
