//! Ordinary least squares with the usual summary diagnostics.
//!
//! Fits are computed from a thin Householder QR factorisation. A column is
//! declared dependent when its diagonal entry in `R` falls below `1e-10`
//! times the largest column norm of the design.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::dist::f_survival;

const RANK_TOLERANCE: f64 = 1e-10;

/// Smallest overall p-value reported, following common statistical software.
pub const P_VALUE_FLOOR: f64 = 2.2e-16;

/// Dense row-major design matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
    intercept: bool,
}

impl DesignMatrix {
    /// Builds a design from regressor columns, optionally prepending a
    /// column of ones.
    pub fn from_columns(columns: &[&[f64]], intercept: bool) -> Result<Self> {
        let rows = match columns.first() {
            Some(c) => c.len(),
            None if intercept => {
                return Err(Error::ShapeError(
                    "intercept-only designs need an explicit row count".into(),
                ))
            }
            None => return Err(Error::ShapeError("design has no columns".into())),
        };
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::ShapeError("design columns differ in length".into()));
        }
        let cols = columns.len() + usize::from(intercept);
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            if intercept {
                data.push(1.0);
            }
            data.extend(columns.iter().map(|c| c[r]));
        }
        Self::from_row_major(rows, cols, data, intercept)
    }

    /// Intercept-only design with `rows` rows.
    pub fn intercept_only(rows: usize) -> Self {
        Self {
            rows,
            cols: 1,
            data: vec![1.0; rows],
            intercept: true,
        }
    }

    /// `data` holds `rows * cols` entries row by row. When `intercept` is set
    /// the first column is expected to be the constant column.
    pub fn from_row_major(
        rows: usize,
        cols: usize,
        data: Vec<f64>,
        intercept: bool,
    ) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeError(format!(
                "{} entries for a {rows}x{cols} design",
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidValue(
                "design contains non-finite entries".into(),
            ));
        }
        Ok(Self {
            rows,
            cols,
            data,
            intercept,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn intercept_included(&self) -> bool {
        self.intercept
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    fn to_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }
}

/// A fitted least-squares model and its summary statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub coefficients: Vec<f64>,
    pub coefficient_std_errors: Vec<f64>,
    pub residuals: Vec<f64>,
    pub rse: f64,
    pub r_squared: f64,
    pub adj_r_squared: f64,
    #[serde(with = "crate::extended_float")]
    pub f_statistic: f64,
    /// Overall F-test p-value, floored at [`P_VALUE_FLOOR`].
    pub f_p_value: f64,
    pub df_residual: usize,
    pub intercept_included: bool,
}

impl LinearModel {
    /// t-ratio `coefficient / std_error` for coefficient `j`.
    pub fn t_ratio(&self, j: usize) -> f64 {
        self.coefficients[j] / self.coefficient_std_errors[j]
    }

    pub fn n_obs(&self) -> usize {
        self.residuals.len()
    }
}

pub fn ols_fit(x: &DesignMatrix, y: &[f64]) -> Result<LinearModel> {
    let (n, p) = (x.rows, x.cols);
    if y.len() != n {
        return Err(Error::ShapeError(format!(
            "{} targets for {n} rows",
            y.len()
        )));
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidValue(
            "targets contain non-finite values".into(),
        ));
    }
    if n <= p || p == 0 {
        return Err(Error::Underdetermined { rows: n, cols: p });
    }

    let xm = x.to_matrix();
    let max_norm = xm.column_iter().map(|c| c.norm()).fold(0.0_f64, f64::max);
    let qr = xm.clone().qr();
    let r = qr.r();
    let q = qr.q();
    for j in 0..p {
        if r[(j, j)].abs() <= RANK_TOLERANCE * max_norm.max(f64::MIN_POSITIVE) {
            return Err(Error::SingularDesign { column: j });
        }
    }

    let yv = DVector::from_column_slice(y);
    let qty = q.transpose() * &yv;
    let beta = r
        .solve_upper_triangular(&qty)
        .ok_or(Error::SingularDesign { column: p - 1 })?;
    let fitted = &xm * &beta;
    let residuals: Vec<f64> = yv.iter().zip(fitted.iter()).map(|(a, b)| a - b).collect();

    let df_residual = n - p;
    let ss_res: f64 = residuals.iter().map(|e| e * e).sum();
    let mean_y = y.iter().sum::<f64>() / n as f64;
    let ss_tot: f64 = y.iter().map(|v| (v - mean_y).powi(2)).sum();
    let sigma2 = ss_res / df_residual as f64;

    let r_inv = r
        .clone()
        .try_inverse()
        .ok_or(Error::SingularDesign { column: p - 1 })?;
    let coefficient_std_errors = (0..p)
        .map(|j| (r_inv.row(j).norm_squared() * sigma2).sqrt())
        .collect();

    let r_squared = if ss_tot > 0.0 {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    } else {
        1.0
    };
    let adj_r_squared = 1.0 - (1.0 - r_squared) * (n as f64 - 1.0) / df_residual as f64;

    let df_model = p - usize::from(x.intercept);
    let (f_statistic, f_p_value) = if df_model == 0 {
        (0.0, 1.0)
    } else {
        let f = if ss_res > 0.0 {
            ((ss_tot - ss_res) / df_model as f64) / sigma2
        } else {
            f64::INFINITY
        };
        let pv = f_survival(f, df_model as f64, df_residual as f64);
        (f, pv.max(P_VALUE_FLOOR))
    };

    Ok(LinearModel {
        coefficients: beta.iter().copied().collect(),
        coefficient_std_errors,
        residuals,
        rse: sigma2.sqrt(),
        r_squared,
        adj_r_squared,
        f_statistic,
        f_p_value,
        df_residual,
        intercept_included: x.intercept,
    })
}

pub fn predict(model: &LinearModel, x: &DesignMatrix) -> Result<Vec<f64>> {
    if x.cols != model.coefficients.len() {
        return Err(Error::ShapeError(format!(
            "design has {} columns, model has {} coefficients",
            x.cols,
            model.coefficients.len()
        )));
    }
    Ok((0..x.rows)
        .map(|r| {
            x.row(r)
                .iter()
                .zip(&model.coefficients)
                .map(|(a, b)| a * b)
                .sum()
        })
        .collect())
}
