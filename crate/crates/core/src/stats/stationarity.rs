//! Augmented Dickey–Fuller and KPSS tests with tabulated p-values.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::regression::{ols_fit, DesignMatrix};
use crate::series::TimeSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StationarityTest {
    Adf,
    Kpss,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationarityResult {
    pub test: StationarityTest,
    pub lag: usize,
    pub statistic: f64,
    pub p_value: f64,
    /// Set when the statistic lies outside the tabulated range and the
    /// p-value was clamped to the table boundary.
    pub p_clamped: bool,
    pub stationary_at_5pct: bool,
}

/// Dickey–Fuller critical values for the regression with constant and
/// linear trend. Rows are sample sizes, columns the probabilities in
/// [`ADF_PROBS`].
const ADF_SIZES: [f64; 6] = [25.0, 50.0, 100.0, 250.0, 500.0, 100_000.0];
const ADF_PROBS: [f64; 8] = [0.01, 0.025, 0.05, 0.10, 0.90, 0.95, 0.975, 0.99];
const ADF_TABLE: [[f64; 8]; 6] = [
    [-4.38, -3.95, -3.60, -3.24, -1.14, -0.80, -0.50, -0.15],
    [-4.15, -3.80, -3.50, -3.18, -1.19, -0.87, -0.58, -0.24],
    [-4.04, -3.73, -3.45, -3.15, -1.22, -0.90, -0.62, -0.28],
    [-3.99, -3.69, -3.43, -3.13, -1.23, -0.92, -0.64, -0.31],
    [-3.98, -3.68, -3.42, -3.13, -1.24, -0.93, -0.65, -0.32],
    [-3.96, -3.66, -3.41, -3.12, -1.25, -0.94, -0.66, -0.33],
];

/// KPSS level-stationarity critical values at 10%, 5%, 2.5% and 1%.
const KPSS_LEVEL_CRIT: [f64; 4] = [0.347, 0.463, 0.574, 0.739];
const KPSS_PROBS: [f64; 4] = [0.10, 0.05, 0.025, 0.01];

/// Piecewise-linear interpolation of `ys` over increasing `xs`, constant
/// beyond the ends. Returns the value and whether `x` fell outside the
/// interior of the table.
fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> (f64, bool) {
    let last = xs.len() - 1;
    if x <= xs[0] {
        return (ys[0], true);
    }
    if x >= xs[last] {
        return (ys[last], true);
    }
    let i = xs.partition_point(|&v| v <= x) - 1;
    let w = (x - xs[i]) / (xs[i + 1] - xs[i]);
    (ys[i] + w * (ys[i + 1] - ys[i]), false)
}

/// Default ADF lag order `floor((n - 1)^(1/3))`.
pub fn adf_default_lag(n: usize) -> usize {
    ((n.saturating_sub(1)) as f64).cbrt().floor() as usize
}

/// Default KPSS truncation lag `floor(4 (n / 100)^(1/4))`.
pub fn kpss_default_lag(n: usize) -> usize {
    (4.0 * (n as f64 / 100.0).powf(0.25)).floor() as usize
}

/// p-value of an ADF statistic for a regression on `n_diffs` first
/// differences. Returns the p-value and the clamping flag.
pub fn adf_p_value(statistic: f64, n_diffs: usize) -> (f64, bool) {
    let size = n_diffs as f64;
    let crit: Vec<f64> = (0..ADF_PROBS.len())
        .map(|j| {
            let col: Vec<f64> = ADF_TABLE.iter().map(|row| row[j]).collect();
            interpolate(&ADF_SIZES, &col, size).0
        })
        .collect();
    interpolate(&crit, &ADF_PROBS, statistic)
}

/// KPSS p-value for the level-stationarity statistic.
pub fn kpss_p_value(statistic: f64) -> (f64, bool) {
    interpolate(&KPSS_LEVEL_CRIT, &KPSS_PROBS, statistic)
}

/// ADF test with drift and deterministic trend:
/// `dy_t = a + b t + g y_{t-1} + sum_i d_i dy_{t-i} + e_t`.
/// The statistic is the t-ratio of `g`.
pub fn adf_test(s: &TimeSeries, lag: Option<usize>) -> Result<StationarityResult> {
    adf_test_values(s.values(), lag)
}

pub fn adf_test_values(y: &[f64], lag: Option<usize>) -> Result<StationarityResult> {
    let n = y.len();
    let lag = lag.unwrap_or_else(|| adf_default_lag(n));
    if n < lag + 10 {
        return Err(Error::TooShort {
            needed: lag + 10,
            got: n,
        });
    }
    let dy: Vec<f64> = y.windows(2).map(|w| w[1] - w[0]).collect();
    let rows = dy.len() - lag;
    let cols = 3 + lag;
    let mut data = Vec::with_capacity(rows * cols);
    let mut target = Vec::with_capacity(rows);
    for r in 0..rows {
        let t = r + lag;
        target.push(dy[t]);
        data.push(1.0);
        data.push(y[t]);
        data.push((t + 1) as f64);
        data.extend((1..=lag).map(|i| dy[t - i]));
    }
    let design = DesignMatrix::from_row_major(rows, cols, data, true)?;
    let fit = ols_fit(&design, &target)?;
    let statistic = fit.t_ratio(1);
    if !statistic.is_finite() {
        return Err(Error::SingularDesign { column: 1 });
    }
    let (p_value, p_clamped) = adf_p_value(statistic, dy.len());
    Ok(StationarityResult {
        test: StationarityTest::Adf,
        lag,
        statistic,
        p_value,
        p_clamped,
        stationary_at_5pct: p_value < 0.05,
    })
}

/// Newey–West long-run variance of `e` with Bartlett weights.
pub fn long_run_variance(e: &[f64], lag: usize) -> f64 {
    let n = e.len();
    let mut s2: f64 = e.iter().map(|v| v * v).sum::<f64>();
    for i in 1..=lag.min(n.saturating_sub(1)) {
        let gamma: f64 = (i..n).map(|j| e[j] * e[j - i]).sum();
        s2 += 2.0 * (1.0 - i as f64 / (lag as f64 + 1.0)) * gamma;
    }
    s2 / n as f64
}

/// KPSS test of level stationarity.
pub fn kpss_test(s: &TimeSeries, lag: Option<usize>) -> Result<StationarityResult> {
    kpss_test_values(s.values(), lag)
}

pub fn kpss_test_values(y: &[f64], lag: Option<usize>) -> Result<StationarityResult> {
    let n = y.len();
    if n < 10 {
        return Err(Error::TooShort { needed: 10, got: n });
    }
    let lag = lag.unwrap_or_else(|| kpss_default_lag(n));
    let mean = y.iter().sum::<f64>() / n as f64;
    let e: Vec<f64> = y.iter().map(|v| v - mean).collect();
    let mut partial = 0.0;
    let mut eta = 0.0;
    for v in &e {
        partial += v;
        eta += partial * partial;
    }
    eta /= (n * n) as f64;
    let s2 = long_run_variance(&e, lag);
    if !(s2 > 0.0) {
        return Err(Error::ZeroVariance("kpss input".into()));
    }
    let statistic = eta / s2;
    let (p_value, p_clamped) = kpss_p_value(statistic);
    Ok(StationarityResult {
        test: StationarityTest::Kpss,
        lag,
        statistic,
        p_value,
        p_clamped,
        stationary_at_5pct: p_value > 0.05,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_lags_for_annual_sample() {
        assert_eq!(adf_default_lag(51), 3);
        assert_eq!(kpss_default_lag(51), 3);
        assert_eq!(kpss_default_lag(100), 4);
    }

    #[test]
    fn adf_p_values_reproduce_tabulated_interpolation() {
        // 51 observations give 50 first differences: the exact n = 50 row.
        let (p, clamped) = adf_p_value(-1.45793, 50);
        assert!((p - 0.79229).abs() < 1e-5, "{p}");
        assert!(!clamped);
        let (p, _) = adf_p_value(-3.37277, 50);
        assert!((p - 0.06988).abs() < 1e-5, "{p}");
        let (p, _) = adf_p_value(-2.34265, 50);
        assert!((p - 0.436624).abs() < 1e-5, "{p}");
        assert_eq!(adf_p_value(-9.0, 50), (0.01, true));
        assert_eq!(adf_p_value(3.0, 50), (0.99, true));
    }

    #[test]
    fn kpss_p_values() {
        assert_eq!(kpss_p_value(1.191154), (0.01, true));
        assert_eq!(kpss_p_value(0.1), (0.10, true));
        let (p, clamped) = kpss_p_value(0.463);
        assert!((p - 0.05).abs() < 1e-12 && !clamped);
        let (p, _) = kpss_p_value((0.463 + 0.574) / 2.0);
        assert!((p - 0.0375).abs() < 1e-12);
    }

    #[test]
    fn kpss_alternating_series_by_hand() {
        let y: Vec<f64> = (0..10)
            .map(|i| if i % 2 == 0 { 1.0 } else { -1.0 })
            .collect();
        // Partial sums 1,0,1,0,... so sum S_t^2 = 5 and eta = 5 / 100.
        let r0 = kpss_test_values(&y, Some(0)).unwrap();
        assert!((r0.statistic - 0.05).abs() < 1e-15);
        // Lag 1: s2 = 1 + 2 * (1/2) * (-9 / 10) = 0.1.
        let r1 = kpss_test_values(&y, Some(1)).unwrap();
        assert!((r1.statistic - 0.5).abs() < 1e-12);
    }

    #[test]
    fn too_short_inputs() {
        assert!(matches!(
            kpss_test_values(&[1.0; 9], None),
            Err(Error::TooShort { .. })
        ));
        let y: Vec<f64> = (0..12).map(|i| (i as f64).sin()).collect();
        assert!(matches!(
            adf_test_values(&y, Some(3)),
            Err(Error::TooShort { .. })
        ));
    }

    #[test]
    fn deterministic_trend_is_singular_for_adf() {
        let y: Vec<f64> = (0..40).map(|i| 3.0 + 0.5 * i as f64).collect();
        assert!(matches!(
            adf_test_values(&y, None),
            Err(Error::SingularDesign { .. })
        ));
    }
}
