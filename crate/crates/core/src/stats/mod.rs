//! Correlation and stationarity tests.

pub mod correlation;
pub mod dist;
pub mod stationarity;

pub use correlation::{
    correlation_suite, kendall_test, pearson_test, spearman_test, squared_rank_differences,
    t_from_r, CorrelationMethod, CorrelationResult,
};
pub use dist::{normal_cdf, student_t_cdf};
pub use stationarity::{
    adf_default_lag, adf_test, adf_test_values, kpss_default_lag, kpss_test, kpss_test_values,
    StationarityResult, StationarityTest,
};
