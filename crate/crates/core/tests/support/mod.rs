#![allow(dead_code)]

pub mod oracle;

use std::path::PathBuf;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

/// A single-column fixture file with a `value` header.
pub fn fixture_series(name: &str) -> Vec<f64> {
    let text = std::fs::read_to_string(fixture_path(name)).unwrap();
    text.lines()
        .skip(1)
        .map(|l| l.trim().parse().unwrap())
        .collect()
}

/// Statistics of the fixture series computed by statsmodels 0.14
/// (`adfuller(regression="ct", autolag=None)` and `kpss(regression="c")`).
/// Entries are (file, test, lag, statistic).
pub const REFERENCE_STATISTICS: [(&str, &str, usize, f64); 12] = [
    ("random_walk.csv", "adf", 0, -2.2200388947899765),
    ("random_walk.csv", "adf", 3, -2.1274705834984724),
    ("random_walk.csv", "kpss", 2, 0.43360441038078623),
    ("random_walk.csv", "kpss", 3, 0.34592514961758797),
    ("ar1.csv", "adf", 0, -3.684193619573941),
    ("ar1.csv", "adf", 4, -3.2514880293979616),
    ("ar1.csv", "kpss", 2, 0.26296212639172484),
    ("ar1.csv", "kpss", 3, 0.21849687980703872),
    ("trend_noise.csv", "adf", 0, -7.983648478880835),
    ("trend_noise.csv", "adf", 3, -4.416047787473197),
    ("trend_noise.csv", "kpss", 2, 1.7091700899021605),
    ("trend_noise.csv", "kpss", 3, 1.338308165255501),
];
