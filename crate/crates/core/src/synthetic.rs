//! Seeded synthetic steel-demand panels for examples and tests.
//!
//! Each predictor is a straight line in the year index `t = 0..50`
//! (1967..2017) plus independent Gaussian noise; the target is a fixed
//! linear combination of the predictors plus its own noise term. Noise is
//! drawn column by column, row by row, from `Xoshiro256PlusPlus` seeded with
//! the given seed, and every value is rounded to four decimals.

use rand::SeedableRng;
use rand_distr::{Distribution, Normal};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::series::{Column, Panel};

pub const FIRST_YEAR: i32 = 1967;
pub const ROWS: usize = 51;
pub const TARGET: &str = "steel";
pub const DEFAULT_SEED: u64 = 42;

struct Predictor {
    name: &'static str,
    intercept: f64,
    slope: f64,
    noise_sd: f64,
    /// Weight in the target combination.
    weight: f64,
}

const PREDICTORS: [Predictor; 8] = [
    Predictor {
        name: "gdp",
        intercept: 100.0,
        slope: 6.0,
        noise_sd: 8.0,
        weight: 0.03125,
    },
    Predictor {
        name: "gdp_per_capita",
        intercept: 3000.0,
        slope: 40.0,
        noise_sd: 60.0,
        weight: 0.001953125,
    },
    Predictor {
        name: "manufacturing",
        intercept: 10.0,
        slope: 0.5,
        noise_sd: 0.8,
        weight: 0.125,
    },
    Predictor {
        name: "industry",
        intercept: 30.0,
        slope: 1.5,
        noise_sd: 2.0,
        weight: 0.0625,
    },
    Predictor {
        name: "oil_production",
        intercept: 180.0,
        slope: 1.5,
        noise_sd: 10.0,
        weight: 0.0078125,
    },
    Predictor {
        name: "energy_production",
        intercept: 200.0,
        slope: 3.0,
        noise_sd: 12.0,
        weight: 0.0078125,
    },
    Predictor {
        name: "rail_lines",
        intercept: 4500.0,
        slope: 80.0,
        noise_sd: 100.0,
        weight: 0.000244140625,
    },
    Predictor {
        name: "urban_population",
        intercept: 40.0,
        slope: 0.5,
        noise_sd: 0.5,
        weight: 0.0625,
    },
];

const TARGET_INTERCEPT: f64 = -8.0;
const TARGET_NOISE_SD: f64 = 0.3;

fn round4(v: f64) -> f64 {
    (v * 1e4).round() / 1e4
}

fn build(noise: Option<u64>) -> Panel {
    let round = if noise.is_some() {
        round4
    } else {
        std::convert::identity
    };
    let mut rng = noise.map(Xoshiro256PlusPlus::seed_from_u64);
    let mut draw = |sd: f64| match rng.as_mut() {
        Some(r) => Normal::new(0.0, sd).expect("positive sd").sample(r),
        None => 0.0,
    };
    let mut predictors = Vec::with_capacity(PREDICTORS.len());
    for p in &PREDICTORS {
        let values: Vec<f64> = (0..ROWS)
            .map(|t| round(p.intercept + p.slope * t as f64 + draw(p.noise_sd)))
            .collect();
        predictors.push(Column::new(p.name, values));
    }
    let target: Vec<f64> = (0..ROWS)
        .map(|t| {
            let combo: f64 = PREDICTORS
                .iter()
                .zip(&predictors)
                .map(|(p, c)| p.weight * c.values[t])
                .sum();
            round(TARGET_INTERCEPT + combo + draw(TARGET_NOISE_SD))
        })
        .collect();
    let mut columns = vec![Column::new(TARGET, target)];
    columns.extend(predictors);
    Panel::new(
        (FIRST_YEAR..FIRST_YEAR + ROWS as i32).collect(),
        columns,
        TARGET,
    )
    .expect("synthetic panel is well formed")
}

/// Linear trends with Gaussian noise.
pub fn noisy_panel(seed: u64) -> Panel {
    build(Some(seed))
}

/// The same trends without noise: every column, the target included, is an
/// exact straight line in the year.
pub fn linear_panel() -> Panel {
    build(None)
}
