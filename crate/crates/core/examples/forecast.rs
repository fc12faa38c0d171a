//! Ten-year level forecast for the noisy and the noiseless synthetic panels.

use steelcast::forecast::{forecast, ForecastConfig};
use steelcast::synthetic;

fn main() -> steelcast::Result<()> {
    let noisy = forecast(
        &synthetic::noisy_panel(synthetic::DEFAULT_SEED),
        10,
        &ForecastConfig::default(),
    )?;
    let exact = ForecastConfig {
        epsilon: 0.0,
        c_grid: vec![1000.0],
        ..ForecastConfig::default()
    };
    let linear = forecast(&synthetic::linear_panel(), 10, &exact)?;
    println!("year   noisy    linear");
    for i in 0..noisy.horizon {
        println!(
            "{}  {:7.3}  {:8.4}",
            noisy.years[i], noisy.levels[i], linear.levels[i]
        );
    }
    Ok(())
}
