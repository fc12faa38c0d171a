//! Fits the consumption/output power law on the bundled synthetic panel.

use steelcast::iou::{fit_iou, intensity_of_use};
use steelcast::synthetic;

fn main() -> steelcast::Result<()> {
    let panel = synthetic::noisy_panel(synthetic::DEFAULT_SEED);
    let steel = panel.series("steel")?;
    let gdp = panel.series("gdp")?;

    let fit = fit_iou(&steel, &gdp)?;
    println!("lambda   {:.4}", fit.lambda);
    println!("ln delta {:.4}", fit.ln_delta);
    println!("R^2      {:.4}", fit.diagnostics.r_squared);

    let iu = intensity_of_use(&steel, &gdp)?;
    for (year, v) in iu.years().zip(iu.values()).step_by(10) {
        println!("{year}  IU = {v:.5}");
    }
    Ok(())
}
