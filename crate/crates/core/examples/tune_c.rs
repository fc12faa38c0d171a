//! Repeated 10-fold cross-validation over the default C grid.

use steelcast::eval::{tune_c, CvSpec, DEFAULT_C_GRID};
use steelcast::forecast::prepare;
use steelcast::svm::Kernel;
use steelcast::synthetic;

fn main() -> steelcast::Result<()> {
    let (panel, _) = prepare(&synthetic::noisy_panel(synthetic::DEFAULT_SEED), 2, None)?;
    let spec = CvSpec {
        folds: 10,
        repeats: 3,
        seed: 42,
    };
    let result = tune_c(&panel, &DEFAULT_C_GRID, Kernel::Linear, 0.1, &spec)?;
    for g in &result.grid {
        println!(
            "C = {:<5} RMSE {:.4} (sd {:.4})",
            g.c, g.mean_rmse, g.sd_rmse
        );
    }
    println!("best C = {}", result.best_c);
    Ok(())
}
