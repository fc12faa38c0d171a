//! Pearson, Kendall and Spearman tests of each predictor against the target.

use steelcast::stats::correlation_suite;
use steelcast::synthetic;

fn main() -> steelcast::Result<()> {
    let panel = synthetic::noisy_panel(synthetic::DEFAULT_SEED);
    println!(
        "{:<18} {:>8} {:>8} {:>8}",
        "column", "pearson", "kendall", "spearman"
    );
    for c in panel.predictors() {
        let [p, k, s] = correlation_suite(&c.values, panel.target())?;
        println!(
            "{:<18} {:>8.4} {:>8.4} {:>8.4}",
            c.name, p.coefficient, k.coefficient, s.coefficient
        );
    }
    Ok(())
}
