//! ADF and KPSS on a random walk and on white noise, then the differencing
//! orders chosen for the synthetic panel.

use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};
use rand_xoshiro::Xoshiro256PlusPlus;
use steelcast::forecast::prepare;
use steelcast::stats::{adf_test_values, kpss_test_values};
use steelcast::synthetic;

fn main() -> steelcast::Result<()> {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(1);
    let noise: Vec<f64> = (0..200).map(|_| StandardNormal.sample(&mut rng)).collect();
    let walk: Vec<f64> = noise
        .iter()
        .scan(0.0, |acc, e| {
            *acc += e;
            Some(*acc)
        })
        .collect();

    for (name, y) in [("random walk", &walk), ("white noise", &noise)] {
        let adf = adf_test_values(y, None)?;
        let kpss = kpss_test_values(y, None)?;
        println!(
            "{name:<12} ADF {:>7.3} (p {:.3})  KPSS {:.3} (p {:.3})",
            adf.statistic, adf.p_value, kpss.statistic, kpss.p_value
        );
    }

    let (_, state) = prepare(&synthetic::noisy_panel(synthetic::DEFAULT_SEED), 2, None)?;
    for c in &state.columns {
        println!("{:<18} d = {}", c.name, c.order);
    }
    Ok(())
}
