//! Prints a synthetic dataset as CSV; pass `--linear` for the noiseless one
//! and an integer to change the seed.

use steelcast::cli::write_csv;
use steelcast::synthetic;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let panel = if args.iter().any(|a| a == "--linear") {
        synthetic::linear_panel()
    } else {
        let seed = args
            .iter()
            .find_map(|a| a.parse().ok())
            .unwrap_or(synthetic::DEFAULT_SEED);
        synthetic::noisy_panel(seed)
    };
    print!("{}", write_csv(&panel));
}
