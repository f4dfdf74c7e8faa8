//! Permutation-thresholded period hints at several confidence levels.
//!
//! cargo run --example period_hints

use infoperiod::hints::{HintAnalysis, HintConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn main() -> infoperiod::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let noise = Normal::new(0.0, 1.0).unwrap();
    let x: Vec<f64> = (0..500)
        .map(|t| 0.6 * (2.0 * std::f64::consts::PI * t as f64 / 50.0).sin() + noise.sample(&mut rng))
        .collect();

    // One set of permutations serves every confidence level.
    let analysis = HintAnalysis::run(&x, &HintConfig::default())?;
    for cl in [0.50, 0.90, 0.99] {
        let hints = analysis.hints(cl);
        let periods: Vec<String> = hints.iter().map(|h| format!("{:.1}", h.period)).collect();
        println!(
            "CL {cl:.2}: threshold {:7.3}, {} hint(s): [{}]",
            analysis.null.threshold(cl),
            hints.len(),
            periods.join(", ")
        );
    }
    Ok(())
}
