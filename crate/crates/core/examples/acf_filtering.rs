//! Hints validated against ACF hills and refined to integer periods.
//!
//! cargo run --example acf_filtering

use infoperiod::acf_filter::{acf_filtering, search_window, FilterConfig};
use infoperiod::hints::{get_period_hints, HintConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn main() -> infoperiod::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let noise = Normal::new(0.0, 1.2).unwrap();
    let x: Vec<f64> = (0..600)
        .map(|t| {
            let t = t as f64;
            (2.0 * std::f64::consts::PI * t / 52.0).sin() + 0.7 * (2.0 * std::f64::consts::PI * t / 150.0).sin() + noise.sample(&mut rng)
        })
        .collect();

    let hints = get_period_hints(&x, &HintConfig::default().with_confidence(0.5))?;
    for h in &hints {
        let w = search_window(x.len(), h.k)?;
        println!("hint k={:3} period={:6.1} window=[{}, {}]", h.k, h.period, w.start, w.end);
    }
    let filtered = acf_filtering(&x, &hints, &FilterConfig::default())?;
    for p in &filtered.periods {
        println!(
            "period {:4} (from hint {:.1}), slopes {:+.4}/{:+.4}, dtheta {:.4}",
            p.refined_period, p.source_hint.period, p.slope_left, p.slope_right, p.delta_theta
        );
    }
    println!("{} hint(s) rejected", filtered.rejected.len());
    Ok(())
}
