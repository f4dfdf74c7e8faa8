//! Classic and Lomb-Scargle periodograms of a noisy two-tone sequence, plus
//! its circular ACF.
//!
//! cargo run --example periodogram

use infoperiod::spectrum::{Backend, SpectrumPlan};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn main() -> infoperiod::Result<()> {
    let n = 400;
    let noise = Normal::new(0.0, 0.5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let x: Vec<f64> = (0..n)
        .map(|t| {
            let t = t as f64;
            4.0 + (2.0 * std::f64::consts::PI * t / 40.0).sin()
                + 0.5 * (2.0 * std::f64::consts::PI * t / 8.0).cos()
                + noise.sample(&mut rng)
        })
        .collect();

    let plan = SpectrumPlan::new(n);
    for backend in [Backend::Classic, Backend::LombScargle] {
        let p = plan.periodogram(&x, backend)?;
        let mut top: Vec<usize> = (1..=p.len()).collect();
        top.sort_by(|&a, &b| p.power(b).unwrap().total_cmp(&p.power(a).unwrap()));
        println!("{backend}: {} bins", p.len());
        for k in &top[..3] {
            println!("  k={k:3}  period={:6.1}  power={:9.3}", p.period(*k), p.power(*k).unwrap());
        }
    }

    let acf = plan.acf(&x)?;
    println!("acf[0]={:.3} acf[40]={:.3} acf[20]={:.3}", acf.values[0], acf.values[40], acf.values[20]);
    Ok(())
}
