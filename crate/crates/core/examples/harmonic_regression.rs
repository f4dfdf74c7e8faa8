//! Harmonic regression under different scalers, and MSE by corpus portion.
//!
//! cargo run --release --example harmonic_regression

use infoperiod::analytics::{detect_corpus, partition_corpus, DetectorConfig};
use infoperiod::data::Portion;
use infoperiod::harmonic::{build_design_matrix, evaluate_mse_by_partition, fit_hr, HrDesign, Scaler};
use infoperiod::synth::{generate, SynthSpec};

fn main() -> infoperiod::Result<()> {
    // Sentence boundaries every 30 tokens; periodic docs oscillate in step.
    let spec = SynthSpec {
        n_docs: 60,
        length: 450,
        periods: vec![30.0],
        amplitudes: vec![0.8],
        noise_sigma: 0.5,
        fraction_periodic: 0.5,
        unit_length: Some(30),
        phase: Some(0.0),
        ..Default::default()
    };
    let (docs, _) = generate(&spec)?;
    let det = detect_corpus(&docs, &DetectorConfig::default())?;
    let (partition, _) = partition_corpus(&det.results)?;

    let fit = fit_hr(&build_design_matrix(&docs, &det.results, &HrDesign::new(Scaler::Sentence, 4))?)?;
    for h in fit.top_harmonics(2) {
        println!("k={} A={:.3} p(sin)={:.2e}", h.k, h.amplitude, h.sin.p_value);
    }

    let designs = [
        HrDesign::baseline_only(),
        HrDesign::new(Scaler::Sentence, 4),
        HrDesign::new(Scaler::ApsPeriod, 4),
        HrDesign::new(Scaler::Edu, 4),
    ];
    let table = evaluate_mse_by_partition(&docs, &det.results, &partition, &designs);
    for portion in Portion::ALL {
        let row: Vec<String> = (0..designs.len())
            .map(|d| table.get(portion, d).map_or("NA".into(), |v| format!("{v:.4}")))
            .collect();
        println!("{:<9} {}", portion.label(), row.join("  "));
    }
    Ok(())
}
