//! Detected periods against mean sentence and paragraph lengths.
//!
//! cargo run --release --example unit_comparison

use infoperiod::analytics::{detect_corpus, period_unit_comparison, DetectorConfig};
use infoperiod::data::UnitKind;
use infoperiod::synth::{generate, SynthSpec};

fn main() -> infoperiod::Result<()> {
    let spec = SynthSpec {
        n_docs: 80,
        length: 600,
        periods: vec![120.0],
        amplitudes: vec![1.5],
        noise_sigma: 0.5,
        fraction_periodic: 0.5,
        unit_length: Some(24),
        ..Default::default()
    };
    let (docs, _) = generate(&spec)?;
    // Paragraphs of five sentences.
    let docs: Vec<_> = docs
        .into_iter()
        .map(|d| {
            let n = d.len();
            d.with_units(UnitKind::Paragraph, (1..).map(|j| j * 120).take_while(|&b| b <= n).collect())
        })
        .collect();
    let det = detect_corpus(&docs, &DetectorConfig::default())?;
    let cmp = period_unit_comparison(&det.results, &docs)?;
    println!("{} periods", cmp.period_count);
    for (kind, mean) in &cmp.unit_mean_lengths {
        println!(
            "{kind:<9} mean {mean:6.1} tokens; periods longer: {:.1}%",
            100.0 * cmp.fraction_exceeding_unit_mean[kind]
        );
    }
    println!("periods > 100 tokens: {:.1}%", 100.0 * cmp.fraction_exceeding_100);
    Ok(())
}
