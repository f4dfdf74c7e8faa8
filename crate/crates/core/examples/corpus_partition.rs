//! Detects a synthetic corpus and prints the Sigma / P1 / P2 report.
//!
//! cargo run --release --example corpus_partition

use infoperiod::analytics::{detect_corpus, partition_corpus, write_reports_csv, DetectorConfig};
use infoperiod::synth::{generate, SynthSpec};

fn main() -> infoperiod::Result<()> {
    let spec = SynthSpec {
        n_docs: 200,
        length: 500,
        periods: vec![45.0],
        amplitudes: vec![0.7],
        noise_sigma: 0.6,
        fraction_periodic: 0.25,
        ..Default::default()
    };
    let (docs, manifest) = generate(&spec)?;
    let det = detect_corpus(&docs, &DetectorConfig::default())?;
    let (partition, report) = partition_corpus(&det.results)?;

    let planted = manifest.periodic_ids().count();
    let found = manifest.periodic_ids().filter(|id| partition.p2.contains(*id)).count();
    println!("planted {planted}, recovered in P2 {found}, P2 size {}", report.p2);
    write_reports_csv(&[("synthetic", &report)], std::io::stdout())?;
    Ok(())
}
