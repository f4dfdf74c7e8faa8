//! Synthetic surprisal corpora with planted periodicity.
//!
//! A periodic document is `mean + Σ_i a_i sin(2πn/T_i + φ_i) + N(0, σ²)` with
//! uniformly random phases (or one fixed phase); the rest are `mean + N(0, σ²)`. Which documents
//! carry the signal is recorded in a [`SynthManifest`].

use std::f64::consts::PI;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::data::{SurprisalDocument, UnitKind};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub n_docs: usize,
    pub length: usize,
    pub periods: Vec<f64>,
    /// One per period, or a single value shared by all periods.
    pub amplitudes: Vec<f64>,
    pub noise_sigma: f64,
    pub seed: u64,
    pub fraction_periodic: f64,
    pub mean: f64,
    /// Annotate sentence boundaries every `unit_length` tokens.
    #[serde(default)]
    pub unit_length: Option<usize>,
    /// Give aperiodic documents the same total variance as periodic ones
    /// (noise σ² inflated by Σ a_i² / 2).
    #[serde(default)]
    pub match_variance: bool,
    /// Shared phase for every planted component instead of a random one.
    #[serde(default)]
    pub phase: Option<f64>,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            n_docs: 100,
            length: 500,
            periods: vec![50.0],
            amplitudes: vec![1.0],
            noise_sigma: 0.3,
            seed: 42,
            fraction_periodic: 0.3,
            mean: 5.0,
            unit_length: None,
            match_variance: false,
            phase: None,
        }
    }
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.length < 4 {
            return bad(format!("length must be at least 4, got {}", self.length));
        }
        if !(0.0..=1.0).contains(&self.fraction_periodic) {
            return bad(format!("fraction must lie in [0, 1], got {}", self.fraction_periodic));
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return bad(format!("noise sigma must be finite and >= 0, got {}", self.noise_sigma));
        }
        let half = self.length as f64 / 2.0;
        for &t in &self.periods {
            if !(2.0..=half).contains(&t) {
                return bad(format!("period {t} outside [2, {half}]"));
            }
        }
        if self.periods.is_empty() && self.fraction_periodic > 0.0 {
            return bad("periodic documents requested but no period given".into());
        }
        if !(self.amplitudes.len() == 1 || self.amplitudes.len() == self.periods.len()) {
            return bad(format!(
                "{} amplitudes for {} periods",
                self.amplitudes.len(),
                self.periods.len()
            ));
        }
        if self.amplitudes.iter().any(|a| !a.is_finite()) || !self.mean.is_finite() || self.phase.is_some_and(|p| !p.is_finite()) {
            return bad("amplitudes and mean must be finite".into());
        }
        if self.unit_length == Some(0) {
            return bad("unit length must be positive".into());
        }
        Ok(())
    }

    fn amplitude(&self, i: usize) -> f64 {
        if self.amplitudes.len() == 1 {
            self.amplitudes[0]
        } else {
            self.amplitudes[i]
        }
    }

    pub fn periodic_count(&self) -> usize {
        (self.fraction_periodic * self.n_docs as f64).round() as usize
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub doc_id: String,
    pub periodic: bool,
    pub periods: Vec<f64>,
    pub amplitudes: Vec<f64>,
    pub phases: Vec<f64>,
}

/// Ground truth for a generated corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthManifest {
    pub spec: SynthSpec,
    pub docs: Vec<ManifestEntry>,
}

impl SynthManifest {
    pub fn periodic_ids(&self) -> impl Iterator<Item = &str> {
        self.docs.iter().filter(|d| d.periodic).map(|d| d.doc_id.as_str())
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

pub fn doc_id(i: usize) -> String {
    format!("synth-{i:05}")
}

/// Generates the corpus. Document `i` draws from ChaCha8 stream `i + 1` of
/// the seed; stream 0 picks which documents are periodic.
pub fn generate(spec: &SynthSpec) -> Result<(Vec<SurprisalDocument>, SynthManifest)> {
    spec.validate()?;
    let mut picker = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut order: Vec<usize> = (0..spec.n_docs).collect();
    order.shuffle(&mut picker);
    let mut periodic = vec![false; spec.n_docs];
    for &i in order.iter().take(spec.periodic_count()) {
        periodic[i] = true;
    }

    let signal_var: f64 = (0..spec.periods.len()).map(|i| spec.amplitude(i).powi(2) / 2.0).sum();
    let mut docs = Vec::with_capacity(spec.n_docs);
    let mut entries = Vec::with_capacity(spec.n_docs);
    for (i, &is_periodic) in periodic.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        rng.set_stream(i as u64 + 1);
        let sigma = if !is_periodic && spec.match_variance {
            (spec.noise_sigma.powi(2) + signal_var).sqrt()
        } else {
            spec.noise_sigma
        };
        let noise = Normal::new(0.0, sigma).map_err(|e| Error::Config(e.to_string()))?;
        let (periods, amplitudes, phases) = if is_periodic {
            let phases: Vec<f64> = spec
                .periods
                .iter()
                .map(|_| spec.phase.unwrap_or_else(|| rng.random_range(0.0..2.0 * PI)))
                .collect();
            let amps = (0..spec.periods.len()).map(|j| spec.amplitude(j)).collect();
            (spec.periods.clone(), amps, phases)
        } else {
            (Vec::new(), Vec::new(), Vec::new())
        };
        let values: Vec<f64> = (0..spec.length)
            .map(|n| {
                let planted: f64 = periods
                    .iter()
                    .zip(&amplitudes)
                    .zip(&phases)
                    .map(|((t, a), p)| a * (2.0 * PI * n as f64 / t + p).sin())
                    .sum();
                spec.mean + planted + noise.sample(&mut rng)
            })
            .collect();
        let id = doc_id(i);
        let mut doc = SurprisalDocument::new(id.clone(), values);
        if let Some(u) = spec.unit_length {
            doc = doc.with_units(UnitKind::Sentence, (1..).map(|j| j * u).take_while(|&b| b <= spec.length).collect());
        }
        docs.push(doc);
        entries.push(ManifestEntry {
            doc_id: id,
            periodic: is_periodic,
            periods,
            amplitudes,
            phases,
        });
    }
    Ok((
        docs,
        SynthManifest {
            spec: spec.clone(),
            docs: entries,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_manifest() {
        let spec = SynthSpec {
            n_docs: 100,
            length: 500,
            periods: vec![50.0],
            amplitudes: vec![1.0],
            noise_sigma: 0.3,
            seed: 1,
            fraction_periodic: 0.3,
            ..Default::default()
        };
        let (docs, manifest) = generate(&spec).unwrap();
        assert_eq!(docs.len(), 100);
        assert_eq!(manifest.periodic_ids().count(), 30);
        // Regenerating reproduces the manifest and the values.
        let (docs2, manifest2) = generate(&spec).unwrap();
        assert_eq!(manifest, manifest2);
        assert_eq!(docs, docs2);
        // Subtracting the recorded signal leaves noise around the mean.
        for (doc, entry) in docs.iter().zip(&manifest.docs) {
            doc.validate().unwrap();
            let resid: Vec<f64> = doc
                .values
                .iter()
                .enumerate()
                .map(|(n, v)| {
                    v - 5.0
                        - entry
                            .periods
                            .iter()
                            .zip(&entry.amplitudes)
                            .zip(&entry.phases)
                            .map(|((t, a), p)| a * (2.0 * PI * n as f64 / t + p).sin())
                            .sum::<f64>()
                })
                .collect();
            let var = resid.iter().map(|r| r * r).sum::<f64>() / resid.len() as f64;
            assert!((var.sqrt() - 0.3).abs() < 0.05, "{}: {}", doc.doc_id, var.sqrt());
        }
    }

    #[test]
    fn fixed_phase() {
        let spec = SynthSpec {
            n_docs: 5,
            fraction_periodic: 1.0,
            phase: Some(0.0),
            ..Default::default()
        };
        let (_, manifest) = generate(&spec).unwrap();
        assert!(manifest.docs.iter().all(|d| d.phases == vec![0.0]));
    }

    #[test]
    fn zero_fraction_is_pure_noise() {
        let spec = SynthSpec {
            fraction_periodic: 0.0,
            n_docs: 10,
            ..Default::default()
        };
        let (_, manifest) = generate(&spec).unwrap();
        assert!(manifest.docs.iter().all(|d| !d.periodic && d.periods.is_empty()));
    }

    #[test]
    fn boundary_period_two_accepted() {
        let spec = SynthSpec {
            periods: vec![2.0],
            length: 500,
            n_docs: 2,
            ..Default::default()
        };
        assert!(generate(&spec).is_ok());
        let too_long = SynthSpec {
            periods: vec![251.0],
            ..spec.clone()
        };
        assert!(too_long.validate().is_err());
        let too_short = SynthSpec {
            periods: vec![1.5],
            ..spec
        };
        assert!(too_short.validate().is_err());
    }

    #[test]
    fn invalid_fraction_and_amplitudes() {
        assert!(SynthSpec { fraction_periodic: 1.5, ..Default::default() }.validate().is_err());
        assert!(SynthSpec {
            periods: vec![20.0, 30.0, 40.0],
            amplitudes: vec![1.0, 2.0],
            ..Default::default()
        }
        .validate()
        .is_err());
    }

    #[test]
    fn unit_annotations() {
        let spec = SynthSpec {
            n_docs: 1,
            length: 95,
            periods: vec![20.0],
            unit_length: Some(10),
            ..Default::default()
        };
        let (docs, _) = generate(&spec).unwrap();
        assert_eq!(docs[0].units[&UnitKind::Sentence], (1..=9).map(|j| j * 10).collect::<Vec<_>>());
    }
}
