//! Candidate periods from a permutation-thresholded periodogram.
//!
//! The sequence is shuffled `m` times; the largest periodogram power of each
//! shuffle is recorded and the sorted maxima form an empirical null
//! distribution of the maximum power. Frequencies of the unshuffled
//! periodogram whose power lies strictly above the chosen percentile of that
//! distribution become hints.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::spectrum::{Backend, Periodogram, SpectrumPlan, MIN_PERIODOGRAM_LEN};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HintConfig {
    pub permutations: usize,
    pub confidence: f64,
    pub seed: u64,
    pub backend: Backend,
}

impl Default for HintConfig {
    fn default() -> Self {
        Self {
            permutations: 100,
            confidence: 0.90,
            seed: 42,
            backend: Backend::LombScargle,
        }
    }
}

impl HintConfig {
    pub fn validate(&self) -> Result<()> {
        if self.permutations == 0 {
            return Err(Error::Config("permutations must be at least 1".into()));
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(Error::Config(format!(
                "confidence must lie in (0, 1), got {}",
                self.confidence
            )));
        }
        Ok(())
    }

    pub fn with_confidence(self, confidence: f64) -> Self {
        Self { confidence, ..self }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn with_backend(self, backend: Backend) -> Self {
        Self { backend, ..self }
    }
}

/// A candidate period `N / k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodHint {
    pub k: usize,
    pub period: f64,
    pub frequency: f64,
    pub power: f64,
    pub threshold: f64,
    pub confidence: f64,
}

/// Index into the ascending maxima selected by `confidence`:
/// `⌊m · confidence⌋`, clamped to the last element.
pub fn threshold_index(permutations: usize, confidence: f64) -> usize {
    // The epsilon keeps products such as 100 * 0.29 from rounding down.
    let idx = (permutations as f64 * confidence + 1e-9).floor() as usize;
    idx.min(permutations.saturating_sub(1))
}

/// Sorted maximum powers of `m` shuffles of one sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PermutationNull {
    pub max_powers: Vec<f64>,
    pub backend: Backend,
    pub seed: u64,
}

impl PermutationNull {
    /// Draws the null distribution. Shuffle `i` uses ChaCha8 stream `i` of
    /// `seed`, so the result does not depend on how runs are scheduled.
    pub fn sample(x: &[f64], permutations: usize, seed: u64, backend: Backend) -> Result<Self> {
        Self::sample_with_plan(&SpectrumPlan::new(x.len()), x, permutations, seed, backend)
    }

    pub fn sample_with_plan(
        plan: &SpectrumPlan,
        x: &[f64],
        permutations: usize,
        seed: u64,
        backend: Backend,
    ) -> Result<Self> {
        if x.len() < MIN_PERIODOGRAM_LEN {
            return Err(Error::TooShort {
                len: x.len(),
                min: MIN_PERIODOGRAM_LEN,
            });
        }
        if permutations == 0 {
            return Err(Error::Config("permutations must be at least 1".into()));
        }
        let mut max_powers = (0..permutations)
            .into_par_iter()
            .map(|run| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(run as u64);
                let mut shuffled = x.to_vec();
                shuffled.shuffle(&mut rng);
                plan.periodogram(&shuffled, backend).map(|p| p.max_power())
            })
            .collect::<Result<Vec<f64>>>()?;
        max_powers.sort_by(f64::total_cmp);
        Ok(Self {
            max_powers,
            backend,
            seed,
        })
    }

    pub fn permutations(&self) -> usize {
        self.max_powers.len()
    }

    pub fn threshold(&self, confidence: f64) -> f64 {
        let m = self.max_powers.len();
        if (m as f64) * (1.0 - confidence) < 1.0 {
            log::warn!(
                "{m} permutations cannot resolve confidence {confidence}; threshold is the largest observed maximum"
            );
        }
        self.max_powers[threshold_index(m, confidence)]
    }
}

/// Power threshold at `cfg.confidence` from `cfg.permutations` shuffles of `x`.
pub fn permutation_threshold(x: &[f64], cfg: &HintConfig) -> Result<f64> {
    cfg.validate()?;
    let null = PermutationNull::sample(x, cfg.permutations, cfg.seed, cfg.backend)?;
    Ok(null.threshold(cfg.confidence))
}

/// Every frequency index `k ≥ 1` whose power exceeds `threshold`, ascending in `k`.
pub fn hints_above(periodogram: &Periodogram, threshold: f64, confidence: f64) -> Vec<PeriodHint> {
    periodogram
        .powers
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > threshold)
        .map(|(i, &power)| {
            let k = i + 1;
            PeriodHint {
                k,
                period: periodogram.period(k),
                frequency: periodogram.frequency(k),
                power,
                threshold,
                confidence,
            }
        })
        .collect()
}

/// Everything the hint stage computes for one sequence; kept together so
/// callers (plots, multi-level reports) can re-threshold without reshuffling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HintAnalysis {
    pub periodogram: Periodogram,
    pub null: PermutationNull,
}

impl HintAnalysis {
    pub fn run(x: &[f64], cfg: &HintConfig) -> Result<Self> {
        Self::run_with_plan(&SpectrumPlan::new(x.len()), x, cfg)
    }

    pub fn run_with_plan(plan: &SpectrumPlan, x: &[f64], cfg: &HintConfig) -> Result<Self> {
        cfg.validate()?;
        let null = PermutationNull::sample_with_plan(plan, x, cfg.permutations, cfg.seed, cfg.backend)?;
        let periodogram = plan.periodogram(x, cfg.backend)?;
        Ok(Self { periodogram, null })
    }

    pub fn hints(&self, confidence: f64) -> Vec<PeriodHint> {
        hints_above(&self.periodogram, self.null.threshold(confidence), confidence)
    }
}

/// Candidate periods of `x` at `cfg.confidence`, ordered by ascending `k`.
pub fn get_period_hints(x: &[f64], cfg: &HintConfig) -> Result<Vec<PeriodHint>> {
    Ok(HintAnalysis::run(x, cfg)?.hints(cfg.confidence))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_distr::{Distribution, StandardNormal};

    fn noise(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
    }

    #[test]
    fn threshold_index_selection() {
        assert_eq!(threshold_index(100, 0.99), 99);
        assert_eq!(threshold_index(100, 0.90), 90);
        assert_eq!(threshold_index(100, 0.50), 50);
        assert_eq!(threshold_index(100, 0.29), 29);
        assert_eq!(threshold_index(1, 0.3), 0);
        assert_eq!(threshold_index(1, 0.99), 0);
        assert_eq!(threshold_index(10, 0.999), 9);
    }

    #[test]
    fn percentile_99_of_100_is_the_largest_maximum() {
        let x = noise(128, 3);
        let cfg = HintConfig {
            confidence: 0.99,
            ..Default::default()
        };
        let null = PermutationNull::sample(&x, 100, cfg.seed, cfg.backend).unwrap();
        assert_eq!(null.threshold(0.99), *null.max_powers.last().unwrap());
        assert_eq!(permutation_threshold(&x, &cfg).unwrap(), null.threshold(0.99));
    }

    #[test]
    fn single_permutation_clamps() {
        let x = noise(64, 4);
        let cfg = HintConfig {
            permutations: 1,
            confidence: 0.5,
            ..Default::default()
        };
        let null = PermutationNull::sample(&x, 1, cfg.seed, cfg.backend).unwrap();
        assert_eq!(permutation_threshold(&x, &cfg).unwrap(), null.max_powers[0]);
    }

    #[test]
    fn invalid_configs() {
        let x = noise(64, 5);
        for cfg in [
            HintConfig { permutations: 0, ..Default::default() },
            HintConfig { confidence: 1.5, ..Default::default() },
            HintConfig { confidence: 0.0, ..Default::default() },
        ] {
            assert!(matches!(get_period_hints(&x, &cfg), Err(Error::Config(_))));
        }
        assert!(matches!(
            get_period_hints(&[1.0, 2.0, 3.0], &HintConfig::default()),
            Err(Error::TooShort { .. })
        ));
    }

    #[test]
    fn constant_sequence_has_no_hints() {
        for backend in [Backend::Classic, Backend::LombScargle] {
            let cfg = HintConfig { backend, ..Default::default() };
            assert!(get_period_hints(&vec![2.0; 200], &cfg).unwrap().is_empty());
        }
    }

    #[test]
    fn planted_on_grid_cosine_gives_one_hint() {
        let n = 500;
        let eps = noise(n, 11);
        let x: Vec<f64> = (0..n)
            .map(|t| (2.0 * std::f64::consts::PI * t as f64 * 10.0 / n as f64).cos() + 0.1 * eps[t])
            .collect();
        let cfg = HintConfig {
            confidence: 0.99,
            ..Default::default()
        };
        let hints = get_period_hints(&x, &cfg).unwrap();
        // Brute-force comparison of every bin against the threshold.
        let threshold = permutation_threshold(&x, &cfg).unwrap();
        let p = crate::spectrum::periodogram(&x, cfg.backend).unwrap();
        let expected: Vec<usize> = (1..=p.len()).filter(|&k| p.power(k).unwrap() > threshold).collect();
        assert_eq!(hints.iter().map(|h| h.k).collect::<Vec<_>>(), expected);
        assert_eq!(expected, vec![10]);
        assert_eq!(hints[0].period, 50.0);
        assert!(hints[0].power > hints[0].threshold);
    }

    #[test]
    fn deterministic_given_seed() {
        let x = noise(300, 8);
        let cfg = HintConfig { confidence: 0.5, ..Default::default() };
        assert_eq!(get_period_hints(&x, &cfg).unwrap(), get_period_hints(&x, &cfg).unwrap());
        let a = PermutationNull::sample(&x, 50, 1, Backend::Classic).unwrap();
        let b = PermutationNull::sample(&x, 50, 2, Backend::Classic).unwrap();
        assert_ne!(a.max_powers, b.max_powers);
    }

    #[test]
    fn hint_invariants() {
        let x = noise(256, 21);
        let cfg = HintConfig { confidence: 0.5, ..Default::default() };
        for h in get_period_hints(&x, &cfg).unwrap() {
            assert!(h.power > h.threshold);
            assert!(h.period >= 2.0 && h.period <= 256.0);
            assert!((h.period * h.frequency - 1.0).abs() < 1e-12);
        }
    }
}
