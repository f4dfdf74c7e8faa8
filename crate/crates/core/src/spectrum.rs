//! Periodograms and the circular autocorrelation function.
//!
//! Both transforms operate on the mean-removed sequence and use the frequency
//! grid `f_k = k / N` for `k = 1 ..= ⌈(N-1)/2⌉` (the DC bin is dropped).

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Shortest sequence a periodogram is computed for.
pub const MIN_PERIODOGRAM_LEN: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    /// DFT magnitudes ‖X_k‖.
    Classic,
    /// Unnormalised Lomb-Scargle power on the same grid.
    #[default]
    #[value(name = "lomb-scargle", alias = "lomb_scargle")]
    LombScargle,
}

impl Backend {
    pub fn as_str(self) -> &'static str {
        match self {
            Backend::Classic => "classic",
            Backend::LombScargle => "lomb-scargle",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classic" => Ok(Backend::Classic),
            "lomb-scargle" | "lomb_scargle" | "ls" => Ok(Backend::LombScargle),
            _ => Err(Error::Config(format!("unknown backend {s:?}"))),
        }
    }
}

/// Number of half-spectrum bins for a sequence of length `n`.
pub fn half_spectrum_len(n: usize) -> usize {
    n / 2
}

/// Half-spectrum powers; `powers[i]` belongs to frequency index `k = i + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Periodogram {
    pub n: usize,
    pub powers: Vec<f64>,
    pub backend: Backend,
}

impl Periodogram {
    pub fn len(&self) -> usize {
        self.powers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.powers.is_empty()
    }

    /// Power at frequency index `k` (1-based).
    pub fn power(&self, k: usize) -> Option<f64> {
        k.checked_sub(1).and_then(|i| self.powers.get(i).copied())
    }

    pub fn frequency(&self, k: usize) -> f64 {
        k as f64 / self.n as f64
    }

    pub fn period(&self, k: usize) -> f64 {
        self.n as f64 / k as f64
    }

    pub fn frequencies(&self) -> impl Iterator<Item = f64> + '_ {
        (1..=self.powers.len()).map(|k| self.frequency(k))
    }

    pub fn max_power(&self) -> f64 {
        self.powers.iter().copied().fold(0.0, f64::max)
    }

    /// Frequency index with the largest power (first on ties).
    pub fn argmax(&self) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (i, &p) in self.powers.iter().enumerate() {
            if best.is_none_or(|(_, bp)| p > bp) {
                best = Some((i + 1, p));
            }
        }
        best.map(|(k, _)| k)
    }
}

/// Circular autocorrelation, `values[tau]` for `tau = 0 .. N-1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcfCurve {
    pub n: usize,
    pub values: Vec<f64>,
}

impl AcfCurve {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn check_finite(x: &[f64]) -> Result<()> {
    match x.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

fn centered(x: &[f64]) -> impl Iterator<Item = f64> + '_ {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    x.iter().map(move |v| v - mean)
}

/// A planned forward/inverse FFT for one sequence length, reusable across
/// many sequences of that length (the permutation loop relies on this).
#[derive(Clone)]
pub struct SpectrumPlan {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for SpectrumPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectrumPlan").field("n", &self.n).finish()
    }
}

impl SpectrumPlan {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            forward: planner.plan_fft_forward(n.max(1)),
            inverse: planner.plan_fft_inverse(n.max(1)),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    fn check_len(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::Config(format!(
                "plan built for length {} used on length {}",
                self.n,
                x.len()
            )));
        }
        Ok(())
    }

    /// Full DFT of the mean-removed sequence.
    pub fn centered_dft(&self, x: &[f64]) -> Result<Vec<Complex64>> {
        self.check_len(x)?;
        check_finite(x)?;
        let mut buf: Vec<Complex64> = centered(x).map(|v| Complex64::new(v, 0.0)).collect();
        self.forward.process(&mut buf);
        Ok(buf)
    }

    pub fn periodogram(&self, x: &[f64], backend: Backend) -> Result<Periodogram> {
        if x.len() < MIN_PERIODOGRAM_LEN {
            return Err(Error::TooShort {
                len: x.len(),
                min: MIN_PERIODOGRAM_LEN,
            });
        }
        let spectrum = self.centered_dft(x)?;
        let n = self.n;
        let half = half_spectrum_len(n);
        let powers = match backend {
            Backend::Classic => spectrum[1..=half].iter().map(|c| c.norm()).collect(),
            Backend::LombScargle => (1..=half)
                .map(|k| lomb_scargle_bin(spectrum[k], k, n))
                .collect(),
        };
        Ok(Periodogram { n, powers, backend })
    }

    pub fn acf(&self, x: &[f64]) -> Result<AcfCurve> {
        if x.len() < 2 {
            return Err(Error::TooShort { len: x.len(), min: 2 });
        }
        let mut buf = self.centered_dft(x)?;
        for c in buf.iter_mut() {
            *c = Complex64::new(c.norm_sqr(), 0.0);
        }
        self.inverse.process(&mut buf);
        // The unnormalised inverse yields N * Σ_n x(n) x(n+τ).
        let scale = 1.0 / (self.n as f64 * self.n as f64);
        Ok(AcfCurve {
            n: self.n,
            values: buf.iter().map(|c| c.re * scale).collect(),
        })
    }
}

/// Lomb-Scargle power at `f = k/N` from the DFT coefficient `X_k` of the
/// centred sequence sampled at `t = 0 .. N-1`.
///
/// With `C = Σ x cos ωt`, `S = Σ x sin ωt` (so `X_k = C - iS`) and the time
/// offset `τ` chosen so that `Σ sin 2ω(t-τ) = 0`, the power is
/// `½ [ (Σ x cos ω(t-τ))² / Σ cos² ω(t-τ) + (Σ x sin ω(t-τ))² / Σ sin² ω(t-τ) ]`.
fn lomb_scargle_bin(xk: Complex64, k: usize, n: usize) -> f64 {
    let nf = n as f64;
    let c = xk.re;
    let s = -xk.im;
    let (c2, s2) = double_angle_sums(k, n);
    let phase = 0.5 * s2.atan2(c2);
    let (sin_p, cos_p) = phase.sin_cos();
    let (sin_2p, cos_2p) = (2.0 * phase).sin_cos();
    let cos_sq = 0.5 * nf + 0.5 * (c2 * cos_2p + s2 * sin_2p);
    let sin_sq = nf - cos_sq;
    let xc = c * cos_p + s * sin_p;
    let xs = s * cos_p - c * sin_p;
    let eps = 1e-12 * nf;
    let mut power = 0.0;
    if cos_sq > eps {
        power += xc * xc / cos_sq;
    }
    if sin_sq > eps {
        power += xs * xs / sin_sq;
    }
    0.5 * power
}

/// `(Σ cos 2ωt, Σ sin 2ωt)` over `t = 0 .. N-1` for `ω = 2πk/N`, in closed
/// form via the geometric series of `e^{i2ωt}`.
fn double_angle_sums(k: usize, n: usize) -> (f64, f64) {
    if (2 * k) % n == 0 {
        return (n as f64, 0.0);
    }
    // Σ e^{iθt} = e^{iθ(N-1)/2} sin(Nθ/2) / sin(θ/2) with θ = 2ω.
    let theta = 4.0 * PI * k as f64 / n as f64;
    let nf = n as f64;
    let ratio = (nf * theta / 2.0).sin() / (theta / 2.0).sin();
    let arg = theta * (nf - 1.0) / 2.0;
    (ratio * arg.cos(), ratio * arg.sin())
}

/// Periodogram of `x` (mean removed) with the chosen backend.
pub fn periodogram(x: &[f64], backend: Backend) -> Result<Periodogram> {
    SpectrumPlan::new(x.len()).periodogram(x, backend)
}

/// Circular autocorrelation `(1/N) Σ_n x̃(n) x̃((n+τ) mod N)` of the
/// mean-removed sequence.
pub fn acf(x: &[f64]) -> Result<AcfCurve> {
    SpectrumPlan::new(x.len()).acf(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_dft(x: &[f64]) -> Vec<Complex64> {
        let n = x.len();
        let mean = x.iter().sum::<f64>() / n as f64;
        (0..n)
            .map(|k| {
                (0..n).fold(Complex64::new(0.0, 0.0), |acc, t| {
                    let ang = -2.0 * PI * (k * t % n) as f64 / n as f64;
                    acc + Complex64::from_polar(x[t] - mean, ang)
                })
            })
            .collect()
    }

    fn brute_acf(x: &[f64]) -> Vec<f64> {
        let n = x.len();
        let mean = x.iter().sum::<f64>() / n as f64;
        (0..n)
            .map(|tau| (0..n).map(|i| (x[i] - mean) * (x[(i + tau) % n] - mean)).sum::<f64>() / n as f64)
            .collect()
    }

    /// Textbook Lomb-Scargle with explicit τ and direct sums.
    fn direct_lomb_scargle(x: &[f64], f: f64) -> f64 {
        let n = x.len();
        let mean = x.iter().sum::<f64>() / n as f64;
        let w = 2.0 * PI * f;
        let (mut s2, mut c2) = (0.0, 0.0);
        for t in 0..n {
            s2 += (2.0 * w * t as f64).sin();
            c2 += (2.0 * w * t as f64).cos();
        }
        let tau = s2.atan2(c2) / (2.0 * w);
        let (mut xc, mut xs, mut cc, mut ss) = (0.0, 0.0, 0.0, 0.0);
        for (t, v) in x.iter().enumerate() {
            let a = w * (t as f64 - tau);
            xc += (v - mean) * a.cos();
            xs += (v - mean) * a.sin();
            cc += a.cos().powi(2);
            ss += a.sin().powi(2);
        }
        let mut p = 0.0;
        if cc > 1e-9 {
            p += xc * xc / cc;
        }
        if ss > 1e-9 {
            p += xs * xs / ss;
        }
        0.5 * p
    }

    fn cosine(n: usize, cycles: f64) -> Vec<f64> {
        (0..n)
            .map(|t| (2.0 * PI * t as f64 * cycles / n as f64).cos())
            .collect()
    }

    #[test]
    fn half_spectrum_lengths() {
        for (n, want) in [(4, 2), (5, 2), (64, 32), (65, 32), (500, 250)] {
            let p = periodogram(&vec![1.0; n], Backend::Classic).unwrap();
            assert_eq!(p.len(), want, "n={n}");
            assert_eq!(want, ((n - 1) as f64 / 2.0).ceil() as usize);
        }
    }

    #[test]
    fn constant_sequence_has_no_power() {
        for n in [4, 17, 64, 301] {
            for backend in [Backend::Classic, Backend::LombScargle] {
                let p = periodogram(&vec![3.7; n], backend).unwrap();
                assert!(p.powers.iter().all(|&v| v.abs() <= 1e-9 * n as f64));
            }
        }
    }

    #[test]
    fn on_grid_cosine_peak() {
        let x = cosine(64, 8.0);
        let p = periodogram(&x, Backend::Classic).unwrap();
        assert_eq!(p.argmax(), Some(8));
        assert!((p.power(8).unwrap() - 32.0).abs() < 1e-9);
        let brute = brute_dft(&x);
        assert!((brute[8].norm() - 32.0).abs() < 1e-9);
    }

    #[test]
    fn too_short_and_non_finite() {
        assert!(matches!(
            periodogram(&[1.0, 2.0, 3.0], Backend::Classic),
            Err(Error::TooShort { len: 3, min: 4 })
        ));
        assert!(matches!(
            periodogram(&[1.0, f64::NAN, 3.0, 4.0], Backend::LombScargle),
            Err(Error::NonFinite { index: 1 })
        ));
        assert!(matches!(acf(&[1.0]), Err(Error::TooShort { .. })));
    }

    #[test]
    fn acf_of_constant_is_zero() {
        let a = acf(&vec![2.5; 40]).unwrap();
        assert!(a.values.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn acf_of_cosine_peaks_at_multiples_of_period() {
        let x = cosine(64, 4.0);
        let a = acf(&x).unwrap();
        let oracle = brute_acf(&x);
        for (got, want) in a.values.iter().zip(&oracle) {
            assert!((got - want).abs() < 1e-12);
        }
        let local_max: Vec<usize> = (1..63)
            .filter(|&t| a.values[t] > a.values[t - 1] && a.values[t] > a.values[t + 1])
            .collect();
        assert_eq!(local_max, vec![16, 32, 48]);
    }

    #[test]
    fn lomb_scargle_matches_direct_sums() {
        let x: Vec<f64> = (0..97).map(|t| ((t * 37 % 11) as f64).sin() + 0.01 * t as f64).collect();
        let p = periodogram(&x, Backend::LombScargle).unwrap();
        for k in 1..=p.len() {
            let want = direct_lomb_scargle(&x, k as f64 / 97.0);
            assert!((p.power(k).unwrap() - want).abs() <= 1e-9 * want.max(1.0), "k={k}");
        }
    }

    #[test]
    fn lomb_scargle_nyquist_bin() {
        let x: Vec<f64> = (0..16).map(|t| if t % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let p = periodogram(&x, Backend::LombScargle).unwrap();
        let want = direct_lomb_scargle(&x, 0.5);
        assert!((p.power(8).unwrap() - want).abs() < 1e-9);
        assert!((want - 8.0).abs() < 1e-9);
    }

    fn seq(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-10.0f64..10.0, 8..max_len)
    }

    proptest! {
        #[test]
        fn classic_matches_brute_force_dft(x in seq(128)) {
            let p = periodogram(&x, Backend::Classic).unwrap();
            let brute = brute_dft(&x);
            for k in 1..=p.len() {
                let want = brute[k].norm();
                let got = p.power(k).unwrap();
                prop_assert!((got - want).abs() <= 1e-9 * want.max(1e-6) + 1e-12);
            }
        }

        #[test]
        fn full_spectrum_is_even_symmetric(x in seq(96)) {
            let full = SpectrumPlan::new(x.len()).centered_dft(&x).unwrap();
            let n = x.len();
            for k in 1..n {
                prop_assert!((full[k].norm() - full[n - k].norm()).abs() < 1e-9);
            }
        }

        #[test]
        fn scale_equivariance(x in seq(96), c in 0.1f64..20.0) {
            let scaled: Vec<f64> = x.iter().map(|v| v * c).collect();
            let classic = periodogram(&x, Backend::Classic).unwrap();
            let classic_s = periodogram(&scaled, Backend::Classic).unwrap();
            let ls = periodogram(&x, Backend::LombScargle).unwrap();
            let ls_s = periodogram(&scaled, Backend::LombScargle).unwrap();
            for i in 0..classic.len() {
                prop_assert!((classic_s.powers[i] - c * classic.powers[i]).abs() <= 1e-9 * (c * classic.powers[i]).max(1.0));
                prop_assert!((ls_s.powers[i] - c * c * ls.powers[i]).abs() <= 1e-9 * (c * c * ls.powers[i]).max(1.0));
            }
            let a = acf(&x).unwrap();
            let a_s = acf(&scaled).unwrap();
            for (u, v) in a.values.iter().zip(&a_s.values) {
                prop_assert!((v - c * c * u).abs() <= 1e-9 * (c * c * u.abs()).max(1.0));
            }
        }

        #[test]
        fn acf_lag_zero_is_max_and_permutation_invariant(x in seq(80), rot in 0usize..1000) {
            let a = acf(&x).unwrap();
            prop_assert!(a.values.iter().all(|&v| v <= a.values[0] + 1e-12));
            let mut shuffled = x.clone();
            let n = shuffled.len();
            for i in 0..n {
                shuffled.swap(i, (i * 7 + rot) % n);
            }
            let b = acf(&shuffled).unwrap();
            prop_assert!((a.values[0] - b.values[0]).abs() <= 1e-9 * a.values[0].max(1.0));
        }
    }
}
