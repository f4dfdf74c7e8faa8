//! Hint validation on the autocorrelation curve.
//!
//! Each hint `τ = N/k` gets a search window reaching halfway towards the
//! neighbouring candidates `N/(k+1)` and `N/(k-1)`. Inside the window the ACF
//! is split into two straight segments at the lag that minimises the total
//! squared residual; the hint survives when the left segment rises more
//! steeply than the right one (a hill), and the split lag becomes the refined
//! period.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::hints::PeriodHint;
use crate::spectrum::{AcfCurve, SpectrumPlan};
use crate::{Error, Result};

/// Fewest lags a window may hold: a split lag shared by two 2-point sides.
pub const MIN_WINDOW_LEN: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterConfig {
    /// Minimum normalised angle difference `|θ_L - θ_R|` of a hill.
    pub delta_theta: f64,
}

impl Default for FilterConfig {
    fn default() -> Self {
        Self { delta_theta: 0.01 }
    }
}

/// Inclusive lag range `[start, end]`; empty when `start > end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub start: usize,
    pub end: usize,
}

impl Window {
    pub fn len(&self) -> usize {
        if self.end >= self.start {
            self.end - self.start + 1
        } else {
            0
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, lag: usize) -> bool {
        self.start <= lag && lag <= self.end
    }
}

/// `[⌈(τ + τ_next)/2 - 1⌉, ⌊(τ + τ_prev)/2 + 1⌋] ∩ [2, n-2]` for `τ = n/k`.
/// At `k = 1` the missing neighbour `n/(k-1)` is replaced by `n`.
pub fn search_window(n: usize, k: usize) -> Result<Window> {
    if n < 4 {
        return Err(Error::TooShort { len: n, min: 4 });
    }
    let max_k = n / 2;
    if k == 0 || k > max_k {
        return Err(Error::FrequencyOutOfRange { k, max: max_k });
    }
    let nf = n as f64;
    let tau = nf / k as f64;
    let tau_next = nf / (k + 1) as f64;
    let tau_prev = if k == 1 { nf } else { nf / (k - 1) as f64 };
    let lo = ((tau + tau_next) / 2.0 - 1.0 - 1e-9).ceil().max(2.0) as usize;
    let hi = ((tau + tau_prev) / 2.0 + 1.0 + 1e-9).floor().min((n - 2) as f64) as usize;
    Ok(Window { start: lo, end: hi })
}

/// Least-squares line through `(lag, y)` pairs; returns `(slope, sse)`.
fn line_fit(first_lag: usize, ys: &[f64]) -> (f64, f64) {
    let m = ys.len() as f64;
    let mean_x = first_lag as f64 + (m - 1.0) / 2.0;
    let mean_y = ys.iter().sum::<f64>() / m;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (i, &y) in ys.iter().enumerate() {
        let dx = (first_lag + i) as f64 - mean_x;
        sxx += dx * dx;
        sxy += dx * (y - mean_y);
    }
    let slope = sxy / sxx;
    let sse = ys
        .iter()
        .enumerate()
        .map(|(i, &y)| {
            let r = y - mean_y - slope * ((first_lag + i) as f64 - mean_x);
            r * r
        })
        .sum();
    (slope, sse)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitFit {
    pub t_best: usize,
    pub slope_left: f64,
    pub slope_right: f64,
    pub sse: f64,
}

/// Best two-segment split of the ACF over `window`. The split lag belongs to
/// both segments `[start, t]` and `[t, end]`; ties go to the smallest `t`.
/// `None` when the window is shorter than [`MIN_WINDOW_LEN`] or runs past
/// the curve.
pub fn fit_split(acf: &AcfCurve, window: Window) -> Option<SplitFit> {
    if window.len() < MIN_WINDOW_LEN || window.end >= acf.values.len() {
        return None;
    }
    let mut best: Option<SplitFit> = None;
    for t in window.start + 1..window.end {
        let (slope_left, sse_l) = line_fit(window.start, &acf.values[window.start..=t]);
        let (slope_right, sse_r) = line_fit(t, &acf.values[t..=window.end]);
        let sse = sse_l + sse_r;
        if best.is_none_or(|b| sse < b.sse) {
            best = Some(SplitFit {
                t_best: t,
                slope_left,
                slope_right,
                sse,
            });
        }
    }
    best
}

/// Normalised slope angle `arctan(slope) / (π/2)`, in `(-1, 1)`.
pub fn slope_angle(slope: f64) -> f64 {
    slope.atan() / FRAC_PI_2
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidatedPeriod {
    pub source_hint: PeriodHint,
    pub refined_period: usize,
    pub slope_left: f64,
    pub slope_right: f64,
    pub delta_theta: f64,
    pub window: Window,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Rejection {
    WindowTooShort { window: Window },
    NotAHill { t_best: usize, slope_left: f64, slope_right: f64, delta_theta: f64 },
    /// Another hint refined to the same lag with higher power.
    Duplicate { refined_period: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RejectedHint {
    pub hint: PeriodHint,
    #[serde(flatten)]
    pub rejection: Rejection,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Filtered {
    /// Accepted periods, descending by refined period.
    pub periods: Vec<ValidatedPeriod>,
    pub rejected: Vec<RejectedHint>,
}

/// Validates one hint against a precomputed ACF curve.
pub fn validate_hint(
    acf: &AcfCurve,
    hint: &PeriodHint,
    cfg: &FilterConfig,
) -> Result<std::result::Result<ValidatedPeriod, Rejection>> {
    let window = search_window(acf.n, hint.k)?;
    let Some(split) = fit_split(acf, window) else {
        return Ok(Err(Rejection::WindowTooShort { window }));
    };
    let delta_theta = (slope_angle(split.slope_left) - slope_angle(split.slope_right)).abs();
    if split.slope_left > split.slope_right && delta_theta > cfg.delta_theta {
        Ok(Ok(ValidatedPeriod {
            source_hint: *hint,
            refined_period: split.t_best,
            slope_left: split.slope_left,
            slope_right: split.slope_right,
            delta_theta,
            window,
        }))
    } else {
        Ok(Err(Rejection::NotAHill {
            t_best: split.t_best,
            slope_left: split.slope_left,
            slope_right: split.slope_right,
            delta_theta,
        }))
    }
}

/// Validates `hints` (all computed from `x`) on the circular ACF of `x`.
pub fn acf_filtering(x: &[f64], hints: &[PeriodHint], cfg: &FilterConfig) -> Result<Filtered> {
    if hints.is_empty() {
        return Ok(Filtered::default());
    }
    let acf = SpectrumPlan::new(x.len()).acf(x)?;
    filter_with_acf(&acf, hints, cfg)
}

pub fn filter_with_acf(acf: &AcfCurve, hints: &[PeriodHint], cfg: &FilterConfig) -> Result<Filtered> {
    let mut accepted: Vec<ValidatedPeriod> = Vec::new();
    let mut rejected = Vec::new();
    for hint in hints {
        match validate_hint(acf, hint, cfg)? {
            Ok(period) => accepted.push(period),
            Err(rejection) => {
                log::debug!("hint k={} rejected: {rejection:?}", hint.k);
                rejected.push(RejectedHint {
                    hint: *hint,
                    rejection,
                });
            }
        }
    }

    // One period per refined lag, keeping the most powerful source hint.
    accepted.sort_by(|a, b| {
        b.refined_period
            .cmp(&a.refined_period)
            .then(b.source_hint.power.total_cmp(&a.source_hint.power))
            .then(a.source_hint.k.cmp(&b.source_hint.k))
    });
    let mut periods: Vec<ValidatedPeriod> = Vec::with_capacity(accepted.len());
    for p in accepted {
        match periods.last() {
            Some(prev) if prev.refined_period == p.refined_period => rejected.push(RejectedHint {
                hint: p.source_hint,
                rejection: Rejection::Duplicate {
                    refined_period: p.refined_period,
                },
            }),
            _ => periods.push(p),
        }
    }
    Ok(Filtered { periods, rejected })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn hint(n: usize, k: usize, power: f64) -> PeriodHint {
        PeriodHint {
            k,
            period: n as f64 / k as f64,
            frequency: k as f64 / n as f64,
            power,
            threshold: 0.0,
            confidence: 0.9,
        }
    }

    fn curve(values: Vec<f64>) -> AcfCurve {
        AcfCurve {
            n: values.len(),
            values,
        }
    }

    #[test]
    fn window_examples() {
        assert_eq!(search_window(100, 4).unwrap(), Window { start: 22, end: 30 });
        assert_eq!(search_window(100, 1).unwrap(), Window { start: 74, end: 98 });
        let w = search_window(64, 32).unwrap();
        assert_eq!(w.start, 2);
        assert!(w.len() < MIN_WINDOW_LEN);
        assert_eq!(search_window(500, 25).unwrap(), Window { start: 19, end: 21 });
    }

    #[test]
    fn window_errors() {
        assert!(matches!(search_window(100, 0), Err(Error::FrequencyOutOfRange { .. })));
        assert!(matches!(search_window(100, 51), Err(Error::FrequencyOutOfRange { max: 50, .. })));
        assert!(search_window(100, 50).is_ok());
        assert!(matches!(search_window(3, 1), Err(Error::TooShort { .. })));
    }

    #[test]
    fn tent_is_fit_exactly() {
        let values: Vec<f64> = (0..100).map(|t| 1.0 - (t as f64 - 52.0).abs() * 0.02).collect();
        let fit = fit_split(&curve(values), Window { start: 45, end: 60 }).unwrap();
        assert_eq!(fit.t_best, 52);
        assert!(fit.slope_left > 0.0 && fit.slope_right < 0.0);
        assert!(fit.sse < 1e-20);
    }

    #[test]
    fn decreasing_curve_is_not_a_hill() {
        let values: Vec<f64> = (0..100).map(|t| 1.0 - 0.01 * t as f64).collect();
        let acf = curve(values);
        let fit = fit_split(&acf, Window { start: 40, end: 60 }).unwrap();
        assert!((fit.slope_left - fit.slope_right).abs() < 1e-9);
        assert!(fit.slope_left < 0.0);
        let h = hint(100, 2, 1.0);
        assert!(matches!(
            validate_hint(&acf, &h, &FilterConfig::default()).unwrap(),
            Err(Rejection::NotAHill { .. })
        ));
    }

    #[test]
    fn short_window_returns_none() {
        let acf = curve(vec![0.0; 64]);
        assert!(fit_split(&acf, Window { start: 2, end: 3 }).is_none());
        assert!(fit_split(&acf, Window { start: 60, end: 70 }).is_none());
    }

    #[test]
    fn empty_hints() {
        let out = acf_filtering(&[1.0, 2.0, 3.0, 4.0, 5.0], &[], &FilterConfig::default()).unwrap();
        assert!(out.periods.is_empty() && out.rejected.is_empty());
    }

    #[test]
    fn planted_period_is_refined_near_truth() {
        let n = 500;
        let x: Vec<f64> = (0..n)
            .map(|t| (2.0 * PI * t as f64 / 50.0).sin() + 0.05 * ((t * 7919 % 101) as f64 / 101.0 - 0.5))
            .collect();
        let acf = crate::spectrum::acf(&x).unwrap();
        let out = acf_filtering(&x, &[hint(n, 10, 100.0)], &FilterConfig::default()).unwrap();
        assert_eq!(out.periods.len(), 1);
        let p = out.periods[0];
        assert!((48..=52).contains(&p.refined_period));
        assert!(p.delta_theta > 0.01);
        let w = p.window;
        let argmax = (w.start..=w.end)
            .max_by(|&a, &b| acf.values[a].total_cmp(&acf.values[b]))
            .unwrap();
        assert!(p.refined_period.abs_diff(argmax) <= 1);
    }

    #[test]
    fn duplicates_keep_strongest_hint() {
        let values: Vec<f64> = (0..200).map(|t| 1.0 - (t as f64 - 50.0).abs() * 0.01).collect();
        let acf = curve(values);
        // Same k, different power: both land on the apex.
        let a = hint(200, 4, 5.0);
        let b = PeriodHint { power: 9.0, ..a };
        let out = filter_with_acf(&acf, &[a, b], &FilterConfig::default()).unwrap();
        assert_eq!(out.periods.len(), 1);
        assert_eq!(out.periods[0].source_hint.power, 9.0);
        assert_eq!(out.periods[0].refined_period, 50);
        assert!(matches!(out.rejected[0].rejection, Rejection::Duplicate { refined_period: 50 }));
    }

    #[test]
    fn output_sorted_descending() {
        let n = 600;
        let x: Vec<f64> = (0..n)
            .map(|t| (2.0 * PI * t as f64 / 100.0).sin() + (2.0 * PI * t as f64 / 20.0).sin())
            .collect();
        let out = acf_filtering(&x, &[hint(n, 30, 1.0), hint(n, 6, 1.0)], &FilterConfig::default()).unwrap();
        let lags: Vec<usize> = out.periods.iter().map(|p| p.refined_period).collect();
        assert_eq!(lags, vec![100, 20]);
    }
}
