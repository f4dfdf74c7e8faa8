//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use infoperiod::data::SurprisalDocument;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

pub fn noise_docs(count: usize, n: usize, seed: u64) -> Vec<SurprisalDocument> {
    let mut r = rng(seed);
    (0..count)
        .map(|i| SurprisalDocument::new(format!("noise-{i:04}"), gaussian(&mut r, n)))
        .collect()
}

fn centered(x: &[f64]) -> Vec<f64> {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    x.iter().map(|v| v - mean).collect()
}

/// `|X_k|` for k = 1..=N/2 by the O(N²) sum.
pub fn brute_dft_magnitudes(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let xc = centered(x);
    let twiddle: Vec<(f64, f64)> = (0..n).map(|j| (-2.0 * PI * j as f64 / n as f64).sin_cos()).collect();
    (1..=n / 2)
        .map(|k| {
            let (mut re, mut im) = (0.0, 0.0);
            for (t, v) in xc.iter().enumerate() {
                let (s, c) = twiddle[k * t % n];
                re += v * c;
                im += v * s;
            }
            re.hypot(im)
        })
        .collect()
}

/// Circular autocovariance `(1/N) Σ x̃(n) x̃((n+τ) mod N)`.
pub fn direct_acf(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let xc = centered(x);
    (0..n)
        .map(|tau| (0..n).map(|i| xc[i] * xc[(i + tau) % n]).sum::<f64>() / n as f64)
        .collect()
}

/// Ordinary least squares through the normal equations `XᵀX β = Xᵀy`,
/// solved by Gaussian elimination with partial pivoting.
pub fn normal_equations(x: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let p = x[0].len();
    let mut a = vec![vec![0.0; p + 1]; p];
    for (row, &yi) in x.iter().zip(y) {
        for i in 0..p {
            for j in 0..p {
                a[i][j] += row[i] * row[j];
            }
            a[i][p] += row[i] * yi;
        }
    }
    for col in 0..p {
        let piv = (col..p).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, piv);
        for r in col + 1..p {
            let f = a[r][col] / a[col][col];
            for c in col..=p {
                a[r][c] -= f * a[col][c];
            }
        }
    }
    let mut beta = vec![0.0; p];
    for i in (0..p).rev() {
        let s: f64 = (i + 1..p).map(|j| a[i][j] * beta[j]).sum();
        beta[i] = (a[i][p] - s) / a[i][i];
    }
    beta
}

/// SSE of the least-squares line through `(xs, ys)` from raw sums.
fn line_sse(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let b = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let a = (sy - b * sx) / n;
    xs.iter().zip(ys).map(|(x, y)| (y - a - b * x).powi(2)).sum()
}

/// Exhaustive two-segment split over the inclusive lag range `[start, end]`;
/// both segments share the split lag, smallest split wins ties.
pub fn exhaustive_split(acf: &[f64], start: usize, end: usize) -> usize {
    let lags: Vec<f64> = (0..acf.len()).map(|l| l as f64).collect();
    let mut best = (f64::INFINITY, 0);
    for t in start + 1..end {
        let sse = line_sse(&lags[start..=t], &acf[start..=t]) + line_sse(&lags[t..=end], &acf[t..=end]);
        if sse < best.0 {
            best = (sse, t);
        }
    }
    best.1
}
