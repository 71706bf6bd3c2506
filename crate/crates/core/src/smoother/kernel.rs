//! Tricube weights, nearest-neighbour windows and the local equivalent kernel.

use std::ops::Range;

use super::solve::solve_full_pivot;

/// `(1 - |u|³)³` inside the unit interval, zero outside.
///
/// ```
/// use senti_core::smoother::tricube_weight;
/// assert_eq!(tricube_weight(0.0), 1.0);
/// assert_eq!(tricube_weight(1.0), 0.0);
/// assert_eq!(tricube_weight(0.5), 0.669921875);
/// ```
#[inline]
pub fn tricube_weight(u: f64) -> f64 {
    let a = u.abs();
    if a >= 1.0 {
        0.0
    } else {
        let t = 1.0 - a * a * a;
        t * t * t
    }
}

/// Number of points in each local window: `ceil(span · n)`, clamped to
/// `1..=n`. A small slack keeps products such as `0.3 · 10` from rounding up
/// to the next integer.
pub fn window_size(span: f64, n: usize) -> usize {
    let raw = (span * n as f64 - 1e-9).ceil();
    (raw.max(1.0) as usize).min(n)
}

/// The `k` points nearest to `x0` in sorted `xs`. Equal distances go to the
/// lower index, so the window is always a contiguous range.
pub(crate) fn nearest_window(xs: &[f64], x0: f64, k: usize) -> Range<usize> {
    let n = xs.len();
    let k = k.min(n);
    let mut lo = xs.partition_point(|&x| x < x0);
    let mut hi = lo;
    while hi - lo < k {
        let take_left = match (lo > 0, hi < n) {
            (true, true) => x0 - xs[lo - 1] <= xs[hi] - x0,
            (true, false) => true,
            (false, true) => false,
            (false, false) => unreachable!("window larger than data"),
        };
        if take_left {
            lo -= 1;
        } else {
            hi += 1;
        }
    }
    lo..hi
}

/// Linear weights `l_i` such that the local fit at `x0` equals `Σ l_i y_i`
/// over `window`.
#[derive(Debug, Clone)]
pub(crate) struct EquivalentKernel {
    pub window: Range<usize>,
    /// Tricube weight of each window point.
    pub weights: Vec<f64>,
    /// Equivalent-kernel coefficient of each window point.
    pub coeffs: Vec<f64>,
}

impl EquivalentKernel {
    /// Returns `None` when the weighted normal matrix is singular.
    pub fn build(xs: &[f64], x0: f64, k: usize, degree: usize) -> Option<Self> {
        let window = nearest_window(xs, x0, k);
        let local = &xs[window.clone()];
        let h = local.iter().fold(0.0f64, |acc, &x| acc.max((x - x0).abs()));

        // Basis is centred at x0 and scaled by the window radius; the
        // intercept of the fit is then the estimate at x0.
        let scaled: Vec<f64> = local
            .iter()
            .map(|&x| if h > 0.0 { (x - x0) / h } else { 0.0 })
            .collect();
        let weights: Vec<f64> = scaled
            .iter()
            .map(|&u| if h > 0.0 { tricube_weight(u) } else { 1.0 })
            .collect();

        let m = degree + 1;
        let mut moments = vec![0.0; 2 * degree + 1];
        for (&u, &w) in scaled.iter().zip(&weights) {
            let mut p = w;
            for moment in moments.iter_mut() {
                *moment += p;
                p *= u;
            }
        }
        let normal: Vec<f64> = (0..m * m).map(|i| moments[i / m + i % m]).collect();
        let mut e0 = vec![0.0; m];
        e0[0] = 1.0;
        let a = solve_full_pivot(normal, e0, m)?;

        let coeffs = scaled
            .iter()
            .zip(&weights)
            .map(|(&u, &w)| {
                // Horner evaluation of Σ a_j u^j.
                w * a.iter().rev().fold(0.0, |acc, &c| acc * u + c)
            })
            .collect();
        Some(EquivalentKernel {
            window,
            weights,
            coeffs,
        })
    }

    /// Applies the kernel to `ys`. The fit is anchored on the first window
    /// value so that constant data is reproduced bit-exactly.
    pub fn apply(&self, ys: &[f64]) -> f64 {
        let local = &ys[self.window.clone()];
        let anchor = local[0];
        anchor
            + self
                .coeffs
                .iter()
                .zip(local)
                .map(|(l, y)| l * (y - anchor))
                .sum::<f64>()
    }

    /// `Σ l_i²`, the variance inflation of the estimate.
    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|l| l * l).sum()
    }
}
