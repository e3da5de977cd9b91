//! Kernel density estimates of similarity samples and the KL divergence
//! between them on a shared grid.

use std::f64::consts::PI;

pub const KDE_GRID_POINTS: usize = 512;
const DENSITY_FLOOR: f64 = 1e-12;
/// Bandwidth used when a sample has no spread at all.
const FALLBACK_BANDWIDTH: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Kernel {
    Gaussian,
    /// Laplace kernel `exp(−|u|) / 2`.
    Exponential,
}

impl Kernel {
    fn eval(self, u: f64) -> f64 {
        match self {
            Kernel::Gaussian => (-0.5 * u * u).exp() / (2.0 * PI).sqrt(),
            Kernel::Exponential => 0.5 * (-u.abs()).exp(),
        }
    }
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Silverman's rule of thumb, `0.9 · min(σ, IQR / 1.34) · n^(−1/5)`. When
/// one spread measure is zero the other is used; with no spread at all a
/// small fixed bandwidth is returned.
pub fn silverman_bandwidth(sample: &[f64]) -> f64 {
    let n = sample.len();
    if n < 2 {
        return FALLBACK_BANDWIDTH;
    }
    let sd = crate::stats::std_dev(sample);
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let iqr = (quantile(&sorted, 0.75) - quantile(&sorted, 0.25)) / 1.34;
    let spread = match (sd > 0.0, iqr > 0.0) {
        (true, true) => sd.min(iqr),
        (true, false) => sd,
        (false, true) => iqr,
        (false, false) => return FALLBACK_BANDWIDTH,
    };
    0.9 * spread * (n as f64).powf(-0.2)
}

fn density_on_grid(sample: &[f64], kernel: Kernel, bandwidth: f64, grid: &[f64]) -> Vec<f64> {
    let scale = 1.0 / (sample.len() as f64 * bandwidth);
    grid.iter()
        .map(|&x| scale * sample.iter().map(|&s| kernel.eval((x - s) / bandwidth)).sum::<f64>())
        .collect()
}

/// `KL(p ‖ q)` between kernel density estimates of two samples, evaluated
/// on a 512-point grid spanning the pooled range of both samples. Both
/// estimates use the wider of the two Silverman bandwidths. Densities are floored at 1e-12 and renormalized on the grid.
pub fn kl_divergence(p: &[f64], q: &[f64], kernel: Kernel) -> f64 {
    assert!(!p.is_empty() && !q.is_empty(), "KL needs nonempty samples");
    // One shared bandwidth: with per-sample bandwidths a narrow reference
    // density leaves the wider one's tails over near-zero mass, and the
    // estimate is dominated by that smoothing mismatch.
    let h = silverman_bandwidth(p).max(silverman_bandwidth(q));
    let lo = p.iter().chain(q).copied().fold(f64::INFINITY, f64::min);
    let mut hi = p.iter().chain(q).copied().fold(f64::NEG_INFINITY, f64::max);
    if hi <= lo {
        hi = lo + h;
    }
    let step = (hi - lo) / (KDE_GRID_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..KDE_GRID_POINTS).map(|i| lo + step * i as f64).collect();

    let normalize = |d: Vec<f64>| {
        let d: Vec<f64> = d.into_iter().map(|x| x.max(DENSITY_FLOOR)).collect();
        let mass: f64 = d.iter().sum::<f64>() * step;
        d.into_iter().map(|x| x / mass).collect::<Vec<_>>()
    };
    let dp = normalize(density_on_grid(p, kernel, h, &grid));
    let dq = normalize(density_on_grid(q, kernel, h, &grid));
    let kl: f64 = dp.iter().zip(&dq).map(|(a, b)| a * (a / b).ln()).sum::<f64>() * step;
    kl.max(0.0)
}
