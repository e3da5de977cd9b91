//! Element-centric similarity between two hard partitions.

use std::collections::HashMap;

use serde::Serialize;

use crate::{Error, Result};

/// Restart probability of the cluster-induced personalized random walk.
pub const DEFAULT_ECS_ALPHA: f64 = 0.9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusteringAgreement {
    /// Per-element agreement in `[0, 1]`, in input order.
    pub scores: Vec<f64>,
    pub mean: f64,
}

fn sizes(labels: &[usize]) -> HashMap<usize, usize> {
    let mut m = HashMap::new();
    for &l in labels {
        *m.entry(l).or_insert(0) += 1;
    }
    m
}

/// Compares clusterings `a` and `b`, given as cluster labels over the same
/// elements in the same order.
///
/// For a hard partition the affinity of element `i` puts `1 − α + α/|C|` on
/// itself and `α/|C|` on every other member of its cluster `C`. The score
/// is `S_i = 1 − Σ_j |p_ij^A − p_ij^B| / (2α)`, evaluated in closed form
/// from the cluster sizes and the size of the overlap of the two clusters
/// containing `i`.
pub fn element_centric_similarity(a: &[usize], b: &[usize], alpha: f64) -> Result<ClusteringAgreement> {
    if a.len() != b.len() {
        return Err(Error::Integrity(format!(
            "clusterings cover {} and {} elements",
            a.len(),
            b.len()
        )));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Config(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    if a.is_empty() {
        return Err(Error::Config("cannot compare empty clusterings".into()));
    }
    let (size_a, size_b) = (sizes(a), sizes(b));
    let mut overlap: HashMap<(usize, usize), usize> = HashMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *overlap.entry((x, y)).or_insert(0) += 1;
    }
    let scores: Vec<f64> = a
        .iter()
        .zip(b)
        .map(|(&x, &y)| {
            let (sa, sb) = (size_a[&x] as f64, size_b[&y] as f64);
            let m = overlap[&(x, y)] as f64;
            let (wa, wb) = (alpha / sa, alpha / sb);
            // Shared members (including i, whose self-mass 1 − α cancels),
            // then members of only one of the two clusters.
            let l1 = m * (wa - wb).abs() + (sa - m) * wa + (sb - m) * wb;
            (1.0 - l1 / (2.0 * alpha)).clamp(0.0, 1.0)
        })
        .collect();
    let mean = crate::stats::mean(&scores);
    Ok(ClusteringAgreement { scores, mean })
}
