//! Lloyd's k-means with k-means++ seeding and restarts.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng as _;
use serde::Serialize;

use crate::seed::{stream, Rng};
use crate::vectorspace::VectorStore;
use crate::{Error, Result};

const MAX_ITERATIONS: usize = 300;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KMeansResult {
    pub assignments: Vec<usize>,
    /// Row-major `k × dim`.
    pub centroids: Vec<f64>,
    /// Sum of squared distances to the assigned centroid.
    pub inertia: f64,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn plus_plus(points: &[&[f64]], k: usize, rng: &mut Rng) -> Vec<Vec<f64>> {
    let n = points.len();
    let mut centroids = vec![points[rng.random_range(0..n)].to_vec()];
    let mut d2: Vec<f64> = points.iter().map(|p| sq_dist(p, &centroids[0])).collect();
    while centroids.len() < k {
        let next = match WeightedIndex::new(&d2) {
            Ok(w) => w.sample(rng),
            // Every point coincides with a centroid already.
            Err(_) => rng.random_range(0..n),
        };
        let c = points[next].to_vec();
        for (d, p) in d2.iter_mut().zip(points) {
            *d = d.min(sq_dist(p, &c));
        }
        centroids.push(c);
    }
    centroids
}

fn nearest(p: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, cent) in centroids.iter().enumerate() {
        let d = sq_dist(p, cent);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

fn lloyd(points: &[&[f64]], k: usize, rng: &mut Rng) -> KMeansResult {
    let dim = points[0].len();
    let mut centroids = plus_plus(points, k, rng);
    let mut assignments = vec![usize::MAX; points.len()];
    for _ in 0..MAX_ITERATIONS {
        let mut changed = false;
        let mut dists = vec![0.0; points.len()];
        for (i, p) in points.iter().enumerate() {
            let (c, d) = nearest(p, &centroids);
            dists[i] = d;
            if assignments[i] != c {
                assignments[i] = c;
                changed = true;
            }
        }
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (p, &c) in points.iter().zip(&assignments) {
            counts[c] += 1;
            for (s, x) in sums[c].iter_mut().zip(p.iter()) {
                *s += x;
            }
        }
        for c in 0..k {
            if counts[c] == 0 {
                // Re-seed an empty cluster from the point farthest from its
                // centroid, then move that point over. Singleton clusters
                // are not raided.
                let far = (0..points.len())
                    .filter(|&i| counts[assignments[i]] > 1)
                    .max_by(|&a, &b| dists[a].total_cmp(&dists[b]).then(b.cmp(&a)))
                    .expect("k never exceeds the point count");
                let old = assignments[far];
                counts[old] -= 1;
                for (s, x) in sums[old].iter_mut().zip(points[far].iter()) {
                    *s -= x;
                }
                assignments[far] = c;
                dists[far] = 0.0;
                counts[c] = 1;
                sums[c] = points[far].to_vec();
                changed = true;
            }
        }
        for c in 0..k {
            centroids[c] = sums[c].iter().map(|s| s / counts[c] as f64).collect();
        }
        if !changed {
            break;
        }
    }
    let inertia = points
        .iter()
        .zip(&assignments)
        .map(|(p, &c)| sq_dist(p, &centroids[c]))
        .sum();
    KMeansResult { assignments, centroids: centroids.concat(), inertia }
}

/// Best-inertia k-means over `restarts` seeded runs. Ties keep the earlier
/// restart.
pub fn kmeans(points: &[&[f64]], k: usize, restarts: usize, seed: u64) -> Result<KMeansResult> {
    if k == 0 || k > points.len() {
        return Err(Error::Config(format!("k = {k} must be between 1 and {}", points.len())));
    }
    if restarts == 0 {
        return Err(Error::Config("k-means needs at least one restart".into()));
    }
    let mut best: Option<KMeansResult> = None;
    for r in 0..restarts {
        let run = lloyd(points, k, &mut stream(seed, "kmeans", r as u64));
        if best.as_ref().is_none_or(|b| run.inertia < b.inertia) {
            best = Some(run);
        }
    }
    Ok(best.unwrap())
}

/// Clusters every stored periodical's unit vector; returns `(id, cluster)`
/// in store order.
pub fn kmeans_cluster(
    store: &VectorStore,
    k: usize,
    restarts: usize,
    seed: u64,
) -> Result<Vec<(String, usize)>> {
    let points: Vec<&[f64]> = (0..store.names().len()).map(|r| store.vector(r)).collect();
    let result = kmeans(&points, k, restarts, seed)?;
    Ok(store.names().iter().cloned().zip(result.assignments).collect())
}
