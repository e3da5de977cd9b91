use std::collections::HashSet;

use super::store::{cosine_similarity, norm, VectorStore};
use crate::{Error, Result};

/// A conceptual direction running from the centroid of the negative pole
/// set to the centroid of the positive pole set.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub positive: Vec<String>,
    pub negative: Vec<String>,
    pub positive_centroid: Vec<f64>,
    pub negative_centroid: Vec<f64>,
    pub vector: Vec<f64>,
}

fn centroid(store: &VectorStore, ids: &[&str]) -> Result<Vec<f64>> {
    let mut c = vec![0.0; store.dim()];
    for id in ids {
        for (x, v) in c.iter_mut().zip(store.unit_vector(id)?) {
            *x += v;
        }
    }
    let n = ids.len() as f64;
    c.iter_mut().for_each(|x| *x /= n);
    Ok(c)
}

pub fn build_axis(store: &VectorStore, positive: &[&str], negative: &[&str]) -> Result<Axis> {
    if positive.is_empty() || negative.is_empty() {
        return Err(Error::Config("axis pole sets must be nonempty".into()));
    }
    let pos: HashSet<&str> = positive.iter().copied().collect();
    if let Some(shared) = negative.iter().find(|id| pos.contains(*id)) {
        return Err(Error::Config(format!("`{shared}` appears in both pole sets")));
    }
    let positive_centroid = centroid(store, positive)?;
    let negative_centroid = centroid(store, negative)?;
    let vector: Vec<f64> = positive_centroid
        .iter()
        .zip(&negative_centroid)
        .map(|(p, q)| p - q)
        .collect();
    if norm(&vector) <= 1e-12 {
        return Err(Error::DegenerateAxis);
    }
    Ok(Axis {
        positive: positive.iter().map(|s| s.to_string()).collect(),
        negative: negative.iter().map(|s| s.to_string()).collect(),
        positive_centroid,
        negative_centroid,
        vector,
    })
}

/// Cosine between a periodical's vector and the axis.
pub fn project_on_axis(store: &VectorStore, id: &str, axis: &Axis) -> Result<f64> {
    cosine_similarity(store.unit_vector(id)?, &axis.vector)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn store(raw: Vec<f64>, dim: usize) -> VectorStore {
        let n = raw.len() / dim;
        VectorStore::from_rows((0..n).map(|i| format!("p{i}")).collect(), dim, raw).unwrap()
    }

    #[test]
    fn singleton_poles() {
        let s = store(vec![1.0, 0.0, 0.0, 1.0], 2);
        let axis = build_axis(&s, &["p0"], &["p1"]).unwrap();
        assert_eq!(axis.vector, vec![1.0, -1.0]);
    }

    #[test]
    fn symmetric_poles_are_degenerate() {
        let s = store(vec![1.0, 0.0, -1.0, 0.0, 0.0, 1.0, 0.0, -1.0], 2);
        let axis = build_axis(&s, &["p0", "p1"], &["p2"]).unwrap();
        assert_eq!(axis.positive_centroid, vec![0.0, 0.0]);
        assert!(matches!(
            build_axis(&s, &["p0", "p1"], &["p2", "p3"]),
            Err(Error::DegenerateAxis)
        ));
    }

    #[test]
    fn rejects_empty_or_overlapping_poles() {
        let s = store(vec![1.0, 0.0, 0.0, 1.0], 2);
        assert!(matches!(build_axis(&s, &[], &["p1"]), Err(Error::Config(_))));
        assert!(matches!(build_axis(&s, &["p0"], &["p0", "p1"]), Err(Error::Config(_))));
        assert!(matches!(build_axis(&s, &["p0"], &["zz"]), Err(Error::Lookup(_))));
    }

    #[test]
    fn centroid_matches_summation() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        let raw: Vec<f64> = (0..20 * 6).map(|_| rng.random_range(-1.0..1.0)).collect();
        let s = store(raw, 6);
        let pos: Vec<String> = (0..10).map(|i| format!("p{i}")).collect();
        let neg: Vec<String> = (10..20).map(|i| format!("p{i}")).collect();
        let pr: Vec<&str> = pos.iter().map(String::as_str).collect();
        let nr: Vec<&str> = neg.iter().map(String::as_str).collect();
        let axis = build_axis(&s, &pr, &nr).unwrap();
        for d in 0..6 {
            let mean: f64 = (0..10).map(|r| s.vector(r)[d]).sum::<f64>() / 10.0;
            assert!((axis.positive_centroid[d] - mean).abs() < 1e-12);
        }
    }

    #[test]
    fn aligned_periodical_projects_to_one() {
        let s = store(vec![3.0, 1.0, 0.0, 0.0, 1.0, 1.0], 3);
        let axis = build_axis(&s, &["p0"], &["p1"]).unwrap();
        let t = store([s.vector(0), s.vector(1), &axis.vector].concat(), 3);
        let axis_t = build_axis(&t, &["p0"], &["p1"]).unwrap();
        assert!((project_on_axis(&t, "p2", &axis_t).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn projection_is_scale_invariant() {
        let s = store(vec![1.0, 0.2, -0.3, 1.0, 0.5, 0.5], 2);
        let t = store(vec![1.0, 0.2, -0.3, 1.0, 5.0, 5.0], 2);
        let a = build_axis(&s, &["p0"], &["p1"]).unwrap();
        let b = build_axis(&t, &["p0"], &["p1"]).unwrap();
        let x = project_on_axis(&s, "p2", &a).unwrap();
        let y = project_on_axis(&t, "p2", &b).unwrap();
        assert!((x - y).abs() < 1e-12);
    }

    #[test]
    fn planted_poles_have_opposite_signs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let mut raw = Vec::new();
        for i in 0..20 {
            let sign = if i < 10 { 1.0 } else { -1.0 };
            raw.extend([sign * 2.0 + rng.random_range(-0.5..0.5), rng.random_range(-1.0..1.0)]);
        }
        let s = store(raw, 2);
        let names: Vec<String> = (0..20).map(|i| format!("p{i}")).collect();
        let r: Vec<&str> = names.iter().map(String::as_str).collect();
        let axis = build_axis(&s, &r[..10], &r[10..]).unwrap();
        assert!(cosine_similarity(&axis.positive_centroid, &axis.vector).unwrap() > 0.0);
        assert!(cosine_similarity(&axis.negative_centroid, &axis.vector).unwrap() < 0.0);
        for (i, id) in r.iter().enumerate() {
            let p = project_on_axis(&s, id, &axis).unwrap();
            assert_eq!(p > 0.0, i < 10);
        }
    }
}
