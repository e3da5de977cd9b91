use std::collections::HashMap;
use std::path::Path;

use crate::evaluation::DisciplineCatalog;
use crate::model::{rank_rows, VectorModel};
use crate::sgns::EmbeddingMatrix;
use crate::{Error, Result};

pub fn cosine_similarity(a: &[f64], b: &[f64]) -> Result<f64> {
    let na = norm(a);
    let nb = norm(b);
    if na == 0.0 || nb == 0.0 {
        return Err(Error::UndefinedSimilarity);
    }
    Ok((dot(a, b) / (na * nb)).clamp(-1.0, 1.0))
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Neighbor {
    pub id: String,
    pub score: f64,
}

/// Unit-normalized periodical vectors with optional metadata.
///
/// The raw vectors are kept alongside so that saving and reloading a store
/// reproduces it bit for bit.
#[derive(Debug, Clone)]
pub struct VectorStore {
    label: String,
    names: Vec<String>,
    index: HashMap<String, usize>,
    dim: usize,
    raw: Vec<f64>,
    unit: Vec<f64>,
    pub catalog: Option<DisciplineCatalog>,
}

impl VectorStore {
    pub fn from_rows(names: Vec<String>, dim: usize, raw: Vec<f64>) -> Result<Self> {
        if dim == 0 || raw.len() != names.len() * dim {
            return Err(Error::Integrity(format!(
                "{} values cannot form {} rows of dimension {dim}",
                raw.len(),
                names.len()
            )));
        }
        let mut index = HashMap::with_capacity(names.len());
        for (row, name) in names.iter().enumerate() {
            if index.insert(name.clone(), row).is_some() {
                return Err(Error::Integrity(format!("periodical `{name}` stored twice")));
            }
        }
        let mut unit = raw.clone();
        for (row, chunk) in unit.chunks_mut(dim).enumerate() {
            let n = norm(chunk);
            if n == 0.0 || !n.is_finite() {
                return Err(Error::Integrity(format!(
                    "periodical `{}` has a zero or non-finite vector",
                    names[row]
                )));
            }
            chunk.iter_mut().for_each(|x| *x /= n);
        }
        Ok(VectorStore {
            label: "p2v".into(),
            names,
            index,
            dim,
            raw,
            unit,
            catalog: None,
        })
    }

    /// Store over the input vectors of a trained matrix.
    pub fn from_matrix(m: &EmbeddingMatrix) -> Result<Self> {
        let raw = (0..m.len()).flat_map(|r| m.input(r).iter().copied()).collect();
        Self::from_rows(m.names().to_vec(), m.dim(), raw)
    }

    /// Loads a model file and, optionally, `periodicals.tsv` metadata.
    pub fn load(model: impl AsRef<Path>, metadata: Option<&Path>) -> Result<Self> {
        let (names, dim, raw) = crate::sgns::EmbeddingMatrix::load(model).map(|m| {
            let raw = (0..m.len()).flat_map(|r| m.input(r).iter().copied()).collect::<Vec<_>>();
            (m.names().to_vec(), m.dim(), raw)
        })?;
        let mut store = Self::from_rows(names, dim, raw)?;
        if let Some(path) = metadata {
            store.catalog = Some(DisciplineCatalog::load(path)?);
        }
        Ok(store)
    }

    /// Saves the raw vectors in the model text format.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let zeros = vec![0.0; self.raw.len()];
        EmbeddingMatrix::from_tables(self.names.clone(), self.dim, self.raw.clone(), zeros)?.save(path)
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = label.to_string();
        self
    }

    pub fn with_catalog(mut self, catalog: DisciplineCatalog) -> Self {
        self.catalog = Some(catalog);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Unit vector of a row.
    pub fn vector(&self, row: usize) -> &[f64] {
        &self.unit[row * self.dim..(row + 1) * self.dim]
    }

    pub fn raw_vector(&self, row: usize) -> &[f64] {
        &self.raw[row * self.dim..(row + 1) * self.dim]
    }

    pub fn lookup(&self, id: &str) -> Result<usize> {
        self.index.get(id).copied().ok_or_else(|| Error::Lookup(format!("unknown periodical `{id}`")))
    }

    pub fn unit_vector(&self, id: &str) -> Result<&[f64]> {
        Ok(self.vector(self.lookup(id)?))
    }

    fn to_neighbors(&self, ranked: Vec<(usize, f64)>) -> Vec<Neighbor> {
        ranked
            .into_iter()
            .map(|(row, score)| Neighbor {
                id: self.names[row].clone(),
                score,
            })
            .collect()
    }

    /// Periodicals ranked by cosine to `id`, excluding `id` and `exclude`.
    pub fn most_similar(&self, id: &str, top_n: usize, exclude: &[&str]) -> Result<Vec<Neighbor>> {
        let row = self.lookup(id)?;
        let mut skip = vec![row];
        for e in exclude {
            skip.push(self.lookup(e)?);
        }
        let v = self.vector(row);
        let scores: Vec<f64> = (0..self.len()).map(|r| dot(self.vector(r), v)).collect();
        Ok(self.to_neighbors(rank_rows(self, &scores, &skip, |_| true, top_n)))
    }

    /// Ranks periodicals by cosine to `v(c) − v(a) + v(b)`, excluding the
    /// three query periodicals.
    pub fn analogy_query(&self, a: &str, b: &str, c: &str, top_n: usize) -> Result<Vec<Neighbor>> {
        let (ra, rb, rc) = (self.lookup(a)?, self.lookup(b)?, self.lookup(c)?);
        let scores = self.composite_scores(&[(rc, 1.0), (ra, -1.0), (rb, 1.0)])?;
        Ok(self.to_neighbors(rank_rows(self, &scores, &[ra, rb, rc], |_| true, top_n)))
    }
}

impl VectorModel for VectorStore {
    fn label(&self) -> &str {
        &self.label
    }

    fn len(&self) -> usize {
        self.names.len()
    }

    fn key(&self, row: usize) -> &str {
        &self.names[row]
    }

    fn row_of(&self, key: &str) -> Option<usize> {
        self.index.get(key).copied()
    }

    fn similarity(&self, a: usize, b: usize) -> f64 {
        dot(self.vector(a), self.vector(b)).clamp(-1.0, 1.0)
    }

    fn composite_scores(&self, terms: &[(usize, f64)]) -> Result<Vec<f64>> {
        let mut q = vec![0.0; self.dim];
        for &(row, w) in terms {
            for (x, v) in q.iter_mut().zip(self.vector(row)) {
                *x += w * v;
            }
        }
        let n = norm(&q);
        if n == 0.0 {
            return Err(Error::UndefinedSimilarity);
        }
        Ok((0..self.len()).map(|r| dot(self.vector(r), &q) / n).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn random_store(n: usize, dim: usize, seed: u64) -> VectorStore {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let raw = (0..n * dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        VectorStore::from_rows((0..n).map(|i| i.to_string()).collect(), dim, raw).unwrap()
    }

    #[test]
    fn cosine_basics() {
        assert!((cosine_similarity(&[0.3, -2.0], &[0.3, -2.0]).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(cosine_similarity(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
        assert!((cosine_similarity(&[1.0, 0.0], &[1.0, 1.0]).unwrap() - 0.70711).abs() < 1e-5);
        assert!(matches!(
            cosine_similarity(&[0.0, 0.0], &[1.0, 1.0]),
            Err(Error::UndefinedSimilarity)
        ));
    }

    #[test]
    fn stored_vectors_are_unit() {
        let s = random_store(20, 7, 1);
        for r in 0..20 {
            assert!((norm(s.vector(r)) - 1.0).abs() < 1e-6);
        }
        assert!(VectorStore::from_rows(vec!["a".into()], 2, vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn two_periodicals_exhaust() {
        let s = VectorStore::from_rows(vec!["a".into(), "b".into()], 2, vec![1.0, 0.0, 0.5, 0.5]).unwrap();
        for n in [1, 5] {
            let r = s.most_similar("a", n, &[]).unwrap();
            assert_eq!(r.len(), 1);
            assert_eq!(r[0].id, "b");
        }
        assert!(matches!(s.most_similar("zz", 1, &[]), Err(Error::Lookup(_))));
    }

    #[test]
    fn most_similar_matches_linear_scan() {
        let s = random_store(50, 6, 2);
        for q in 0..50 {
            let got = s.most_similar(&q.to_string(), 10, &["3"]).unwrap();
            // Oracle: cosine over raw vectors, full sort.
            let mut all: Vec<(usize, f64)> = (0..50)
                .filter(|&r| r != q && r != 3)
                .map(|r| (r, cosine_similarity(s.raw_vector(q), s.raw_vector(r)).unwrap()))
                .collect();
            all.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
            let expected: Vec<String> = all[..10].iter().map(|(r, _)| r.to_string()).collect();
            let ids: Vec<String> = got.iter().map(|n| n.id.clone()).collect();
            assert_eq!(ids, expected);
        }
    }

    #[test]
    fn ties_break_by_ascending_id() {
        let s = VectorStore::from_rows(
            vec!["q".into(), "10".into(), "9".into()],
            2,
            vec![1.0, 0.0, 1.0, 1.0, 1.0, 1.0],
        )
        .unwrap();
        let ids: Vec<String> = s.most_similar("q", 2, &[]).unwrap().into_iter().map(|n| n.id).collect();
        assert_eq!(ids, vec!["9", "10"]);
    }

    #[test]
    fn analogy_with_equal_terms_reduces_to_similarity() {
        let s = random_store(30, 5, 3);
        let a = s.analogy_query("4", "4", "7", 28).unwrap();
        let b = s.most_similar("7", 28, &["4"]).unwrap();
        let ids = |v: &[Neighbor]| v.iter().map(|n| n.id.clone()).collect::<Vec<_>>();
        assert_eq!(ids(&a), ids(&b));
    }

    #[test]
    fn planted_analogy_target_ranks_first() {
        let names = ["a", "b", "c", "d", "e", "f"].map(String::from).to_vec();
        // Unit a, b, c and d = c − a + b exactly.
        let raw = vec![1.0, 0.0, 0.0, 1.0, 0.6, 0.8, -0.4, 1.8, -1.0, 0.2, 0.3, -1.0];
        let s = VectorStore::from_rows(names, 2, raw).unwrap();
        let r = s.analogy_query("a", "b", "c", 3).unwrap();
        assert_eq!(r[0].id, "d");
        assert!((r[0].score - 1.0).abs() < 1e-12);
        assert!(r.iter().all(|n| !["a", "b", "c"].contains(&n.id.as_str())));
    }

    #[test]
    fn save_load_round_trip_preserves_rankings() {
        let s = random_store(40, 8, 4);
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("m.txt");
        s.save(&p).unwrap();
        let t = VectorStore::load(&p, None).unwrap();
        for q in 0..40 {
            let id = q.to_string();
            assert_eq!(s.most_similar(&id, 39, &[]).unwrap(), t.most_similar(&id, 39, &[]).unwrap());
        }
    }

    proptest! {
        #[test]
        fn ranking_is_scale_invariant(seed in 0u64..1000, scale in 0.01f64..100.0) {
            let s = random_store(25, 4, seed);
            let scaled: Vec<f64> = (0..25).flat_map(|r| s.raw_vector(r).to_vec()).map(|x| x * scale).collect();
            let t = VectorStore::from_rows(s.names().to_vec(), 4, scaled).unwrap();
            let ids = |st: &VectorStore| st.most_similar("0", 24, &[]).unwrap().into_iter().map(|n| n.id).collect::<Vec<_>>();
            prop_assert_eq!(ids(&s), ids(&t));
        }

        #[test]
        fn ranking_is_monotone(seed in 0u64..1000) {
            let s = random_store(25, 4, seed);
            let r = s.most_similar("3", 10, &[]).unwrap();
            prop_assert!(r.windows(2).all(|w| w[0].score >= w[1].score));
            prop_assert!(r.iter().all(|n| r[0].score >= n.score));
        }
    }
}
