use std::collections::HashMap;

use super::matrix::PeriodicalCitationMatrix;
use crate::model::VectorModel;
use crate::{Error, Result};

/// Sparse `2|P|`-dimensional citation profile: the unit-normalized incoming
/// column in coordinates `0..|P|`, then the unit-normalized outgoing row in
/// coordinates `|P|..2|P|`. A half with no citations stays all zero.
#[derive(Debug, Clone, PartialEq)]
pub struct CitationVector {
    pub dim: usize,
    pub entries: Vec<(u32, f64)>,
}

impl CitationVector {
    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|e| e.1 * e.1).sum::<f64>().sqrt()
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.dim];
        for &(i, x) in &self.entries {
            v[i as usize] = x;
        }
        v
    }
}

fn normalized(cells: &[(u32, u64)], offset: u32) -> impl Iterator<Item = (u32, f64)> + '_ {
    let n = cells.iter().map(|&(_, c)| (c as f64).powi(2)).sum::<f64>().sqrt();
    cells.iter().map(move |&(k, c)| (k + offset, c as f64 / n))
}

pub fn citation_vector(c: &PeriodicalCitationMatrix, p: usize) -> CitationVector {
    let n = c.len() as u32;
    let mut entries: Vec<(u32, f64)> = normalized(c.col(p), 0).collect();
    entries.extend(normalized(c.row(p), n));
    CitationVector {
        dim: 2 * c.len(),
        entries,
    }
}

/// The citation vector model over every periodical of a matrix.
#[derive(Debug, Clone)]
pub struct CitationVectors {
    names: Vec<String>,
    index: HashMap<String, usize>,
    vectors: Vec<CitationVector>,
    norms: Vec<f64>,
}

impl CitationVectors {
    pub fn new(c: &PeriodicalCitationMatrix) -> Self {
        let vectors: Vec<CitationVector> = (0..c.len()).map(|p| citation_vector(c, p)).collect();
        CitationVectors {
            names: c.names().to_vec(),
            index: c.names().iter().enumerate().map(|(i, n)| (n.clone(), i)).collect(),
            norms: vectors.iter().map(CitationVector::norm).collect(),
            vectors,
        }
    }

    pub fn vector(&self, row: usize) -> &CitationVector {
        &self.vectors[row]
    }

    pub fn dim(&self) -> usize {
        2 * self.names.len()
    }
}

fn sparse_dot(a: &[(u32, f64)], b: &[(u32, f64)]) -> f64 {
    let (mut i, mut j, mut s) = (0, 0, 0.0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                s += a[i].1 * b[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    s
}

/// Cosine of every sparse row against a dense composite of selected rows.
pub(crate) fn sparse_composite_scores(
    rows: &[&[(u32, f64)]],
    norms: &[f64],
    dim: usize,
    terms: &[(usize, f64)],
) -> Result<Vec<f64>> {
    let mut q = vec![0.0; dim];
    for &(row, w) in terms {
        for &(k, x) in rows[row] {
            q[k as usize] += w * x;
        }
    }
    let qn = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    if qn == 0.0 {
        return Err(Error::UndefinedSimilarity);
    }
    Ok(rows
        .iter()
        .zip(norms)
        .map(|(r, &n)| {
            if n == 0.0 {
                0.0
            } else {
                r.iter().map(|&(k, x)| x * q[k as usize]).sum::<f64>() / (n * qn)
            }
        })
        .collect())
}

pub(crate) fn sparse_cosine(a: &[(u32, f64)], na: f64, b: &[(u32, f64)], nb: f64) -> f64 {
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        (sparse_dot(a, b) / (na * nb)).clamp(-1.0, 1.0)
    }
}

impl VectorModel for CitationVectors {
    fn label(&self) -> &str {
        "cv"
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
        sparse_cosine(
            &self.vectors[a].entries,
            self.norms[a],
            &self.vectors[b].entries,
            self.norms[b],
        )
    }

    fn composite_scores(&self, terms: &[(usize, f64)]) -> Result<Vec<f64>> {
        let rows: Vec<&[(u32, f64)]> = self.vectors.iter().map(|v| v.entries.as_slice()).collect();
        sparse_composite_scores(&rows, &self.norms, self.dim(), terms)
    }

    fn is_sparse(&self) -> bool {
        true
    }
}
