use std::collections::HashMap;

use super::cv::{sparse_composite_scores, sparse_cosine};
use super::matrix::PeriodicalCitationMatrix;
use crate::model::VectorModel;
use crate::Result;

fn total(c: &PeriodicalCitationMatrix, i: usize, include_diagonal: bool) -> u64 {
    c.undirected_row(i)
        .iter()
        .filter(|&&(j, _)| include_diagonal || j as usize != i)
        .map(|e| e.1)
        .sum()
}

/// Jaccard-style citation similarity on undirected counts
/// `c_ij = C[i][j] + C[j][i]` with totals `T_i = Σ_j c_ij`:
/// `c_ij / (T_i + T_j − c_ij)`. Self-similarity is 1 for any periodical
/// with citations; two periodicals without citations score 0.
///
/// `include_diagonal` decides whether within-periodical citations count
/// toward the totals.
pub fn jaccard_similarity(c: &PeriodicalCitationMatrix, i: usize, j: usize, include_diagonal: bool) -> f64 {
    let (ti, tj) = (total(c, i, include_diagonal), total(c, j, include_diagonal));
    if i == j {
        return if ti > 0 { 1.0 } else { 0.0 };
    }
    let cij = c.get(i, j) + c.get(j, i);
    let denom = ti + tj - cij;
    if denom == 0 {
        0.0
    } else {
        cij as f64 / denom as f64
    }
}

/// The Jaccard similarity matrix, each periodical represented by its row.
#[derive(Debug, Clone)]
pub struct JaccardModel {
    names: Vec<String>,
    index: HashMap<String, usize>,
    rows: Vec<Vec<(u32, f64)>>,
    norms: Vec<f64>,
}

impl JaccardModel {
    pub fn new(c: &PeriodicalCitationMatrix, include_diagonal: bool) -> Self {
        let totals: Vec<u64> = (0..c.len()).map(|i| total(c, i, include_diagonal)).collect();
        let rows: Vec<Vec<(u32, f64)>> = (0..c.len())
            .map(|i| {
                c.undirected_row(i)
                    .into_iter()
                    .filter(|&(j, _)| j as usize != i)
                    .map(|(j, cij)| {
                        let denom = totals[i] + totals[j as usize] - cij;
                        (j, cij as f64 / denom as f64)
                    })
                    .chain((totals[i] > 0).then_some((i as u32, 1.0)))
                    .collect::<Vec<_>>()
            })
            .map(|mut r| {
                r.sort_unstable_by_key(|e| e.0);
                r
            })
            .collect();
        JaccardModel {
            names: c.names().to_vec(),
            index: c.names().iter().enumerate().map(|(i, n)| (n.clone(), i)).collect(),
            norms: rows
                .iter()
                .map(|r| r.iter().map(|e| e.1 * e.1).sum::<f64>().sqrt())
                .collect(),
            rows,
        }
    }

    /// Matrix entry `jac(i, j)`.
    pub fn jaccard(&self, i: usize, j: usize) -> f64 {
        let row = &self.rows[i];
        row.binary_search_by_key(&(j as u32), |e| e.0)
            .map_or(0.0, |k| row[k].1)
    }

    pub fn row(&self, i: usize) -> &[(u32, f64)] {
        &self.rows[i]
    }
}

impl VectorModel for JaccardModel {
    fn label(&self) -> &str {
        "jac"
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
        sparse_cosine(&self.rows[a], self.norms[a], &self.rows[b], self.norms[b])
    }

    fn composite_scores(&self, terms: &[(usize, f64)]) -> Result<Vec<f64>> {
        let rows: Vec<&[(u32, f64)]> = self.rows.iter().map(Vec::as_slice).collect();
        sparse_composite_scores(&rows, &self.norms, self.names.len(), terms)
    }

    fn is_sparse(&self) -> bool {
        true
    }
}
