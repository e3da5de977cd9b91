//! The interface shared by the dense embedding and the sparse citation
//! baselines, so evaluation and analogy protocols run unchanged on each.

use std::cmp::Ordering;

use crate::Result;

/// A set of periodical vectors addressed by row, compared by cosine.
pub trait VectorModel: Sync {
    /// Short model tag used in reports (`p2v`, `cv`, `jac`).
    fn label(&self) -> &str;

    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// External periodical id of a row.
    fn key(&self, row: usize) -> &str;

    fn row_of(&self, key: &str) -> Option<usize>;

    /// Cosine similarity between two rows; 0 when either row is all zero.
    fn similarity(&self, a: usize, b: usize) -> f64;

    /// Cosine of every row against the composite vector `Σ weight · v(row)`.
    /// Fails with [`Error::UndefinedSimilarity`](crate::Error) when the
    /// composite is zero.
    fn composite_scores(&self, terms: &[(usize, f64)]) -> Result<Vec<f64>>;

    /// Sparse nonnegative models are smoothed with an exponential kernel
    /// rather than a Gaussian one.
    fn is_sparse(&self) -> bool {
        false
    }
}

/// Orders periodical ids numerically when both parse as integers, otherwise
/// lexicographically.
pub fn compare_ids(a: &str, b: &str) -> Ordering {
    match (a.parse::<u64>(), b.parse::<u64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y),
        _ => a.cmp(b),
    }
}

/// Rows sorted by descending score, ties by ascending periodical id.
pub fn rank_rows<M: VectorModel + ?Sized>(
    model: &M,
    scores: &[f64],
    exclude: &[usize],
    keep: impl Fn(usize) -> bool,
    top_n: usize,
) -> Vec<(usize, f64)> {
    let mut ranked: Vec<(usize, f64)> = scores
        .iter()
        .enumerate()
        .filter(|(row, _)| !exclude.contains(row) && keep(*row))
        .map(|(row, &s)| (row, s))
        .collect();
    let order = |a: &(usize, f64), b: &(usize, f64)| {
        b.1.total_cmp(&a.1)
            .then_with(|| compare_ids(model.key(a.0), model.key(b.0)))
    };
    if top_n < ranked.len() {
        ranked.select_nth_unstable_by(top_n, order);
        ranked.truncate(top_n);
    }
    ranked.sort_by(order);
    ranked
}

/// Best-scoring row of a composite query, honoring exclusions and a filter.
pub fn best_composite_match<M: VectorModel + ?Sized>(
    model: &M,
    terms: &[(usize, f64)],
    exclude: &[usize],
    keep: impl Fn(usize) -> bool,
) -> Result<Option<usize>> {
    let scores = model.composite_scores(terms)?;
    Ok(rank_rows(model, &scores, exclude, keep, 1).first().map(|r| r.0))
}
