use std::collections::HashMap;

use super::matrix::PeriodicalCitationMatrix;
use crate::corpus::{PaperGraph, PeriodicalId};
use crate::model::compare_ids;

/// Discipline of the neighbor with the largest undirected citation weight
/// `C[p][q] + C[q][p]`, among labeled `q != p`. Ties go to the ascending
/// periodical id. `None` means abstain.
pub fn predict_discipline_citation_weight<'a>(
    c: &PeriodicalCitationMatrix,
    label_of: impl Fn(usize) -> Option<&'a str>,
    p: usize,
) -> Option<&'a str> {
    c.undirected_row(p)
        .into_iter()
        .filter(|&(q, w)| q as usize != p && w > 0)
        .filter_map(|(q, w)| label_of(q as usize).map(|l| (q as usize, w, l)))
        .min_by(|a, b| b.1.cmp(&a.1).then_with(|| compare_ids(c.name(a.0), c.name(b.0))))
        .map(|(_, _, l)| l)
}

/// Most frequent periodical among a paper's references; ties go to the
/// ascending periodical id. `None` for an empty reference list.
pub fn predict_venue_majority(g: &PaperGraph, refs: &[PeriodicalId]) -> Option<PeriodicalId> {
    let mut counts: HashMap<PeriodicalId, usize> = HashMap::new();
    for &r in refs {
        *counts.entry(r).or_default() += 1;
    }
    counts
        .into_iter()
        .min_by(|a, b| {
            b.1.cmp(&a.1)
                .then_with(|| compare_ids(g.periodical_name(a.0), g.periodical_name(b.0)))
        })
        .map(|(id, _)| id)
}
