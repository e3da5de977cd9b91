use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::authors::AuthorIndex;
use super::graph::{build_analogy_graph, DEFAULT_MAX_DEPTH};
use super::overlap::{analogy_graph_overlap_fraction, CycleRule};
use crate::evaluation::DisciplineCatalog;
use crate::model::{compare_ids, VectorModel};
use crate::stats::MeanCi;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuiteOptions {
    /// Periodicals taken from each discipline.
    pub top: usize,
    pub max_depth: usize,
    pub same_discipline: bool,
    pub cycle_rule: CycleRule,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { top: 10, max_depth: DEFAULT_MAX_DEPTH, same_discipline: false, cycle_rule: CycleRule::AnyCycle }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub model: String,
    pub discipline_a: String,
    pub discipline_b: String,
    pub graphs: usize,
    /// Overlap fraction of every graph where it is defined, in task order.
    pub fractions: Vec<f64>,
    /// Graphs without any acyclic edge with defined overlaps.
    pub undefined: usize,
    pub mean: MeanCi,
}

/// The `top` labeled periodicals of a discipline known to the model, by
/// descending PageRank (ties by ascending id).
pub fn top_by_pagerank(
    model: &dyn VectorModel,
    catalog: &DisciplineCatalog,
    discipline: &str,
    pagerank: &HashMap<String, f64>,
    top: usize,
) -> Result<Vec<String>> {
    let mut members: Vec<(&str, f64)> = catalog
        .labeled()
        .filter(|(id, l)| l.discipline == discipline && model.row_of(id).is_some())
        .map(|(id, _)| (id, pagerank.get(id).copied().unwrap_or(0.0)))
        .collect();
    if members.len() < top {
        return Err(Error::Config(format!(
            "discipline `{discipline}` has {} periodicals in the model; {top} needed",
            members.len()
        )));
    }
    members.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| compare_ids(a.0, b.0)));
    Ok(members.into_iter().take(top).map(|(id, _)| id.to_string()).collect())
}

/// Every `(pole_a, pole_b, seed)` triple: each pole pair across the two
/// lists, seeded from every listed periodical other than the two poles.
pub fn analogy_suite_tasks(first: &[String], second: &[String]) -> Vec<(String, String, String)> {
    let mut tasks = Vec::with_capacity(first.len() * second.len() * (first.len() + second.len()));
    for a in first {
        for b in second {
            for s in first.iter().chain(second) {
                if s != a && s != b {
                    tasks.push((a.clone(), b.clone(), s.clone()));
                }
            }
        }
    }
    tasks
}

/// Builds one analogy graph per suite task between disciplines `d1` and
/// `d2` and reports the distribution of author-overlap fractions.
pub fn discipline_pair_analogy_suite(
    model: &dyn VectorModel,
    catalog: &DisciplineCatalog,
    idx: &AuthorIndex,
    d1: &str,
    d2: &str,
    pagerank: &HashMap<String, f64>,
    opts: SuiteOptions,
) -> Result<SuiteReport> {
    if d1 == d2 {
        return Err(Error::Config("the two disciplines must differ".into()));
    }
    let first = top_by_pagerank(model, catalog, d1, pagerank, opts.top)?;
    let second = top_by_pagerank(model, catalog, d2, pagerank, opts.top)?;
    let tasks = analogy_suite_tasks(&first, &second);
    let filter = opts.same_discipline.then_some(catalog);
    let outcomes: Vec<Option<f64>> = tasks
        .par_iter()
        .map(|(a, b, s)| {
            let g = build_analogy_graph(model, a, b, s, opts.max_depth, filter)?;
            match analogy_graph_overlap_fraction(&g, idx, opts.cycle_rule) {
                Ok(f) => Ok(f.fraction()),
                Err(Error::Undefined(_)) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    let fractions: Vec<f64> = outcomes.iter().flatten().copied().collect();
    Ok(SuiteReport {
        model: model.label().to_string(),
        discipline_a: d1.to_string(),
        discipline_b: d2.to_string(),
        graphs: tasks.len(),
        undefined: outcomes.len() - fractions.len(),
        mean: MeanCi::of(&fractions),
        fractions,
    })
}
