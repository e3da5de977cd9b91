//! Predicting a paper's venue from the periodicals it cites.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::index;
use rayon::prelude::*;
use serde::Serialize;

use crate::baselines::predict_venue_majority;
use crate::corpus::{PaperGraph, PeriodicalId};
use crate::model::{best_composite_match, VectorModel};
use crate::seed::stream;
use crate::stats::MeanCi;
use crate::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct VenueModelAccuracy {
    pub model: String,
    pub accuracy: MeanCi,
}

#[derive(Debug, Clone, Serialize)]
pub struct VenueReport {
    pub eligible_papers: usize,
    pub sample: usize,
    pub repeats: usize,
    /// The majority baseline first, then each vector model.
    pub accuracies: Vec<VenueModelAccuracy>,
}

/// Predicts the venue closest (cosine) to the mean vector of the cited
/// periodicals the model knows.
fn predict_with_model(model: &dyn VectorModel, g: &PaperGraph, refs: &[PeriodicalId]) -> Option<String> {
    let mut counts: BTreeMap<usize, f64> = BTreeMap::new();
    for &r in refs {
        if let Some(row) = model.row_of(g.periodical_name(r)) {
            *counts.entry(row).or_default() += 1.0;
        }
    }
    let n: f64 = counts.values().sum();
    let terms: Vec<(usize, f64)> = counts.into_iter().map(|(r, c)| (r, c / n)).collect();
    match best_composite_match(model, &terms, &[], |_| true) {
        Ok(Some(row)) => Some(model.key(row).to_string()),
        _ => None,
    }
}

/// Accuracy of the majority baseline and each vector model at predicting
/// the exact venue of sampled papers, over `repeats` seeded samples of
/// `sample` papers each (without replacement within a sample).
///
/// A paper is eligible when it cites at least one paper, its venue is known
/// to every model, and every model knows at least one cited venue.
pub fn venue_prediction_eval(
    g: &PaperGraph,
    models: &[&dyn VectorModel],
    sample: usize,
    repeats: usize,
    seed: u64,
) -> Result<VenueReport> {
    if sample == 0 || repeats == 0 {
        return Err(Error::Config("sample size and repeats must be positive".into()));
    }
    let refs_of = |p: usize| -> Vec<PeriodicalId> {
        g.out_edges(p).iter().map(|&q| g.venue(q as usize)).collect()
    };
    let eligible: Vec<usize> = (0..g.paper_count())
        .into_par_iter()
        .filter(|&p| {
            if g.out_degree(p) == 0 {
                return false;
            }
            let own = g.periodical_name(g.venue(p));
            let refs = refs_of(p);
            models.iter().all(|m| {
                m.row_of(own).is_some() && refs.iter().any(|&r| m.row_of(g.periodical_name(r)).is_some())
            })
        })
        .collect();
    if eligible.is_empty() {
        return Err(Error::Config("no paper has references with venues known to every model".into()));
    }
    let take = sample.min(eligible.len());
    let samples: Vec<Vec<usize>> = (0..repeats)
        .map(|r| {
            let mut rng = stream(seed, "venue", r as u64);
            index::sample(&mut rng, eligible.len(), take).into_iter().map(|i| eligible[i]).collect()
        })
        .collect();

    // Predictions depend only on the paper, so score each sampled paper once.
    let papers: Vec<usize> = samples.iter().flatten().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let hits: BTreeMap<usize, Vec<bool>> = papers
        .par_iter()
        .map(|&p| {
            let refs = refs_of(p);
            let own = g.periodical_name(g.venue(p));
            let mut h = vec![predict_venue_majority(g, &refs).map(|v| g.periodical_name(v)) == Some(own)];
            h.extend(models.iter().map(|m| predict_with_model(*m, g, &refs).as_deref() == Some(own)));
            (p, h)
        })
        .collect();

    let labels = std::iter::once("majority").chain(models.iter().map(|m| m.label()));
    let accuracies = labels
        .enumerate()
        .map(|(k, label)| {
            let per_repeat: Vec<f64> = samples
                .iter()
                .map(|s| s.iter().filter(|p| hits[p][k]).count() as f64 / s.len() as f64)
                .collect();
            VenueModelAccuracy { model: label.to_string(), accuracy: MeanCi::of(&per_repeat) }
        })
        .collect();
    Ok(VenueReport { eligible_papers: eligible.len(), sample: take, repeats, accuracies })
}
