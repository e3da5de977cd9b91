use std::collections::BTreeMap;

use rand::seq::index;
use rayon::prelude::*;
use serde::Serialize;

use crate::evaluation::DisciplineCatalog;
use crate::seed::stream;
use crate::stats::{spearman, MeanCi};
use crate::vectorspace::{build_axis, Axis, VectorStore};
use crate::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct DisciplineMean {
    pub discipline: String,
    pub mean: f64,
    pub count: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    /// Projection of every stored periodical, in store order.
    pub scores: Vec<(String, f64)>,
    /// Disciplines by ascending mean projection.
    pub disciplines: Vec<DisciplineMean>,
    /// The five periodicals at each end of the axis.
    pub lowest: Vec<(String, f64)>,
    pub highest: Vec<(String, f64)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilityPoint {
    pub size: usize,
    pub rho: MeanCi,
    /// Repeats whose subset axis was degenerate and therefore skipped.
    pub degenerate: usize,
}

/// Stored periodicals whose discipline is in `disciplines`, in store order.
pub fn discipline_members(store: &VectorStore, catalog: &DisciplineCatalog, disciplines: &[&str]) -> Vec<String> {
    store
        .names()
        .iter()
        .filter(|id| catalog.discipline(id).is_some_and(|d| disciplines.contains(&d)))
        .cloned()
        .collect()
}

fn sub_discipline_members(store: &VectorStore, catalog: &DisciplineCatalog, sub: &str) -> Vec<String> {
    store.names().iter().filter(|id| catalog.sub_discipline(id) == Some(sub)).cloned().collect()
}

/// Cosine projection of every stored periodical onto the axis.
pub fn project_all(store: &VectorStore, axis: &Axis) -> Vec<f64> {
    let n = crate::vectorspace::norm(&axis.vector);
    (0..store.names().len())
        .map(|r| store.vector(r).iter().zip(&axis.vector).map(|(a, b)| a * b).sum::<f64>() / n)
        .collect()
}

fn as_refs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

fn pole_sets(
    store: &VectorStore,
    catalog: &DisciplineCatalog,
    pos: &[&str],
    neg: &[&str],
) -> Result<(Vec<String>, Vec<String>)> {
    let p = discipline_members(store, catalog, pos);
    let n = discipline_members(store, catalog, neg);
    if p.is_empty() || n.is_empty() {
        return Err(Error::Config("each pole must contain at least one labeled periodical".into()));
    }
    Ok((p, n))
}

/// Projects every periodical onto the axis from the `neg` disciplines to
/// the `pos` disciplines and summarizes the projections per discipline.
pub fn axis_spectrum(
    store: &VectorStore,
    catalog: &DisciplineCatalog,
    pos: &[&str],
    neg: &[&str],
) -> Result<SpectrumReport> {
    let (p, n) = pole_sets(store, catalog, pos, neg)?;
    let axis = build_axis(store, &as_refs(&p), &as_refs(&n))?;
    let proj = project_all(store, &axis);
    let scores: Vec<(String, f64)> = store.names().iter().cloned().zip(proj).collect();

    let mut groups: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for (id, s) in &scores {
        if let Some(d) = catalog.discipline(id) {
            groups.entry(d).or_default().push(*s);
        }
    }
    let mut disciplines: Vec<DisciplineMean> = groups
        .into_iter()
        .map(|(d, v)| DisciplineMean { discipline: d.to_string(), mean: crate::stats::mean(&v), count: v.len() })
        .collect();
    disciplines.sort_by(|a, b| a.mean.total_cmp(&b.mean).then_with(|| a.discipline.cmp(&b.discipline)));

    let mut sorted = scores.clone();
    sorted.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| crate::model::compare_ids(&a.0, &b.0)));
    let k = sorted.len().min(5);
    let lowest = sorted[..k].to_vec();
    let highest = sorted[sorted.len() - k..].iter().rev().cloned().collect();
    Ok(SpectrumReport { scores, disciplines, lowest, highest })
}

/// For each subset size, repeatedly rebuilds the axis from `size` randomly
/// chosen members of each pole and reports the Spearman correlation between
/// the resulting projections and those of the full axis.
pub fn axis_stability(
    store: &VectorStore,
    catalog: &DisciplineCatalog,
    pos: &[&str],
    neg: &[&str],
    subset_sizes: &[usize],
    repeats: usize,
    seed: u64,
) -> Result<Vec<StabilityPoint>> {
    let (p, n) = pole_sets(store, catalog, pos, neg)?;
    if repeats == 0 {
        return Err(Error::Config("repeats must be positive".into()));
    }
    for &size in subset_sizes {
        if size < 1 || size > p.len() || size > n.len() {
            return Err(Error::Config(format!(
                "subset size {size} must be between 1 and the pole sizes ({}, {})",
                p.len(),
                n.len()
            )));
        }
    }
    let full = project_all(store, &build_axis(store, &as_refs(&p), &as_refs(&n))?);
    subset_sizes
        .iter()
        .map(|&size| {
            let stage = format!("axis-stability-{size}");
            let rhos: Vec<Option<f64>> = (0..repeats)
                .into_par_iter()
                .map(|r| {
                    let mut rng = stream(seed, &stage, r as u64);
                    // Sorted so that a full-size subset rebuilds the reference axis exactly.
                    let mut pick = |pool: &[String]| {
                        let mut idx = index::sample(&mut rng, pool.len(), size).into_vec();
                        idx.sort_unstable();
                        idx.into_iter().map(|i| pool[i].clone()).collect::<Vec<String>>()
                    };
                    let (sp, sn) = (pick(&p), pick(&n));
                    let (sp, sn) = (as_refs(&sp), as_refs(&sn));
                    match build_axis(store, &sp, &sn) {
                        Ok(axis) => Ok(Some(spearman(&full, &project_all(store, &axis)))),
                        Err(Error::DegenerateAxis) => Ok(None),
                        Err(e) => Err(e),
                    }
                })
                .collect::<Result<_>>()?;
            let kept: Vec<f64> = rhos.iter().flatten().copied().collect();
            Ok(StabilityPoint { size, degenerate: rhos.len() - kept.len(), rho: MeanCi::of(&kept) })
        })
        .collect()
}

/// Spearman correlation between projections on the axis from `soft_sub` to
/// `hard_sub` and projections on `reference`. The reference should point
/// the same way, i.e. be built with the hard side as its positive pole.
pub fn subdiscipline_axis_correlation(
    store: &VectorStore,
    catalog: &DisciplineCatalog,
    soft_sub: &str,
    hard_sub: &str,
    reference: &Axis,
) -> Result<f64> {
    let soft = sub_discipline_members(store, catalog, soft_sub);
    let hard = sub_discipline_members(store, catalog, hard_sub);
    if soft.is_empty() || hard.is_empty() {
        return Err(Error::Config(format!("sub-disciplines `{soft_sub}` and `{hard_sub}` must both be nonempty")));
    }
    let axis = build_axis(store, &as_refs(&hard), &as_refs(&soft))?;
    Ok(spearman(&project_all(store, reference), &project_all(store, &axis)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluation::Label;
    use crate::vectorspace::project_on_axis;

    /// Two planted clusters around ±x with spread along y, plus a third
    /// unlabeled-direction discipline in between.
    fn planted() -> (VectorStore, DisciplineCatalog) {
        let mut names = Vec::new();
        let mut raw = Vec::new();
        let mut cat = DisciplineCatalog::new();
        for i in 0..30 {
            let (d, x) = match i % 3 {
                0 => ("hard", 1.0),
                1 => ("soft", -1.0),
                _ => ("mid", 0.1),
            };
            let y = ((i * 7) % 11) as f64 / 11.0 - 0.5;
            raw.extend([x + 0.05 * y, y, 0.2]);
            let id = i.to_string();
            let sub = format!("{d}.{}", i % 2);
            cat.insert(&id, &id, Some(Label { discipline: d.into(), sub_discipline: Some(sub) })).unwrap();
            names.push(id);
        }
        (VectorStore::from_rows(names, 3, raw).unwrap(), cat)
    }

    #[test]
    fn planted_poles_have_signed_projections_and_swap_negates() {
        let (s, cat) = planted();
        let r = axis_spectrum(&s, &cat, &["hard"], &["soft"]).unwrap();
        for (id, score) in &r.scores {
            match cat.discipline(id).unwrap() {
                "hard" => assert!(*score > 0.0),
                "soft" => assert!(*score < 0.0),
                _ => {}
            }
            assert!((-1.0..=1.0).contains(score));
        }
        let order: Vec<&str> = r.disciplines.iter().map(|d| d.discipline.as_str()).collect();
        assert_eq!(order, vec!["soft", "mid", "hard"]);
        let swapped = axis_spectrum(&s, &cat, &["soft"], &["hard"]).unwrap();
        for (a, b) in r.scores.iter().zip(&swapped.scores) {
            assert_eq!(a.1, -b.1);
        }
    }

    #[test]
    fn projections_agree_with_single_query() {
        let (s, cat) = planted();
        let p = discipline_members(&s, &cat, &["hard"]);
        let n = discipline_members(&s, &cat, &["soft"]);
        let axis = build_axis(&s, &as_refs(&p), &as_refs(&n)).unwrap();
        let all = project_all(&s, &axis);
        for (r, id) in s.names().iter().enumerate() {
            assert!((all[r] - project_on_axis(&s, id, &axis).unwrap()).abs() < 1e-12);
            // Centroid-difference form of the same projection.
            let v = s.vector(r);
            let dot = |c: &[f64]| c.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
            let alt = (dot(&axis.positive_centroid) - dot(&axis.negative_centroid))
                / crate::vectorspace::norm(&axis.vector);
            assert!((all[r] - alt).abs() < 1e-12);
        }
    }

    #[test]
    fn full_subsets_are_perfectly_stable() {
        let (s, cat) = planted();
        let pts = axis_stability(&s, &cat, &["hard"], &["soft"], &[10], 5, 1).unwrap();
        assert_eq!(pts[0].rho.mean, 1.0);
        assert!(axis_stability(&s, &cat, &["hard"], &["soft"], &[0], 5, 1).is_err());
        assert!(axis_stability(&s, &cat, &["hard"], &["soft"], &[11], 5, 1).is_err());
    }

    #[test]
    fn small_subsets_match_direct_recomputation() {
        let (s, cat) = planted();
        let pts = axis_stability(&s, &cat, &["hard"], &["soft"], &[2], 20, 4).unwrap();
        let p = discipline_members(&s, &cat, &["hard"]);
        let n = discipline_members(&s, &cat, &["soft"]);
        let full = project_all(&s, &build_axis(&s, &as_refs(&p), &as_refs(&n)).unwrap());
        let mut rhos = Vec::new();
        for r in 0..20 {
            let mut rng = stream(4, "axis-stability-2", r);
            let sp: Vec<&str> = index::sample(&mut rng, p.len(), 2).into_iter().map(|i| p[i].as_str()).collect();
            let sn: Vec<&str> = index::sample(&mut rng, n.len(), 2).into_iter().map(|i| n[i].as_str()).collect();
            rhos.push(spearman(&full, &project_all(&s, &build_axis(&s, &sp, &sn).unwrap())));
        }
        assert_eq!(pts[0].rho, MeanCi::of(&rhos));
    }

    #[test]
    fn sub_axis_on_reference_poles_is_identity() {
        let (s, cat) = planted();
        let hard = sub_discipline_members(&s, &cat, "hard.0");
        let soft = sub_discipline_members(&s, &cat, "soft.1");
        let reference = build_axis(&s, &as_refs(&hard), &as_refs(&soft)).unwrap();
        let rho = subdiscipline_axis_correlation(&s, &cat, "soft.1", "hard.0", &reference).unwrap();
        assert!((rho - 1.0).abs() < 1e-12);
        assert!(subdiscipline_axis_correlation(&s, &cat, "none", "hard.0", &reference).is_err());
    }
}
