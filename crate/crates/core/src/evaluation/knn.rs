//! Discipline classification by k nearest neighbors under stratified
//! cross-validation, plus the citation-weight baseline on the same folds.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::Serialize;

use super::catalog::{DisciplineCatalog, INTERDISCIPLINE};
use crate::baselines::{predict_discipline_citation_weight, PeriodicalCitationMatrix};
use crate::model::{compare_ids, VectorModel};
use crate::seed::stream;
use crate::stats::MeanCi;
use crate::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct Prediction {
    pub id: String,
    pub truth: String,
    /// `None` when the predictor abstained; counted as wrong.
    pub predicted: Option<String>,
    pub fold: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct F1Report {
    pub method: String,
    /// Macro-averaged F1, mean and 95% half-width across folds.
    pub macro_f1: MeanCi,
    pub micro_f1: MeanCi,
    pub predictions: Vec<Prediction>,
}

/// Assigns each item a fold in `0..folds` such that every class is spread
/// as evenly as possible. Classes are visited in name order and members are
/// shuffled under the seed; assignment continues round-robin across classes
/// so fold sizes differ by at most one.
pub fn stratified_folds(labels: &[&str], folds: usize, seed: u64) -> Result<Vec<usize>> {
    if folds < 2 {
        return Err(Error::Config("cross-validation needs at least two folds".into()));
    }
    let mut classes: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, l) in labels.iter().enumerate() {
        classes.entry(l).or_default().push(i);
    }
    if let Some((name, m)) = classes.iter().find(|(_, m)| m.len() < folds) {
        return Err(Error::Config(format!(
            "class `{name}` has {} members, fewer than {folds} folds",
            m.len()
        )));
    }
    let mut rng = stream(seed, "folds", 0);
    let mut assignment = vec![0; labels.len()];
    let mut next = 0;
    for members in classes.values_mut() {
        members.shuffle(&mut rng);
        for &i in members.iter() {
            assignment[i] = next % folds;
            next += 1;
        }
    }
    Ok(assignment)
}

fn f1_scores(pairs: &[(&str, Option<&str>)]) -> (f64, f64) {
    let mut tp: HashMap<&str, usize> = HashMap::new();
    let mut fp: HashMap<&str, usize> = HashMap::new();
    let mut fn_: HashMap<&str, usize> = HashMap::new();
    let mut classes = BTreeSet::new();
    for &(truth, pred) in pairs {
        classes.insert(truth);
        match pred {
            Some(p) if p == truth => *tp.entry(truth).or_default() += 1,
            Some(p) => {
                classes.insert(p);
                *fp.entry(p).or_default() += 1;
                *fn_.entry(truth).or_default() += 1;
            }
            None => *fn_.entry(truth).or_default() += 1,
        }
    }
    let get = |m: &HashMap<&str, usize>, c: &str| m.get(c).copied().unwrap_or(0) as f64;
    let f1 = |t: f64, p: f64, n: f64| if t + p + n == 0.0 { 0.0 } else { 2.0 * t / (2.0 * t + p + n) };
    let macro_f1 = classes
        .iter()
        .map(|c| f1(get(&tp, c), get(&fp, c), get(&fn_, c)))
        .sum::<f64>()
        / classes.len() as f64;
    let total = |m: &HashMap<&str, usize>| m.values().sum::<usize>() as f64;
    (macro_f1, f1(total(&tp), total(&fp), total(&fn_)))
}

/// Runs cross-validation over `(id, label)` items with a predictor that sees
/// the test item's index and a training mask.
fn cross_validate(
    method: &str,
    items: &[(String, String)],
    folds: usize,
    seed: u64,
    predict: impl Fn(usize, &[bool]) -> Option<String> + Sync,
) -> Result<F1Report> {
    let labels: Vec<&str> = items.iter().map(|(_, l)| l.as_str()).collect();
    let assignment = stratified_folds(&labels, folds, seed)?;
    let per_fold: Vec<Vec<Prediction>> = (0..folds)
        .into_par_iter()
        .map(|f| {
            let train: Vec<bool> = assignment.iter().map(|&a| a != f).collect();
            (0..items.len())
                .filter(|&i| assignment[i] == f)
                .map(|i| Prediction {
                    id: items[i].0.clone(),
                    truth: items[i].1.clone(),
                    predicted: predict(i, &train),
                    fold: f,
                })
                .collect()
        })
        .collect();
    let (mut macros, mut micros) = (Vec::new(), Vec::new());
    for preds in &per_fold {
        let pairs: Vec<(&str, Option<&str>)> =
            preds.iter().map(|p| (p.truth.as_str(), p.predicted.as_deref())).collect();
        let (ma, mi) = f1_scores(&pairs);
        macros.push(ma);
        micros.push(mi);
    }
    Ok(F1Report {
        method: method.to_string(),
        macro_f1: MeanCi::of(&macros),
        micro_f1: MeanCi::of(&micros),
        predictions: per_fold.into_iter().flatten().collect(),
    })
}

/// Labeled, non-interdisciplinary periodicals accepted by `known`, sorted
/// by id.
fn labeled_items(catalog: &DisciplineCatalog, known: impl Fn(&str) -> bool) -> Vec<(String, String)> {
    let mut items: Vec<(String, String)> = catalog
        .labeled()
        .filter(|(id, l)| l.discipline != INTERDISCIPLINE && known(id))
        .map(|(id, l)| (id.to_string(), l.discipline.clone()))
        .collect();
    items.sort_by(|a, b| compare_ids(&a.0, &b.0));
    items
}

/// Majority vote among the `k` most similar training periodicals. Ties in
/// the vote go to the larger summed similarity, then the smaller
/// discipline name.
fn knn_vote<'a>(neighbors: &[(f64, &'a str)]) -> Option<&'a str> {
    let mut votes: BTreeMap<&str, (usize, f64)> = BTreeMap::new();
    for &(s, l) in neighbors {
        let v = votes.entry(l).or_default();
        v.0 += 1;
        v.1 += s;
    }
    votes
        .into_iter()
        .min_by(|a, b| b.1 .0.cmp(&a.1 .0).then(b.1 .1.total_cmp(&a.1 .1)).then(a.0.cmp(b.0)))
        .map(|(l, _)| l)
}

/// Stratified `folds`-fold cross-validated kNN discipline prediction using
/// the model's cosine similarity.
pub fn predict_discipline_knn(
    model: &dyn VectorModel,
    catalog: &DisciplineCatalog,
    k: usize,
    folds: usize,
    seed: u64,
) -> Result<F1Report> {
    let items = labeled_items(catalog, |id| model.row_of(id).is_some());
    let rows: Vec<usize> = items.iter().map(|(id, _)| model.row_of(id).unwrap()).collect();
    let smallest_train = items.len() - items.len().div_ceil(folds.max(1));
    if k == 0 || k > smallest_train {
        return Err(Error::Config(format!(
            "k = {k} must be between 1 and the training size {smallest_train}"
        )));
    }
    cross_validate(model.label(), &items, folds, seed, |i, train| {
        let mut cands: Vec<(f64, usize)> = (0..items.len())
            .filter(|&j| train[j])
            .map(|j| (model.similarity(rows[i], rows[j]), j))
            .collect();
        // Items are sorted by id, so index order is the id tie-break.
        let order = |a: &(f64, usize), b: &(f64, usize)| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1));
        if k < cands.len() {
            cands.select_nth_unstable_by(k, order);
            cands.truncate(k);
        }
        let neighbors: Vec<(f64, &str)> = cands.iter().map(|&(s, j)| (s, items[j].1.as_str())).collect();
        knn_vote(&neighbors).map(str::to_string)
    })
}

/// The citation-weight baseline evaluated on the same stratified folds:
/// each test periodical takes the discipline of its heaviest-citing labeled
/// training neighbor. Abstentions count as errors.
pub fn citation_weight_f1(
    c: &PeriodicalCitationMatrix,
    catalog: &DisciplineCatalog,
    folds: usize,
    seed: u64,
) -> Result<F1Report> {
    let items = labeled_items(catalog, |id| c.index_of(id).is_some());
    let item_of: HashMap<usize, usize> =
        items.iter().enumerate().map(|(i, (id, _))| (c.index_of(id).unwrap(), i)).collect();
    cross_validate("citation-weight", &items, folds, seed, |i, train| {
        let p = c.index_of(&items[i].0).unwrap();
        let label_of = |q: usize| {
            item_of.get(&q).filter(|&&j| train[j]).map(|&j| items[j].1.as_str())
        };
        predict_discipline_citation_weight(c, label_of, p).map(str::to_string)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluation::Label;
    use crate::vectorspace::VectorStore;

    fn catalog(labels: &[(&str, &str)]) -> DisciplineCatalog {
        let mut c = DisciplineCatalog::new();
        for (id, d) in labels {
            c.insert(id, id, Some(Label { discipline: d.to_string(), sub_discipline: None })).unwrap();
        }
        c
    }

    #[test]
    fn folds_partition_and_stratify() {
        let labels: Vec<&str> = (0..53).map(|i| ["a", "b", "c"][i % 3]).collect();
        let f = stratified_folds(&labels, 5, 3).unwrap();
        let mut sizes = [0; 5];
        for &x in &f {
            sizes[x] += 1;
        }
        assert_eq!(sizes.iter().sum::<usize>(), 53);
        assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
        for class in ["a", "b", "c"] {
            let mut per = [0; 5];
            for (i, &x) in f.iter().enumerate() {
                if labels[i] == class {
                    per[x] += 1;
                }
            }
            assert!(per.iter().max().unwrap() - per.iter().min().unwrap() <= 1);
        }
        assert!(stratified_folds(&["a", "a", "b"], 2, 0).is_err());
    }

    #[test]
    fn single_discipline_is_perfect() {
        let n = 12;
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let raw: Vec<f64> = (0..n).flat_map(|i| [1.0, i as f64]).collect();
        let store = VectorStore::from_rows(names.clone(), 2, raw).unwrap();
        let labels: Vec<(&str, &str)> = names.iter().map(|n| (n.as_str(), "X")).collect();
        let r = predict_discipline_knn(&store, &catalog(&labels), 3, 5, 1).unwrap();
        assert_eq!(r.macro_f1.mean, 1.0);
        assert_eq!(r.micro_f1.mean, 1.0);
    }

    #[test]
    fn one_nearest_neighbor_matches_hand_table() {
        // Six points on a circle at the listed angles. Folds are forced by
        // using two folds with one item per class per fold.
        let angles = [0.0, 0.2, 1.5, 1.7, 3.0, 3.3];
        let names: Vec<String> = (0..6).map(|i| i.to_string()).collect();
        let raw: Vec<f64> = angles.iter().flat_map(|a: &f64| [a.cos(), a.sin()]).collect();
        let store = VectorStore::from_rows(names, 2, raw).unwrap();
        let cat = catalog(&[("0", "a"), ("1", "b"), ("2", "a"), ("3", "b"), ("4", "a"), ("5", "b")]);
        let r = predict_discipline_knn(&store, &cat, 1, 2, 4).unwrap();
        let folds: HashMap<&str, usize> = r.predictions.iter().map(|p| (p.id.as_str(), p.fold)).collect();
        for p in &r.predictions {
            let i: usize = p.id.parse().unwrap();
            let nearest = (0..6)
                .filter(|&j| folds[j.to_string().as_str()] != p.fold)
                .max_by(|&a, &b| {
                    (angles[i] - angles[a]).cos().total_cmp(&(angles[i] - angles[b]).cos()).then(b.cmp(&a))
                })
                .unwrap();
            let want = if nearest % 2 == 0 { "a" } else { "b" };
            assert_eq!(p.predicted.as_deref(), Some(want), "item {i}");
        }
    }

    #[test]
    fn separated_clusters_classify_well_and_scaling_is_invisible() {
        let mut names = Vec::new();
        let mut raw = Vec::new();
        let mut labels = Vec::new();
        for i in 0..40 {
            let c = i % 4;
            let angle = c as f64 * 1.5 + (i as f64 * 0.37).sin() * 0.2;
            raw.extend([angle.cos(), angle.sin()]);
            names.push(i.to_string());
            labels.push(["w", "x", "y", "z"][c]);
        }
        let pairs: Vec<(&str, &str)> = names.iter().map(String::as_str).zip(labels.iter().copied()).collect();
        let cat = catalog(&pairs);
        let store = VectorStore::from_rows(names.clone(), 2, raw.clone()).unwrap();
        let r = predict_discipline_knn(&store, &cat, 3, 5, 2).unwrap();
        assert!(r.macro_f1.mean >= 0.9);
        let scaled = VectorStore::from_rows(names, 2, raw.iter().map(|x| x * 7.5).collect()).unwrap();
        let s = predict_discipline_knn(&scaled, &cat, 3, 5, 2).unwrap();
        let p = |r: &F1Report| r.predictions.iter().map(|p| p.predicted.clone()).collect::<Vec<_>>();
        assert_eq!(p(&r), p(&s));
    }

    #[test]
    fn k_larger_than_training_set_is_rejected() {
        let names: Vec<String> = (0..10).map(|i| i.to_string()).collect();
        let raw: Vec<f64> = (0..10).flat_map(|i| [1.0, i as f64]).collect();
        let store = VectorStore::from_rows(names.clone(), 2, raw).unwrap();
        let labels: Vec<(&str, &str)> = names.iter().map(|n| (n.as_str(), "X")).collect();
        assert!(matches!(
            predict_discipline_knn(&store, &catalog(&labels), 9, 5, 1),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn vote_tie_breaks() {
        assert_eq!(knn_vote(&[(0.9, "b"), (0.1, "a")]), Some("b"));
        assert_eq!(knn_vote(&[(0.5, "b"), (0.5, "a")]), Some("a"));
        assert_eq!(knn_vote(&[(0.1, "a"), (0.2, "b"), (0.3, "a")]), Some("a"));
    }

    #[test]
    fn f1_counts_abstentions_as_misses() {
        let (ma, mi) = f1_scores(&[("a", Some("a")), ("a", None), ("b", Some("b"))]);
        assert!((mi - 0.8).abs() < 1e-12);
        assert!((ma - (2.0 / 3.0 + 1.0) / 2.0).abs() < 1e-12);
    }
}
