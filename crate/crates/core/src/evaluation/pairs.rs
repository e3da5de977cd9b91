//! Similarity distributions of four periodical-pair groups (random,
//! cross-discipline, within-discipline, within-sub-discipline) and their
//! divergence from the random group.

use std::collections::BTreeMap;

use rand::Rng as _;
use serde::Serialize;

use super::catalog::{DisciplineCatalog, INTERDISCIPLINE};
use super::kde::{kl_divergence, Kernel};
use crate::baselines::JaccardModel;
use crate::model::VectorModel;
use crate::seed::{stream, Rng};
use crate::{Error, Result};

/// How a pair of periodicals is scored.
#[derive(Clone, Copy)]
pub enum Scorer<'a> {
    /// Cosine similarity of the model's vectors (p2v or cv).
    Cosine(&'a dyn VectorModel),
    /// The Jaccard matrix entry itself.
    Jaccard(&'a JaccardModel),
}

impl<'a> Scorer<'a> {
    pub fn label(&self) -> &str {
        match self {
            Scorer::Cosine(m) => m.label(),
            Scorer::Jaccard(m) => m.label(),
        }
    }

    fn row_of(&self, key: &str) -> Option<usize> {
        match self {
            Scorer::Cosine(m) => m.row_of(key),
            Scorer::Jaccard(m) => m.row_of(key),
        }
    }

    fn score(&self, a: usize, b: usize) -> f64 {
        match self {
            Scorer::Cosine(m) => m.similarity(a, b),
            Scorer::Jaccard(m) => m.jaccard(a, b),
        }
    }

    /// Dense scores are smoothed with a Gaussian kernel, sparse ones with
    /// an exponential kernel.
    pub fn kernel(&self) -> Kernel {
        match self {
            Scorer::Cosine(m) if !m.is_sparse() => Kernel::Gaussian,
            _ => Kernel::Exponential,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum PairGroup {
    Random,
    CrossDiscipline,
    WithinDiscipline,
    WithinSubDiscipline,
}

impl PairGroup {
    pub const ALL: [PairGroup; 4] = [
        PairGroup::Random,
        PairGroup::CrossDiscipline,
        PairGroup::WithinDiscipline,
        PairGroup::WithinSubDiscipline,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PairGroup::Random => "random",
            PairGroup::CrossDiscipline => "cross",
            PairGroup::WithinDiscipline => "discipline",
            PairGroup::WithinSubDiscipline => "sub-discipline",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupSummary {
    pub group: PairGroup,
    #[serde(skip)]
    pub scores: Vec<f64>,
    pub mean: f64,
    /// `KL(group ‖ random)`; zero for the random group itself.
    pub kl_from_random: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairGroupReport {
    pub scorer: String,
    pub kernel: Kernel,
    /// Groups in [`PairGroup::ALL`] order; unsatisfiable groups are absent.
    pub groups: Vec<GroupSummary>,
}

impl PairGroupReport {
    pub fn group(&self, g: PairGroup) -> Option<&GroupSummary> {
        self.groups.iter().find(|s| s.group == g)
    }
}

/// Rows grouped by a label, keeping only groups with at least two members.
fn blocks(members: &[(usize, &str, Option<&str>)], by_sub: bool) -> Vec<Vec<usize>> {
    let mut map: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for &(row, disc, sub) in members {
        let key = if by_sub {
            match sub {
                Some(s) => s,
                None => continue,
            }
        } else {
            disc
        };
        map.entry(key).or_default().push(row);
    }
    map.into_values().filter(|v| v.len() >= 2).collect()
}

/// Draws a pair uniformly from all unordered within-block pairs: the block
/// is chosen with probability proportional to its pair count.
struct BlockSampler {
    blocks: Vec<Vec<usize>>,
    cumulative: Vec<f64>,
}

impl BlockSampler {
    fn new(blocks: Vec<Vec<usize>>) -> Option<Self> {
        if blocks.is_empty() {
            return None;
        }
        let mut acc = 0.0;
        let cumulative = blocks
            .iter()
            .map(|b| {
                acc += (b.len() * (b.len() - 1)) as f64 / 2.0;
                acc
            })
            .collect();
        Some(Self { blocks, cumulative })
    }

    fn sample(&self, rng: &mut Rng) -> (usize, usize) {
        let total = *self.cumulative.last().unwrap();
        let x = rng.random::<f64>() * total;
        let b = self.cumulative.partition_point(|&c| c <= x).min(self.blocks.len() - 1);
        let block = &self.blocks[b];
        let i = rng.random_range(0..block.len());
        let mut j = rng.random_range(0..block.len() - 1);
        if j >= i {
            j += 1;
        }
        (block[i], block[j])
    }
}

fn sample_group(
    group: PairGroup,
    members: &[(usize, &str, Option<&str>)],
    n: usize,
    rng: &mut Rng,
) -> Option<Vec<(usize, usize)>> {
    let distinct_pair = |rng: &mut Rng| {
        let i = rng.random_range(0..members.len());
        let mut j = rng.random_range(0..members.len() - 1);
        if j >= i {
            j += 1;
        }
        (&members[i], &members[j])
    };
    match group {
        PairGroup::Random => Some(
            (0..n)
                .map(|_| {
                    let (a, b) = distinct_pair(rng);
                    (a.0, b.0)
                })
                .collect(),
        ),
        PairGroup::CrossDiscipline => {
            let first = members[0].1;
            if members.iter().all(|m| m.1 == first) {
                return None;
            }
            // Rejection from uniform pairs is uniform over cross pairs.
            let mut out = Vec::with_capacity(n);
            while out.len() < n {
                let (a, b) = distinct_pair(rng);
                if a.1 != b.1 {
                    out.push((a.0, b.0));
                }
            }
            Some(out)
        }
        PairGroup::WithinDiscipline | PairGroup::WithinSubDiscipline => {
            let by_sub = group == PairGroup::WithinSubDiscipline;
            let sampler = BlockSampler::new(blocks(members, by_sub))?;
            Some((0..n).map(|_| sampler.sample(rng)).collect())
        }
    }
}

/// Samples `pairs_per_group` pairs (with replacement) for each group among
/// labeled, non-interdisciplinary periodicals the scorer knows, and reports
/// group means and `KL(group ‖ random)`. Groups that cannot be formed are
/// skipped with a warning.
pub fn pair_group_report(
    scorer: Scorer<'_>,
    catalog: &DisciplineCatalog,
    pairs_per_group: usize,
    seed: u64,
) -> Result<PairGroupReport> {
    if pairs_per_group == 0 {
        return Err(Error::Config("pairs per group must be positive".into()));
    }
    let members: Vec<(usize, &str, Option<&str>)> = catalog
        .labeled()
        .filter(|(_, l)| l.discipline != INTERDISCIPLINE)
        .filter_map(|(id, l)| {
            scorer
                .row_of(id)
                .map(|row| (row, l.discipline.as_str(), l.sub_discipline.as_deref()))
        })
        .collect();
    if members.len() < 2 {
        return Err(Error::Config(
            "pair evaluation needs at least two labeled periodicals known to the scorer".into(),
        ));
    }

    let kernel = scorer.kernel();
    let mut groups: Vec<GroupSummary> = Vec::new();
    for (gi, group) in PairGroup::ALL.into_iter().enumerate() {
        let mut rng = stream(seed, "pairs", gi as u64);
        let Some(pairs) = sample_group(group, &members, pairs_per_group, &mut rng) else {
            log::warn!("skipping {} pairs: no such pair exists in the catalog", group.name());
            continue;
        };
        let scores: Vec<f64> = pairs.iter().map(|&(a, b)| scorer.score(a, b)).collect();
        groups.push(GroupSummary {
            group,
            mean: crate::stats::mean(&scores),
            scores,
            kl_from_random: 0.0,
        });
    }
    let random = groups[0].scores.clone();
    for g in groups.iter_mut().skip(1) {
        g.kl_from_random = kl_divergence(&g.scores, &random, kernel);
    }
    Ok(PairGroupReport { scorer: scorer.label().to_string(), kernel, groups })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluation::Label;
    use crate::vectorspace::VectorStore;

    fn label(d: &str, s: Option<&str>) -> Option<Label> {
        Some(Label { discipline: d.into(), sub_discipline: s.map(Into::into) })
    }

    /// Eight periodicals on a circle: two disciplines, each with two
    /// sub-disciplines of two periodicals.
    fn setup() -> (VectorStore, DisciplineCatalog) {
        let mut names = Vec::new();
        let mut raw = Vec::new();
        let mut cat = DisciplineCatalog::new();
        for i in 0..8 {
            let id = i.to_string();
            let angle = [0.0, 0.1, 0.5, 0.6, 2.5, 2.6, 3.0, 3.1][i];
            raw.extend([f64::cos(angle), f64::sin(angle)]);
            let d = if i < 4 { "A" } else { "B" };
            let s = format!("{d}.{}", (i % 4) / 2);
            cat.insert(&id, &id, label(d, Some(&s))).unwrap();
            names.push(id);
        }
        (VectorStore::from_rows(names, 2, raw).unwrap(), cat)
    }

    #[test]
    fn groups_have_requested_sizes_and_ordered_means() {
        let (store, cat) = setup();
        let r = pair_group_report(Scorer::Cosine(&store), &cat, 2000, 5).unwrap();
        assert_eq!(r.groups.len(), 4);
        assert!(r.groups.iter().all(|g| g.scores.len() == 2000));
        let m = |g| r.group(g).unwrap().mean;
        assert!(m(PairGroup::WithinSubDiscipline) > m(PairGroup::WithinDiscipline));
        assert!(m(PairGroup::WithinDiscipline) > m(PairGroup::Random));
        assert!(m(PairGroup::Random) > m(PairGroup::CrossDiscipline));
        assert!(r.groups.iter().all(|g| g.kl_from_random >= 0.0));
        assert_eq!(r.kernel, Kernel::Gaussian);
    }

    #[test]
    fn sub_discipline_pairs_stay_within_blocks() {
        let (store, cat) = setup();
        let r = pair_group_report(Scorer::Cosine(&store), &cat, 500, 1).unwrap();
        let sub = r.group(PairGroup::WithinSubDiscipline).unwrap();
        // Within a sub-discipline the angle gap is exactly 0.1.
        let expect = 0.1f64.cos();
        assert!(sub.scores.iter().all(|s| (s - expect).abs() < 1e-12));
    }

    #[test]
    fn unsatisfiable_groups_are_skipped() {
        let (store, _) = setup();
        let mut cat = DisciplineCatalog::new();
        for i in 0..8 {
            cat.insert(&i.to_string(), "x", label("A", None)).unwrap();
        }
        let r = pair_group_report(Scorer::Cosine(&store), &cat, 100, 1).unwrap();
        let present: Vec<_> = r.groups.iter().map(|g| g.group).collect();
        assert_eq!(present, vec![PairGroup::Random, PairGroup::WithinDiscipline]);
    }

    #[test]
    fn deterministic_under_seed() {
        let (store, cat) = setup();
        let a = pair_group_report(Scorer::Cosine(&store), &cat, 300, 9).unwrap();
        let b = pair_group_report(Scorer::Cosine(&store), &cat, 300, 9).unwrap();
        for (x, y) in a.groups.iter().zip(&b.groups) {
            assert_eq!(x.scores, y.scores);
        }
    }
}
