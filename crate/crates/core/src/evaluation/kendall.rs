//! Rank correlation between expert reference rankings and the orders
//! induced by similarity scorers.

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use rand::seq::SliceRandom;
use serde::Serialize;

use crate::model::{compare_ids, VectorModel};
use crate::seed::stream;
use crate::stats::MeanCi;
use crate::{Error, Result};

/// Kendall's tau-a over the elements common to both lists.
pub fn kendall_tau<S: AsRef<str>>(r1: &[S], r2: &[S]) -> Result<f64> {
    let pos2: HashMap<&str, usize> = r2.iter().enumerate().map(|(i, s)| (s.as_ref(), i)).collect();
    let common: Vec<usize> = r1.iter().filter_map(|s| pos2.get(s.as_ref()).copied()).collect();
    let m = common.len();
    if m < 2 {
        return Err(Error::Undefined(format!("rankings share {m} element(s); need at least 2")));
    }
    let mut score = 0i64;
    for i in 0..m {
        for j in i + 1..m {
            score += if common[i] < common[j] { 1 } else { -1 };
        }
    }
    Ok(score as f64 / (m * (m - 1) / 2) as f64)
}

/// One expert's ranking of candidates for a target periodical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankingTarget {
    pub target: String,
    pub ranked: Vec<String>,
    /// Candidates the expert did not know; appended in random order.
    pub unfamiliar: Vec<String>,
}

impl RankingTarget {
    /// All candidates in reference order, unfamiliar ones last.
    pub fn candidates(&self) -> impl Iterator<Item = &String> {
        self.ranked.iter().chain(&self.unfamiliar)
    }
}

fn split_ids(s: &str) -> Vec<String> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty()).map(String::from).collect()
}

/// Reads `target\tranked:a,b,...[\tunfamiliar:c,...]` lines. Several lines
/// for one target are several experts.
pub fn parse_rankings(path: impl AsRef<Path>) -> Result<Vec<RankingTarget>> {
    let path = path.as_ref();
    let reader = BufReader::new(File::open(path).map_err(|e| Error::io(path, e))?);
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let line = line.trim_end();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |m: &str| Error::parse(path, i + 1, m);
        let mut fields = line.split('\t');
        let target = fields.next().filter(|t| !t.is_empty()).ok_or_else(|| bad("missing target"))?;
        let ranked = fields
            .next()
            .and_then(|f| f.strip_prefix("ranked:"))
            .ok_or_else(|| bad("second field must start with `ranked:`"))?;
        let unfamiliar = match fields.next() {
            Some(f) => f.strip_prefix("unfamiliar:").ok_or_else(|| bad("third field must start with `unfamiliar:`"))?,
            None => "",
        };
        if fields.next().is_some() {
            return Err(bad("too many fields"));
        }
        let entry = RankingTarget {
            target: target.to_string(),
            ranked: split_ids(ranked),
            unfamiliar: split_ids(unfamiliar),
        };
        if entry.ranked.is_empty() {
            return Err(bad("empty ranked list"));
        }
        out.push(entry);
    }
    Ok(out)
}

/// Something that orders candidate periodicals by relatedness to a target.
pub trait CandidateRanker: Sync {
    fn label(&self) -> &str;
    /// Candidates from most to least related. Candidates the ranker cannot
    /// score may be left out.
    fn order(&self, target: &str, candidates: &[String]) -> Vec<String>;
}

/// Orders candidates by cosine similarity to the target.
pub struct ModelRanker<'a>(pub &'a dyn VectorModel);

impl CandidateRanker for ModelRanker<'_> {
    fn label(&self) -> &str {
        self.0.label()
    }

    fn order(&self, target: &str, candidates: &[String]) -> Vec<String> {
        let Some(t) = self.0.row_of(target) else { return Vec::new() };
        let mut scored: Vec<(f64, &String)> = candidates
            .iter()
            .filter_map(|c| self.0.row_of(c).map(|r| (self.0.similarity(t, r), c)))
            .collect();
        scored.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| compare_ids(a.1, b.1)));
        scored.into_iter().map(|(_, c)| c.clone()).collect()
    }
}

/// Baseline ranker: candidates in the target's discipline first, each
/// block ordered by descending PageRank.
pub struct DisciplineRanker<'a> {
    pub discipline_of: &'a (dyn Fn(&str) -> Option<String> + Sync),
    pub pagerank: &'a HashMap<String, f64>,
}

impl CandidateRanker for DisciplineRanker<'_> {
    fn label(&self) -> &str {
        "disc."
    }

    fn order(&self, target: &str, candidates: &[String]) -> Vec<String> {
        let td = (self.discipline_of)(target);
        let mut keyed: Vec<(bool, f64, &String)> = candidates
            .iter()
            .map(|c| {
                let same = td.is_some() && (self.discipline_of)(c) == td;
                (same, self.pagerank.get(c).copied().unwrap_or(0.0), c)
            })
            .collect();
        keyed.sort_by(|a, b| {
            b.0.cmp(&a.0).then(b.1.total_cmp(&a.1)).then_with(|| compare_ids(a.2, b.2))
        });
        keyed.into_iter().map(|(_, _, c)| c.clone()).collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScorerRanking {
    pub scorer: String,
    /// Mean τ over retained targets, with a 95% half-width.
    pub tau: MeanCi,
}

/// Compares each ranker against expert references. Unfamiliar candidates
/// are appended to each expert list in seeded random order. Targets with
/// several experts are kept only if their mean pairwise τ exceeds
/// `agreement_threshold`; a single-expert target is always kept. A
/// ranker's score for a target is its mean τ against the target's experts.
pub fn rank_evaluation(
    references: &[RankingTarget],
    rankers: &[&dyn CandidateRanker],
    agreement_threshold: f64,
    seed: u64,
) -> Result<Vec<ScorerRanking>> {
    let mut by_target: BTreeMap<&str, Vec<(Vec<String>, Vec<String>)>> = BTreeMap::new();
    for (i, r) in references.iter().enumerate() {
        let mut tail = r.unfamiliar.clone();
        tail.shuffle(&mut stream(seed, "rank-unfamiliar", i as u64));
        let full: Vec<String> = r.ranked.iter().cloned().chain(tail).collect();
        let candidates: Vec<String> = r.candidates().cloned().collect();
        by_target.entry(&r.target).or_default().push((full, candidates));
    }

    let mut per_ranker: Vec<Vec<f64>> = vec![Vec::new(); rankers.len()];
    for (target, experts) in &by_target {
        if experts.len() > 1 {
            let mut taus = Vec::new();
            for i in 0..experts.len() {
                for j in i + 1..experts.len() {
                    if let Ok(t) = kendall_tau(&experts[i].0, &experts[j].0) {
                        taus.push(t);
                    }
                }
            }
            if taus.is_empty() || crate::stats::mean(&taus) <= agreement_threshold {
                continue;
            }
        }
        for (k, ranker) in rankers.iter().enumerate() {
            let taus: Vec<f64> = experts
                .iter()
                .filter_map(|(full, cands)| kendall_tau(full, &ranker.order(target, cands)).ok())
                .collect();
            if !taus.is_empty() {
                per_ranker[k].push(crate::stats::mean(&taus));
            }
        }
    }
    Ok(rankers
        .iter()
        .zip(per_ranker)
        .map(|(r, taus)| ScorerRanking { scorer: r.label().to_string(), tau: MeanCi::of(&taus) })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &[&str]) -> Vec<String> {
        s.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn tau_examples() {
        assert_eq!(kendall_tau(&["a", "b", "c"], &["a", "b", "c"]).unwrap(), 1.0);
        assert_eq!(kendall_tau(&["a", "b", "c"], &["c", "b", "a"]).unwrap(), -1.0);
        assert!((kendall_tau(&["a", "b", "c"], &["a", "c", "b"]).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        // Only the intersection counts.
        assert_eq!(kendall_tau(&["a", "x", "b"], &["a", "b", "y"]).unwrap(), 1.0);
        assert!(matches!(kendall_tau(&["a", "b"], &["a", "z"]), Err(Error::Undefined(_))));
    }

    #[test]
    fn reversal_negates() {
        let r1 = ["d", "a", "c", "e", "b"];
        let r2 = ["a", "b", "e", "d", "c"];
        let rev: Vec<&str> = r2.iter().rev().copied().collect();
        assert_eq!(kendall_tau(&r1, &r2).unwrap(), -kendall_tau(&r1, &rev).unwrap());
    }

    struct Fixed(&'static str, Vec<String>);
    impl CandidateRanker for Fixed {
        fn label(&self) -> &str {
            self.0
        }
        fn order(&self, _: &str, candidates: &[String]) -> Vec<String> {
            self.1.iter().filter(|c| candidates.contains(c)).cloned().collect()
        }
    }

    #[test]
    fn perfect_ranker_scores_one() {
        let refs = vec![
            RankingTarget { target: "t".into(), ranked: v(&["a", "b", "c"]), unfamiliar: vec![] },
            RankingTarget { target: "u".into(), ranked: v(&["c", "a"]), unfamiliar: vec![] },
        ];
        struct Echo<'a>(&'a [RankingTarget]);
        impl CandidateRanker for Echo<'_> {
            fn label(&self) -> &str {
                "echo"
            }
            fn order(&self, t: &str, _: &[String]) -> Vec<String> {
                self.0.iter().find(|r| r.target == t).unwrap().ranked.clone()
            }
        }
        let r = rank_evaluation(&refs, &[&Echo(&refs)], 0.2, 1).unwrap();
        assert_eq!(r[0].tau.mean, 1.0);
        assert_eq!(r[0].tau.n, 2);
    }

    #[test]
    fn hand_computed_mean_tau() {
        // Target t: reference (a,b,c), ranker (a,c,b) → 1/3.
        // Target u: reference (a,b,c,d), ranker (d,c,b,a) → −1.
        let refs = vec![
            RankingTarget { target: "t".into(), ranked: v(&["a", "b", "c"]), unfamiliar: vec![] },
            RankingTarget { target: "u".into(), ranked: v(&["a", "b", "c", "d"]), unfamiliar: vec![] },
        ];
        struct ByTarget;
        impl CandidateRanker for ByTarget {
            fn label(&self) -> &str {
                "hand"
            }
            fn order(&self, t: &str, _: &[String]) -> Vec<String> {
                if t == "t" { v(&["a", "c", "b"]) } else { v(&["d", "c", "b", "a"]) }
            }
        }
        let r = rank_evaluation(&refs, &[&ByTarget], 0.2, 1).unwrap();
        assert!((r[0].tau.mean - (1.0 / 3.0 - 1.0) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn disagreeing_experts_are_filtered() {
        let refs = vec![
            RankingTarget { target: "t".into(), ranked: v(&["a", "b", "c"]), unfamiliar: vec![] },
            RankingTarget { target: "t".into(), ranked: v(&["c", "b", "a"]), unfamiliar: vec![] },
            RankingTarget { target: "u".into(), ranked: v(&["a", "b"]), unfamiliar: vec![] },
        ];
        let ranker = Fixed("f", v(&["a", "b", "c"]));
        let r = rank_evaluation(&refs, &[&ranker], 0.2, 1).unwrap();
        assert_eq!(r[0].tau.n, 1);
        assert_eq!(r[0].tau.mean, 1.0);
    }

    #[test]
    fn parses_and_rejects() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.tsv");
        std::fs::write(&p, "t\tranked:a,b,c\tunfamiliar:d,e\nt\tranked:b,a\n").unwrap();
        let r = parse_rankings(&p).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r[0].unfamiliar, v(&["d", "e"]));
        assert!(r[1].unfamiliar.is_empty());
        std::fs::write(&p, "t\ta,b\n").unwrap();
        assert!(matches!(parse_rankings(&p), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn discipline_ranker_puts_same_discipline_first() {
        let disc = |id: &str| Some(if id.starts_with('x') { "X" } else { "Y" }.to_string());
        let pr: HashMap<String, f64> = [("x1", 0.1), ("x2", 0.3), ("y1", 0.9)]
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect();
        let r = DisciplineRanker { discipline_of: &disc, pagerank: &pr };
        assert_eq!(r.order("x0", &v(&["y1", "x1", "x2"])), v(&["x2", "x1", "y1"]));
    }
}
