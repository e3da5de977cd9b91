use rand::Rng as _;

use super::graph::PaperGraph;
use super::trails::TrailCorpus;
use crate::seed::{self, Rng};
use crate::{Error, Result};

/// Walks longer than this are discarded. Only reachable when the walk is
/// trapped in a citation cycle with no exit.
pub const DEFAULT_MAX_STEPS: usize = 100_000;

/// A citation trail: consecutive papers are citation edges and the last
/// paper is a dead end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaperTrail {
    pub papers: Vec<u32>,
}

impl PaperTrail {
    pub fn len(&self) -> usize {
        self.papers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.papers.is_empty()
    }

    /// Checks edge membership, minimum length and the dead-end terminal.
    pub fn is_valid_in(&self, g: &PaperGraph) -> bool {
        self.papers.len() >= 2
            && self
                .papers
                .windows(2)
                .all(|w| g.out_edges(w[0] as usize).contains(&w[1]))
            && g.out_degree(*self.papers.last().unwrap() as usize) == 0
    }
}

/// Follows uniformly chosen citations from `start` until a dead end.
///
/// Returns `None` when the start is itself a dead end or the walk exceeds
/// `max_steps`.
pub fn walk_from(g: &PaperGraph, start: usize, rng: &mut Rng, max_steps: usize) -> Option<PaperTrail> {
    let mut papers = vec![start as u32];
    let mut current = start;
    loop {
        let out = g.out_edges(current);
        if out.is_empty() {
            break;
        }
        if papers.len() > max_steps {
            return None;
        }
        current = out[rng.random_range(0..out.len())] as usize;
        papers.push(current as u32);
    }
    (papers.len() >= 2).then_some(PaperTrail { papers })
}

/// Draws a start paper uniformly and walks to a dead end.
pub fn sample_paper_trail(g: &PaperGraph, rng: &mut Rng) -> Option<PaperTrail> {
    if g.paper_count() == 0 {
        return None;
    }
    let start = rng.random_range(0..g.paper_count());
    walk_from(g, start, rng, DEFAULT_MAX_STEPS)
}

fn worker_quota(n: usize, workers: usize, w: usize) -> usize {
    n / workers + usize::from(w < n % workers)
}

fn run_worker(g: &PaperGraph, quota: usize, seed: u64, w: usize) -> Result<(Vec<u32>, Vec<usize>)> {
    let mut rng = seed::stream(seed, "walk", w as u64);
    let mut tokens = Vec::new();
    let mut lengths = Vec::with_capacity(quota);
    let mut attempts = 0usize;
    let give_up = 10_000 + 20 * g.paper_count();
    while lengths.len() < quota {
        attempts += 1;
        match sample_paper_trail(g, &mut rng) {
            Some(trail) => {
                tokens.extend(trail.papers.iter().map(|&p| g.venue(p as usize).0));
                lengths.push(trail.len());
            }
            None if lengths.is_empty() && attempts >= give_up => {
                return Err(Error::UnsatisfiableCorpus)
            }
            None => {}
        }
    }
    Ok((tokens, lengths))
}

/// Samples exactly `n` accepted trails and maps them to periodical trails.
///
/// Worker `w` draws from its own stream seeded by `(seed, "walk", w)`, and
/// the output is concatenated worker-major, so the corpus depends only on
/// `(seed, workers)`.
pub fn generate_trail_corpus(g: &PaperGraph, n: usize, seed: u64, workers: usize) -> Result<TrailCorpus> {
    if n == 0 {
        return Err(Error::Config("trail count must be at least 1".into()));
    }
    if g.edge_count() == 0 {
        return Err(Error::UnsatisfiableCorpus);
    }
    let workers = workers.clamp(1, n);
    let parts: Vec<Result<(Vec<u32>, Vec<usize>)>> = if workers == 1 {
        vec![run_worker(g, n, seed, 0)]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| scope.spawn(move || run_worker(g, worker_quota(n, workers, w), seed, w)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("walk worker panicked"))
                .collect()
        })
    };

    let mut corpus = TrailCorpus::new(g.periodical_names().to_vec());
    corpus.seed = Some(seed);
    for part in parts {
        let (tokens, lengths) = part?;
        let mut at = 0;
        for len in lengths {
            corpus.push_ids(&tokens[at..at + len]);
            at += len;
        }
    }
    Ok(corpus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::PeriodicalId;
    use rand::SeedableRng;

    fn graph(n: usize, edges: &[(u32, u32)]) -> PaperGraph {
        let venues = (0..n).map(|i| PeriodicalId(i as u32)).collect();
        let names = (0..n).map(|i| format!("V{i}")).collect();
        PaperGraph::from_parts(venues, names, edges).unwrap().0
    }

    #[test]
    fn chain_is_deterministic() {
        let g = graph(3, &[(0, 1), (1, 2)]);
        let mut rng = Rng::seed_from_u64(1);
        let t = walk_from(&g, 0, &mut rng, DEFAULT_MAX_STEPS).unwrap();
        assert_eq!(t.papers, vec![0, 1, 2]);
        assert!(t.is_valid_in(&g));
    }

    #[test]
    fn isolated_node_never_yields_a_trail() {
        let g = graph(1, &[]);
        let mut rng = Rng::seed_from_u64(1);
        for _ in 0..100 {
            assert!(sample_paper_trail(&g, &mut rng).is_none());
        }
    }

    #[test]
    fn diamond_branches_evenly() {
        // a -> {b, c}, b -> d, c -> d: each branch has probability 1/2.
        let g = graph(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]);
        let mut rng = Rng::seed_from_u64(99);
        let draws = 100_000;
        let via_b = (0..draws)
            .filter(|_| walk_from(&g, 0, &mut rng, DEFAULT_MAX_STEPS).unwrap().papers == [0, 1, 3])
            .count();
        let freq = via_b as f64 / draws as f64;
        assert!((freq - 0.5).abs() <= 0.01, "freq {freq}");
    }

    #[test]
    fn cycle_without_exit_is_discarded() {
        let g = graph(2, &[(0, 1), (1, 0)]);
        let mut rng = Rng::seed_from_u64(1);
        assert!(walk_from(&g, 0, &mut rng, 50).is_none());
        assert!(matches!(
            generate_trail_corpus(&g, 3, 1, 1),
            Err(Error::UnsatisfiableCorpus)
        ));
    }

    #[test]
    fn corpus_contract() {
        let g = graph(5, &[(0, 1), (1, 2), (3, 2), (4, 0)]);
        let c = generate_trail_corpus(&g, 1000, 7, 1).unwrap();
        assert_eq!(c.len(), 1000);
        assert!(c.iter().all(|t| t.len() >= 2));
        assert_eq!(c.seed, Some(7));
    }

    #[test]
    fn no_edges_is_unsatisfiable() {
        let g = graph(3, &[]);
        assert!(matches!(
            generate_trail_corpus(&g, 10, 1, 2),
            Err(Error::UnsatisfiableCorpus)
        ));
    }

    #[test]
    fn reproducible_for_fixed_seed_and_workers() {
        let g = graph(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (5, 2)]);
        for workers in [1, 3] {
            let a = generate_trail_corpus(&g, 500, 11, workers).unwrap();
            let b = generate_trail_corpus(&g, 500, 11, workers).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.len(), 500);
        }
    }

    #[test]
    fn quotas_sum_to_n() {
        for n in [1, 7, 100] {
            for workers in 1..=8 {
                let total: usize = (0..workers).map(|w| worker_quota(n, workers, w)).sum();
                assert_eq!(total, n);
            }
        }
    }
}
