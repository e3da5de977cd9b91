//! Planted-partition citation networks with known discipline structure.
//!
//! Papers are numbered in publication order and only cite earlier papers,
//! so every walk ends at one of the oldest papers. Paper `i` belongs to
//! discipline `i % disciplines` and is published in a periodical drawn
//! uniformly from that discipline.

use rand::seq::IndexedRandom;
use rand::Rng as _;

use super::graph::{PaperGraph, PeriodicalId};
use crate::evaluation::{DisciplineCatalog, Label};
use crate::seed;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub disciplines: usize,
    pub papers_per_discipline: usize,
    pub periodicals_per_discipline: usize,
    /// Relative weight of citing a paper of the same discipline.
    pub within_probability: f64,
    /// Relative weight of citing a paper of another discipline.
    pub cross_probability: f64,
    pub citations_per_paper: usize,
    /// Periodicals of a discipline are split into this many contiguous
    /// sub-disciplines.
    pub sub_disciplines: usize,
    /// Share of within-discipline citations confined to the citing paper's
    /// sub-discipline (with `specialty`, the share of specialty targets
    /// drawn from the own sub-discipline).
    pub sub_discipline_affinity: f64,
    /// Probability that a citation goes to an earlier paper of the citing
    /// paper's own periodical, decided before the discipline mixing.
    pub self_venue_probability: f64,
    /// Share of cross-discipline citations sent to a single partner
    /// periodical in another discipline.
    pub cross_partner_share: f64,
    /// When positive, each periodical is given this many fixed target
    /// periodicals in its own discipline, and its discipline-level citations
    /// go only to those. Zero cites across the whole discipline.
    pub specialty: usize,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            disciplines: 4,
            papers_per_discipline: 1000,
            periodicals_per_discipline: 10,
            within_probability: 0.8,
            cross_probability: 0.2,
            citations_per_paper: 5,
            sub_disciplines: 1,
            sub_discipline_affinity: 0.0,
            self_venue_probability: 0.0,
            cross_partner_share: 0.0,
            specialty: 0,
            seed: 0,
        }
    }
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(format!("synthetic spec: {m}")));
        if self.disciplines == 0
            || self.papers_per_discipline == 0
            || self.periodicals_per_discipline == 0
            || self.citations_per_paper == 0
            || self.sub_disciplines == 0
        {
            return bad("all counts must be positive");
        }
        if self.sub_disciplines > self.periodicals_per_discipline {
            return bad("more sub-disciplines than periodicals per discipline");
        }
        if !(self.within_probability > self.cross_probability && self.cross_probability >= 0.0) {
            return bad("within_probability must exceed cross_probability >= 0");
        }
        for (name, p) in [
            ("sub_discipline_affinity", self.sub_discipline_affinity),
            ("self_venue_probability", self.self_venue_probability),
            ("cross_partner_share", self.cross_partner_share),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return bad(&format!("{name} must lie in [0, 1]"));
            }
        }
        if self.citations_per_paper >= self.paper_count() {
            return bad("citations_per_paper must be smaller than the paper count");
        }
        Ok(())
    }

    pub fn paper_count(&self) -> usize {
        self.disciplines * self.papers_per_discipline
    }

    pub fn periodical_count(&self) -> usize {
        self.disciplines * self.periodicals_per_discipline
    }

    pub fn discipline_of(&self, periodical: usize) -> usize {
        periodical / self.periodicals_per_discipline
    }

    /// Global sub-discipline index of a periodical.
    pub fn sub_discipline_of(&self, periodical: usize) -> usize {
        let local = periodical % self.periodicals_per_discipline;
        self.discipline_of(periodical) * self.sub_disciplines
            + local * self.sub_disciplines / self.periodicals_per_discipline
    }
}

/// A generated network together with its planted labels.
#[derive(Debug, Clone)]
pub struct SyntheticNetwork {
    pub spec: SyntheticSpec,
    pub graph: PaperGraph,
    /// Planted discipline of each periodical.
    pub periodical_discipline: Vec<usize>,
    /// Planted global sub-discipline of each periodical.
    pub periodical_sub_discipline: Vec<usize>,
    /// Designated cross-discipline partner of each periodical.
    pub partner: Vec<usize>,
}

impl SyntheticNetwork {
    /// Catalog naming disciplines `D<d>` and sub-disciplines `D<d>.S<s>`.
    pub fn catalog(&self) -> DisciplineCatalog {
        let mut catalog = DisciplineCatalog::new();
        let s = self.spec.sub_disciplines;
        for (p, name) in self.graph.periodical_names().iter().enumerate() {
            let d = self.periodical_discipline[p];
            let sub = self.periodical_sub_discipline[p] % s;
            let label = Label {
                discipline: format!("D{d}"),
                sub_discipline: Some(format!("D{d}.S{sub}")),
            };
            catalog
                .insert(name, &format!("Periodical {name}"), Some(label))
                .expect("synthetic periodical names are unique");
        }
        catalog
    }
}

pub fn generate_synthetic_graph(spec: &SyntheticSpec) -> Result<SyntheticNetwork> {
    spec.validate()?;
    let mut rng = seed::stream(spec.seed, "synthetic-graph", 0);
    let k = spec.disciplines;
    let n_papers = spec.paper_count();
    let n_periodicals = spec.periodical_count();
    let n_subs = k * spec.sub_disciplines;

    let periodical_discipline: Vec<usize> = (0..n_periodicals).map(|p| spec.discipline_of(p)).collect();
    let periodical_sub: Vec<usize> = (0..n_periodicals).map(|p| spec.sub_discipline_of(p)).collect();
    let partner: Vec<usize> = (0..n_periodicals)
        .map(|p| {
            if k == 1 {
                return p;
            }
            let d = periodical_discipline[p];
            let other = (d + rng.random_range(1..k)) % k;
            other * spec.periodicals_per_discipline + rng.random_range(0..spec.periodicals_per_discipline)
        })
        .collect();

    let specialty: Vec<Vec<usize>> = if spec.specialty == 0 {
        Vec::new()
    } else {
        let ppd = spec.periodicals_per_discipline;
        (0..n_periodicals)
            .map(|p| {
                let members: Vec<usize> = (0..ppd).map(|i| spec.discipline_of(p) * ppd + i).collect();
                let sub_members: Vec<usize> =
                    members.iter().copied().filter(|&q| periodical_sub[q] == periodical_sub[p]).collect();
                let want = spec.specialty.min(ppd);
                let mut targets = Vec::with_capacity(want);
                while targets.len() < want {
                    let pool = if rng.random_bool(spec.sub_discipline_affinity) && targets.len() < sub_members.len() {
                        &sub_members
                    } else {
                        &members
                    };
                    let q = *pool.choose(&mut rng).expect("pools are nonempty");
                    if !targets.contains(&q) {
                        targets.push(q);
                    }
                }
                targets
            })
            .collect()
    };
    let within_share = spec.within_probability / (spec.within_probability + spec.cross_probability);

    // Earlier papers, grouped three ways.
    let mut by_venue: Vec<Vec<u32>> = vec![Vec::new(); n_periodicals];
    let mut by_sub: Vec<Vec<u32>> = vec![Vec::new(); n_subs];
    let mut by_discipline: Vec<Vec<u32>> = vec![Vec::new(); k];

    let mut venues = Vec::with_capacity(n_papers);
    let mut edges = Vec::with_capacity(n_papers * spec.citations_per_paper);
    for paper in 0..n_papers {
        let d = paper % k;
        let venue = d * spec.periodicals_per_discipline + rng.random_range(0..spec.periodicals_per_discipline);
        let sub = periodical_sub[venue];
        for _ in 0..spec.citations_per_paper {
            let pool: &[u32] = if rng.random_bool(spec.self_venue_probability) {
                &by_venue[venue]
            } else if rng.random_bool(within_share) {
                if let Some(targets) = specialty.get(venue) {
                    &by_venue[*targets.choose(&mut rng).expect("specialty sets are nonempty")]
                } else if rng.random_bool(spec.sub_discipline_affinity) {
                    &by_sub[sub]
                } else {
                    &by_discipline[d]
                }
            } else if k == 1 {
                continue;
            } else if rng.random_bool(spec.cross_partner_share) {
                &by_venue[partner[venue]]
            } else {
                let other = (d + rng.random_range(1..k)) % k;
                &by_discipline[other]
            };
            if let Some(&cited) = pool.choose(&mut rng) {
                edges.push((paper as u32, cited));
            }
        }
        by_venue[venue].push(paper as u32);
        by_sub[sub].push(paper as u32);
        by_discipline[d].push(paper as u32);
        venues.push(PeriodicalId(venue as u32));
    }

    let names = (0..n_periodicals).map(|p| p.to_string()).collect();
    let (graph, _) = PaperGraph::from_parts(venues, names, &edges)?;
    Ok(SyntheticNetwork {
        spec: spec.clone(),
        graph,
        periodical_discipline,
        periodical_sub_discipline: periodical_sub,
        partner,
    })
}

/// Parameters for planting authorship consistent with the citation
/// structure.
#[derive(Debug, Clone, PartialEq)]
pub struct AuthorshipSpec {
    pub authors_per_sub_discipline: usize,
    pub authors_per_paper: usize,
    /// Probability that an author slot is filled from the paper's own
    /// sub-discipline pool; otherwise it repeats an author of a random cited
    /// paper.
    pub home_probability: f64,
    pub seed: u64,
}

impl Default for AuthorshipSpec {
    fn default() -> Self {
        AuthorshipSpec {
            authors_per_sub_discipline: 200,
            authors_per_paper: 3,
            home_probability: 0.6,
            seed: 0,
        }
    }
}

/// Emits `(paper_id, author_id)` rows. Authors originate in sub-discipline
/// pools and then travel along citations: a paper may share an author with
/// a paper it cites. Authorship therefore diffuses along citation chains,
/// the same paths the trails follow.
pub fn generate_synthetic_authorship(net: &SyntheticNetwork, spec: &AuthorshipSpec) -> Result<Vec<(u64, u64)>> {
    if spec.authors_per_sub_discipline == 0 || spec.authors_per_paper == 0 {
        return Err(Error::Config("authorship spec: counts must be positive".into()));
    }
    if !(0.0..=1.0).contains(&spec.home_probability) {
        return Err(Error::Config("authorship spec: home_probability must lie in [0, 1]".into()));
    }
    let mut rng = seed::stream(spec.seed, "synthetic-authorship", 0);
    let g = &net.graph;
    let pool = spec.authors_per_sub_discipline as u64;
    let sub_of = |paper: usize| net.periodical_sub_discipline[g.venue(paper).index()] as u64;
    let per = spec.authors_per_paper;
    let mut rows: Vec<(u64, u64)> = Vec::with_capacity(g.paper_count() * per);
    for paper in 0..g.paper_count() {
        let refs = g.out_edges(paper);
        for _ in 0..per {
            // Cited papers precede the citing one, so their authors exist.
            let author = match refs.choose(&mut rng) {
                Some(&r) if !rng.random_bool(spec.home_probability) => {
                    rows[r as usize * per + rng.random_range(0..per)].1
                }
                _ => sub_of(paper) * pool + rng.random_range(0..pool),
            };
            rows.push((g.paper_id(paper), author));
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_cross_means_no_inter_discipline_edges() {
        let spec = SyntheticSpec {
            cross_probability: 0.0,
            seed: 5,
            ..Default::default()
        };
        let net = generate_synthetic_graph(&spec).unwrap();
        let g = &net.graph;
        assert!(g.edge_count() > 0);
        for (a, b) in g.edges() {
            assert_eq!(
                net.periodical_discipline[g.venue(a).index()],
                net.periodical_discipline[g.venue(b).index()]
            );
        }
    }

    #[test]
    fn within_fraction_matches_expectation() {
        let spec = SyntheticSpec {
            disciplines: 2,
            papers_per_discipline: 5000,
            within_probability: 0.7,
            cross_probability: 0.3,
            seed: 9,
            ..Default::default()
        };
        let net = generate_synthetic_graph(&spec).unwrap();
        let g = &net.graph;
        let within = g
            .edges()
            .filter(|&(a, b)| {
                net.periodical_discipline[g.venue(a).index()]
                    == net.periodical_discipline[g.venue(b).index()]
            })
            .count();
        let frac = within as f64 / g.edge_count() as f64;
        assert!((frac - 0.7).abs() <= 0.02, "within fraction {frac}");
    }

    #[test]
    fn same_seed_is_bit_identical() {
        let spec = SyntheticSpec {
            sub_disciplines: 2,
            sub_discipline_affinity: 0.5,
            cross_partner_share: 0.3,
            seed: 21,
            ..Default::default()
        };
        let a = generate_synthetic_graph(&spec).unwrap();
        let b = generate_synthetic_graph(&spec).unwrap();
        assert_eq!(a.graph, b.graph);
        let c = generate_synthetic_graph(&SyntheticSpec { seed: 22, ..spec }).unwrap();
        assert_ne!(a.graph, c.graph);
    }

    #[test]
    fn citations_point_backwards() {
        let net = generate_synthetic_graph(&SyntheticSpec::default()).unwrap();
        assert!(net.graph.edges().all(|(a, b)| b < a));
    }

    #[test]
    fn self_venue_share() {
        let spec = SyntheticSpec {
            self_venue_probability: 0.8,
            seed: 3,
            ..Default::default()
        };
        let net = generate_synthetic_graph(&spec).unwrap();
        let g = &net.graph;
        let own = g.edges().filter(|&(a, b)| g.venue(a) == g.venue(b)).count();
        // 0.8 explicit plus the within-discipline draws that happen to hit
        // the same venue (0.2 * 0.8 / 10).
        let frac = own as f64 / g.edge_count() as f64;
        assert!((frac - 0.816).abs() < 0.02, "own-venue fraction {frac}");
    }

    #[test]
    fn infeasible_specs_rejected() {
        let too_many = SyntheticSpec {
            disciplines: 1,
            papers_per_discipline: 3,
            citations_per_paper: 3,
            ..Default::default()
        };
        assert!(matches!(generate_synthetic_graph(&too_many), Err(Error::Config(_))));
        let inverted = SyntheticSpec {
            within_probability: 0.1,
            cross_probability: 0.5,
            ..Default::default()
        };
        assert!(generate_synthetic_graph(&inverted).is_err());
        let zero = SyntheticSpec {
            disciplines: 0,
            ..Default::default()
        };
        assert!(generate_synthetic_graph(&zero).is_err());
    }

    #[test]
    fn specialty_limits_discipline_targets() {
        let spec = SyntheticSpec {
            cross_probability: 0.0,
            periodicals_per_discipline: 20,
            specialty: 3,
            seed: 4,
            ..Default::default()
        };
        let net = generate_synthetic_graph(&spec).unwrap();
        let g = &net.graph;
        let mut targets = vec![std::collections::BTreeSet::new(); g.periodical_count()];
        for (a, b) in g.edges() {
            targets[g.venue(a).index()].insert(g.venue(b).index());
        }
        for (p, t) in targets.iter().enumerate() {
            assert!(!t.is_empty() && t.len() <= 3, "periodical {p} cites {t:?}");
            assert!(t.iter().all(|&q| net.periodical_discipline[q] == net.periodical_discipline[p]));
        }
    }

    #[test]
    fn sub_discipline_blocks() {
        let spec = SyntheticSpec {
            periodicals_per_discipline: 10,
            sub_disciplines: 3,
            ..Default::default()
        };
        let subs: Vec<usize> = (0..10).map(|p| spec.sub_discipline_of(p)).collect();
        assert_eq!(subs, vec![0, 0, 0, 0, 1, 1, 1, 2, 2, 2]);
        assert_eq!(spec.sub_discipline_of(10), 3);
    }

    #[test]
    fn authorship_rows() {
        let net = generate_synthetic_graph(&SyntheticSpec::default()).unwrap();
        let spec = AuthorshipSpec::default();
        let rows = generate_synthetic_authorship(&net, &spec).unwrap();
        assert_eq!(rows.len(), net.graph.paper_count() * spec.authors_per_paper);
        assert_eq!(rows, generate_synthetic_authorship(&net, &spec).unwrap());
    }
}
