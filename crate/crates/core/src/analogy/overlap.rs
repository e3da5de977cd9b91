use std::collections::{HashMap, HashSet};

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;

use super::authors::{author_overlap, AuthorIndex};
use super::graph::{AnalogyGraph, Direction};
use crate::{Error, Result};

/// Which edges count as cyclic and are left out of the overlap test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum CycleRule {
    /// Any edge inside a strongly connected component.
    #[default]
    AnyCycle,
    /// Only edges whose reverse edge is also present.
    TwoCycles,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OverlapFraction {
    pub satisfied: usize,
    /// Acyclic edges with at least one defined overlap ratio.
    pub considered: usize,
    pub cyclic_edges: usize,
    /// Acyclic edges skipped because both ratios were `0/0`-like.
    pub undefined_edges: usize,
}

impl OverlapFraction {
    pub fn fraction(&self) -> Option<f64> {
        (self.considered > 0).then(|| self.satisfied as f64 / self.considered as f64)
    }
}

/// `O(x, away) / O(x, toward)`, with `n/0 = +∞` for `n > 0` and `None` for
/// `0/0`.
fn ratio(idx: &AuthorIndex, x: &str, away: &str, toward: &str) -> Result<Option<f64>> {
    let num = author_overlap(idx, x, away)?;
    let den = author_overlap(idx, x, toward)?;
    Ok(match (num, den) {
        (0, 0) => None,
        (_, 0) => Some(f64::INFINITY),
        (n, d) => Some(n as f64 / d as f64),
    })
}

fn cyclic_edges(g: &AnalogyGraph, rule: CycleRule) -> Vec<bool> {
    match rule {
        CycleRule::TwoCycles => {
            let pairs: HashSet<(&str, &str)> = g.edges.iter().map(|e| (e.src.as_str(), e.dst.as_str())).collect();
            g.edges.iter().map(|e| pairs.contains(&(e.dst.as_str(), e.src.as_str()))).collect()
        }
        CycleRule::AnyCycle => {
            let mut dg = DiGraph::<(), ()>::new();
            let ids: HashMap<&str, _> = g.nodes.iter().map(|n| (n.as_str(), dg.add_node(()))).collect();
            for e in &g.edges {
                dg.add_edge(ids[e.src.as_str()], ids[e.dst.as_str()], ());
            }
            let mut component = vec![0; g.nodes.len()];
            for (c, scc) in tarjan_scc(&dg).into_iter().enumerate() {
                for n in scc {
                    component[n.index()] = c;
                }
            }
            g.edges
                .iter()
                .map(|e| component[ids[e.src.as_str()].index()] == component[ids[e.dst.as_str()].index()])
                .collect()
        }
    }
}

/// Share of acyclic edges `C → D` satisfying
/// `O(C, A) / O(C, B) > O(D, A) / O(D, B)`, where `B` is the pole the edge
/// moves toward and `A` the pole it moves away from.
///
/// A ratio with a zero denominator and positive numerator is `+∞`; an edge
/// where either ratio is `0/0` is skipped. Fails with
/// [`Error::Undefined`] when no edge remains.
pub fn analogy_graph_overlap_fraction(g: &AnalogyGraph, idx: &AuthorIndex, rule: CycleRule) -> Result<OverlapFraction> {
    let cyclic = cyclic_edges(g, rule);
    let mut out = OverlapFraction { satisfied: 0, considered: 0, cyclic_edges: 0, undefined_edges: 0 };
    for (e, &cyc) in g.edges.iter().zip(&cyclic) {
        if cyc {
            out.cyclic_edges += 1;
            continue;
        }
        let (away, toward) = match e.direction {
            Direction::TowardB => (&g.pole_a, &g.pole_b),
            Direction::TowardA => (&g.pole_b, &g.pole_a),
        };
        match (ratio(idx, &e.src, away, toward)?, ratio(idx, &e.dst, away, toward)?) {
            (Some(c), Some(d)) => {
                out.considered += 1;
                if c > d {
                    out.satisfied += 1;
                }
            }
            _ => out.undefined_edges += 1,
        }
    }
    if out.considered == 0 {
        return Err(Error::Undefined("analogy graph has no acyclic edge with defined overlaps".into()));
    }
    Ok(out)
}
