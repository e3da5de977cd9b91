use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use crate::evaluation::DisciplineCatalog;
use crate::model::{best_composite_match, VectorModel};
use crate::{Error, Result};

/// Expansion depth used when none is given.
pub const DEFAULT_MAX_DEPTH: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Edge target is the best match for `v(X) − v(A) + v(B)`.
    TowardB,
    /// Edge target is the best match for `v(X) − v(B) + v(A)`.
    TowardA,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::TowardB => "toward_B",
            Direction::TowardA => "toward_A",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnalogyEdge {
    pub src: String,
    pub dst: String,
    pub direction: Direction,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnalogyGraph {
    pub pole_a: String,
    pub pole_b: String,
    pub seed: String,
    pub max_depth: usize,
    /// Nodes in discovery order; the seed comes first.
    pub nodes: Vec<String>,
    pub edges: Vec<AnalogyEdge>,
}

impl AnalogyGraph {
    /// Tab-separated `src dst direction` lines.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for e in &self.edges {
            let _ = writeln!(out, "{}\t{}\t{}", e.src, e.dst, e.direction.as_str());
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("analogy graph serializes")
    }

    pub fn out_edges<'a>(&'a self, node: &'a str) -> impl Iterator<Item = &'a AnalogyEdge> + 'a {
        self.edges.iter().filter(move |e| e.src == node)
    }
}

/// Grows an analogy graph breadth-first from `seed`. Each expanded node `X`
/// gets at most one edge per direction, pointing at the best-scoring
/// periodical other than `X` and the two poles. Targets already in the
/// graph receive the edge but are not expanded again; nodes at
/// `max_depth` are not expanded.
///
/// With a catalog, candidate targets are limited to the seed's discipline.
pub fn build_analogy_graph(
    model: &dyn VectorModel,
    pole_a: &str,
    pole_b: &str,
    seed: &str,
    max_depth: usize,
    same_discipline: Option<&DisciplineCatalog>,
) -> Result<AnalogyGraph> {
    if model.len() < 4 {
        return Err(Error::Config("analogy graphs need at least four periodicals".into()));
    }
    if pole_a == pole_b || pole_a == seed || pole_b == seed {
        return Err(Error::Config("poles and seed must be distinct".into()));
    }
    let row = |id: &str| model.row_of(id).ok_or_else(|| Error::Lookup(format!("unknown periodical `{id}`")));
    let (a, b, s) = (row(pole_a)?, row(pole_b)?, row(seed)?);

    let allowed: Option<Vec<bool>> = match same_discipline {
        None => None,
        Some(cat) => {
            let d = cat
                .discipline(seed)
                .ok_or_else(|| Error::Lookup(format!("seed `{seed}` has no discipline label")))?;
            Some((0..model.len()).map(|r| cat.discipline(model.key(r)) == Some(d)).collect())
        }
    };
    let keep = |r: usize| allowed.as_ref().is_none_or(|m| m[r]);

    let mut graph = AnalogyGraph {
        pole_a: pole_a.to_string(),
        pole_b: pole_b.to_string(),
        seed: seed.to_string(),
        max_depth,
        nodes: vec![seed.to_string()],
        edges: Vec::new(),
    };
    let mut seen: HashSet<usize> = HashSet::from([s]);
    let mut queue = VecDeque::from([(s, 0usize)]);
    while let Some((x, depth)) = queue.pop_front() {
        if depth >= max_depth {
            continue;
        }
        for (direction, from, to) in [(Direction::TowardB, a, b), (Direction::TowardA, b, a)] {
            let terms = [(x, 1.0), (from, -1.0), (to, 1.0)];
            let target = match best_composite_match(model, &terms, &[x, a, b], keep) {
                Ok(t) => t,
                Err(Error::UndefinedSimilarity) => None,
                Err(e) => return Err(e),
            };
            let Some(t) = target else { continue };
            graph.edges.push(AnalogyEdge {
                src: model.key(x).to_string(),
                dst: model.key(t).to_string(),
                direction,
            });
            if seen.insert(t) {
                graph.nodes.push(model.key(t).to_string());
                queue.push_back((t, depth + 1));
            }
        }
    }
    Ok(graph)
}
