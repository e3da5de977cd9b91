use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::{Error, Result};

/// Dense periodical index, assigned in first-seen order when a graph is
/// loaded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PeriodicalId(pub u32);

impl PeriodicalId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Paper-level citation network in compressed sparse row form.
///
/// Papers are addressed by dense indices `0..paper_count()`. Each paper has
/// exactly one venue. Self-citations never appear in the adjacency; parallel
/// citations are kept and weight the uniform choice of a random walk.
#[derive(Debug, Clone, PartialEq)]
pub struct PaperGraph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    venues: Vec<PeriodicalId>,
    paper_ids: Vec<u64>,
    periodical_names: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LoadReport {
    pub papers: usize,
    pub periodicals: usize,
    pub edges: usize,
    pub self_loops_dropped: usize,
}

impl PaperGraph {
    /// Builds a graph from dense parts. Edges keep their relative order per
    /// citing paper; self-loops are dropped and counted in the return value.
    pub fn from_parts(
        venues: Vec<PeriodicalId>,
        periodical_names: Vec<String>,
        edges: &[(u32, u32)],
    ) -> Result<(Self, usize)> {
        let n = venues.len();
        if let Some(v) = venues.iter().find(|v| v.index() >= periodical_names.len()) {
            return Err(Error::Integrity(format!(
                "venue id {} has no periodical name",
                v.0
            )));
        }
        let mut counts = vec![0usize; n + 1];
        let mut self_loops = 0;
        for &(src, dst) in edges {
            if src as usize >= n || dst as usize >= n {
                return Err(Error::Integrity(format!(
                    "edge {src}->{dst} references a paper outside 0..{n}"
                )));
            }
            if src == dst {
                self_loops += 1;
            } else {
                counts[src as usize + 1] += 1;
            }
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let offsets = counts.clone();
        let mut cursor = counts;
        let mut targets = vec![0u32; offsets[n]];
        for &(src, dst) in edges {
            if src != dst {
                let slot = &mut cursor[src as usize];
                targets[*slot] = dst;
                *slot += 1;
            }
        }
        let graph = PaperGraph {
            offsets,
            targets,
            venues,
            paper_ids: (0..n as u64).collect(),
            periodical_names,
        };
        Ok((graph, self_loops))
    }

    pub(crate) fn with_paper_ids(mut self, ids: Vec<u64>) -> Self {
        debug_assert_eq!(ids.len(), self.venues.len());
        self.paper_ids = ids;
        self
    }

    pub fn paper_count(&self) -> usize {
        self.venues.len()
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    pub fn periodical_count(&self) -> usize {
        self.periodical_names.len()
    }

    pub fn out_edges(&self, paper: usize) -> &[u32] {
        &self.targets[self.offsets[paper]..self.offsets[paper + 1]]
    }

    pub fn out_degree(&self, paper: usize) -> usize {
        self.offsets[paper + 1] - self.offsets[paper]
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.paper_count()];
        for &t in &self.targets {
            deg[t as usize] += 1;
        }
        deg
    }

    pub fn venue(&self, paper: usize) -> PeriodicalId {
        self.venues[paper]
    }

    pub fn venues(&self) -> &[PeriodicalId] {
        &self.venues
    }

    /// External id of a paper as it appeared in the input files.
    pub fn paper_id(&self, paper: usize) -> u64 {
        self.paper_ids[paper]
    }

    pub fn periodical_name(&self, id: PeriodicalId) -> &str {
        &self.periodical_names[id.index()]
    }

    pub fn periodical_names(&self) -> &[String] {
        &self.periodical_names
    }

    /// Iterates `(citing, cited)` pairs in adjacency order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.paper_count())
            .flat_map(move |p| self.out_edges(p).iter().map(move |&q| (p, q as usize)))
    }

    /// Index from external paper id to dense index.
    pub fn paper_index(&self) -> HashMap<u64, usize> {
        self.paper_ids
            .iter()
            .enumerate()
            .map(|(i, &id)| (id, i))
            .collect()
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::io(path, e))
}

fn two_fields<'a>(path: &Path, lineno: usize, line: &'a str) -> Result<(&'a str, &'a str)> {
    let mut parts = line.split('\t');
    match (parts.next(), parts.next(), parts.next()) {
        (Some(a), Some(b), None) if !a.is_empty() && !b.is_empty() => Ok((a, b)),
        _ => Err(Error::parse(
            path,
            lineno,
            format!("expected two tab-separated fields, got `{line}`"),
        )),
    }
}

fn parse_id(path: &Path, lineno: usize, field: &str) -> Result<u64> {
    field
        .trim()
        .parse()
        .map_err(|_| Error::parse(path, lineno, format!("invalid paper id `{field}`")))
}

/// Loads `edges.tsv` (`citing\tcited`) and `papers.tsv` (`paper\tperiodical`).
///
/// Periodicals receive dense ids in first-seen order of the papers file.
pub fn load_citation_graph(
    edges_path: impl AsRef<Path>,
    papers_path: impl AsRef<Path>,
) -> Result<(PaperGraph, LoadReport)> {
    let edges_path = edges_path.as_ref();
    let papers_path = papers_path.as_ref();

    let mut paper_index: HashMap<u64, u32> = HashMap::new();
    let mut paper_ids = Vec::new();
    let mut venues = Vec::new();
    let mut periodical_index: HashMap<String, PeriodicalId> = HashMap::new();
    let mut periodical_names = Vec::new();

    for (i, line) in open(papers_path)?.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| Error::io(papers_path, e))?;
        if line.is_empty() {
            continue;
        }
        let (paper, venue) = two_fields(papers_path, lineno, &line)?;
        let paper = parse_id(papers_path, lineno, paper)?;
        let venue = venue.trim();
        if venue.contains(char::is_whitespace) {
            return Err(Error::parse(
                papers_path,
                lineno,
                format!("periodical id `{venue}` contains whitespace"),
            ));
        }
        if paper_index.contains_key(&paper) {
            return Err(Error::Integrity(format!(
                "paper {paper} has more than one venue row ({}:{lineno})",
                papers_path.display()
            )));
        }
        let next = PeriodicalId(periodical_names.len() as u32);
        let pid = *periodical_index.entry(venue.to_string()).or_insert_with(|| {
            periodical_names.push(venue.to_string());
            next
        });
        paper_index.insert(paper, paper_ids.len() as u32);
        paper_ids.push(paper);
        venues.push(pid);
    }

    let mut edges = Vec::new();
    for (i, line) in open(edges_path)?.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| Error::io(edges_path, e))?;
        if line.is_empty() {
            continue;
        }
        let (src, dst) = two_fields(edges_path, lineno, &line)?;
        let src = parse_id(edges_path, lineno, src)?;
        let dst = parse_id(edges_path, lineno, dst)?;
        let lookup = |id: u64| {
            paper_index.get(&id).copied().ok_or_else(|| {
                Error::Integrity(format!(
                    "paper {id} at {}:{lineno} has no venue row",
                    edges_path.display()
                ))
            })
        };
        edges.push((lookup(src)?, lookup(dst)?));
    }

    let (graph, self_loops_dropped) = PaperGraph::from_parts(venues, periodical_names, &edges)?;
    let graph = graph.with_paper_ids(paper_ids);
    let report = LoadReport {
        papers: graph.paper_count(),
        periodicals: graph.periodical_count(),
        edges: graph.edge_count(),
        self_loops_dropped,
    };
    Ok((graph, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;
    use std::io::Write;

    fn write(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
        let path = dir.join(name);
        std::fs::File::create(&path)
            .unwrap()
            .write_all(body.as_bytes())
            .unwrap();
        path
    }

    #[test]
    fn minimal_chain() {
        let dir = tempfile::tempdir().unwrap();
        let e = write(dir.path(), "e.tsv", "1\t2\n2\t3\n");
        let p = write(dir.path(), "p.tsv", "1\tA\n2\tB\n3\tA\n");
        let (g, report) = load_citation_graph(&e, &p).unwrap();
        assert_eq!(g.paper_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(report.edges, 2);
        assert_eq!(g.periodical_count(), 2);
        assert_eq!(g.venue(0), g.venue(2));
        assert_eq!(g.periodical_name(g.venue(1)), "B");
    }

    #[test]
    fn self_loop_is_dropped() {
        let dir = tempfile::tempdir().unwrap();
        let e = write(dir.path(), "e.tsv", "1\t1\n");
        let p = write(dir.path(), "p.tsv", "1\tA\n");
        let (g, report) = load_citation_graph(&e, &p).unwrap();
        assert_eq!(g.out_degree(0), 0);
        assert_eq!(report.self_loops_dropped, 1);
    }

    #[test]
    fn duplicates_are_kept() {
        let dir = tempfile::tempdir().unwrap();
        let e = write(dir.path(), "e.tsv", "1\t2\n1\t2\n1\t3\n");
        let p = write(dir.path(), "p.tsv", "1\tA\n2\tB\n3\tA\n");
        let (g, _) = load_citation_graph(&e, &p).unwrap();
        assert_eq!(g.out_edges(0), &[1, 1, 2]);
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let dir = tempfile::tempdir().unwrap();
        let e = write(dir.path(), "e.tsv", "1\t2\n2 3\n");
        let p = write(dir.path(), "p.tsv", "1\tA\n2\tB\n3\tA\n");
        match load_citation_graph(&e, &p) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        let e = write(dir.path(), "e2.tsv", "1\tx\n");
        assert!(matches!(
            load_citation_graph(&e, &p),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn dangling_paper_is_integrity_error() {
        let dir = tempfile::tempdir().unwrap();
        let e = write(dir.path(), "e.tsv", "1\t9\n");
        let p = write(dir.path(), "p.tsv", "1\tA\n");
        assert!(matches!(
            load_citation_graph(&e, &p),
            Err(Error::Integrity(_))
        ));
    }

    #[test]
    fn duplicate_venue_row_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let e = write(dir.path(), "e.tsv", "");
        let p = write(dir.path(), "p.tsv", "1\tA\n1\tB\n");
        assert!(matches!(
            load_citation_graph(&e, &p),
            Err(Error::Integrity(_))
        ));
    }

    #[test]
    fn random_file_matches_reparse() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let dir = tempfile::tempdir().unwrap();
        let ids: Vec<u64> = (0..10).map(|i| 1000 + i * 7).collect();
        let mut papers = String::new();
        for &id in &ids {
            papers.push_str(&format!("{id}\tV{}\n", rng.random_range(0..3)));
        }
        let mut edges = String::new();
        for _ in 0..40 {
            let a = ids[rng.random_range(0..10)];
            let b = ids[rng.random_range(0..10)];
            edges.push_str(&format!("{a}\t{b}\n"));
        }
        let e = write(dir.path(), "e.tsv", &edges);
        let p = write(dir.path(), "p.tsv", &papers);
        let (g, _) = load_citation_graph(&e, &p).unwrap();

        // Independent oracle: multiset of non-loop (citing, cited) external pairs.
        let mut expected: BTreeMap<(u64, u64), usize> = BTreeMap::new();
        for line in edges.lines() {
            let mut it = line.split('\t').map(|s| s.parse::<u64>().unwrap());
            let (a, b) = (it.next().unwrap(), it.next().unwrap());
            if a != b {
                *expected.entry((a, b)).or_default() += 1;
            }
        }
        let mut got: BTreeMap<(u64, u64), usize> = BTreeMap::new();
        for (s, d) in g.edges() {
            *got.entry((g.paper_id(s), g.paper_id(d))).or_default() += 1;
        }
        assert_eq!(got, expected);
    }
}
