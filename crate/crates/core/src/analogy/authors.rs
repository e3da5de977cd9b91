use std::collections::{BTreeSet, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::corpus::PaperGraph;
use crate::{Error, Result};

/// Authors who published in each periodical, as sorted deduplicated lists.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AuthorIndex {
    authors: HashMap<String, Vec<u64>>,
    /// Authorship rows naming papers absent from the graph.
    pub skipped_rows: usize,
}

impl AuthorIndex {
    /// Builds the index directly from periodical → author pairs.
    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, u64)>) -> Self {
        let mut sets: HashMap<String, BTreeSet<u64>> = HashMap::new();
        for (p, a) in pairs {
            sets.entry(p.to_string()).or_default().insert(a);
        }
        AuthorIndex {
            authors: sets.into_iter().map(|(k, v)| (k, v.into_iter().collect())).collect(),
            skipped_rows: 0,
        }
    }

    /// Joins `(paper_id, author_id)` rows with paper venues. Every
    /// periodical of the graph is indexed, possibly with no authors.
    pub fn from_authorship(g: &PaperGraph, rows: &[(u64, u64)]) -> Self {
        let papers = g.paper_index();
        let mut sets: Vec<BTreeSet<u64>> = vec![BTreeSet::new(); g.periodical_count()];
        let mut skipped = 0;
        for &(paper, author) in rows {
            match papers.get(&paper) {
                Some(&p) => {
                    sets[g.venue(p).index()].insert(author);
                }
                None => skipped += 1,
            }
        }
        if skipped > 0 {
            log::warn!("{skipped} authorship rows name papers outside the citation graph");
        }
        AuthorIndex {
            authors: g
                .periodical_names()
                .iter()
                .cloned()
                .zip(sets.into_iter().map(|s| s.into_iter().collect()))
                .collect(),
            skipped_rows: skipped,
        }
    }

    /// Reads `paper_id\tauthor_id` lines and joins them with the graph.
    pub fn load(path: impl AsRef<Path>, g: &PaperGraph) -> Result<Self> {
        let path = path.as_ref();
        let reader = BufReader::new(File::open(path).map_err(|e| Error::io(path, e))?);
        let mut rows = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::io(path, e))?;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let mut f = line.split('\t');
            let parse = |s: Option<&str>| s.and_then(|s| s.trim().parse::<u64>().ok());
            match (parse(f.next()), parse(f.next()), f.next()) {
                (Some(p), Some(a), None) => rows.push((p, a)),
                _ => return Err(Error::parse(path, i + 1, "expected `<paper_id>\\t<author_id>`")),
            }
        }
        Ok(Self::from_authorship(g, &rows))
    }

    pub fn authors(&self, periodical: &str) -> Option<&[u64]> {
        self.authors.get(periodical).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.authors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.authors.is_empty()
    }
}

fn sorted_intersection(a: &[u64], b: &[u64]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Number of authors who published in both periodicals.
pub fn author_overlap(idx: &AuthorIndex, p1: &str, p2: &str) -> Result<usize> {
    let get = |p: &str| idx.authors(p).ok_or_else(|| Error::Lookup(format!("periodical `{p}` not in author index")));
    Ok(sorted_intersection(get(p1)?, get(p2)?))
}
