use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::corpus::PaperGraph;
use crate::{Error, Result};

/// Citation counts between periodicals: `get(i, j)` is the number of
/// paper-level citations from periodical `i` to periodical `j`, diagonal
/// included. Rows and columns are kept sorted by index.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicalCitationMatrix {
    names: Vec<String>,
    rows: Vec<Vec<(u32, u64)>>,
    cols: Vec<Vec<(u32, u64)>>,
}

impl PeriodicalCitationMatrix {
    /// Builds from `(citing, cited, count)` triples; repeated cells add up.
    pub fn from_triples(names: Vec<String>, triples: impl IntoIterator<Item = (u32, u32, u64)>) -> Result<Self> {
        let n = names.len();
        let mut cells: HashMap<(u32, u32), u64> = HashMap::new();
        for (i, j, c) in triples {
            if i as usize >= n || j as usize >= n {
                return Err(Error::Integrity(format!("cell ({i}, {j}) outside {n} periodicals")));
            }
            if c > 0 {
                *cells.entry((i, j)).or_default() += c;
            }
        }
        Ok(Self::from_cells(names, cells))
    }

    fn from_cells(names: Vec<String>, cells: HashMap<(u32, u32), u64>) -> Self {
        let n = names.len();
        let mut rows = vec![Vec::new(); n];
        let mut cols = vec![Vec::new(); n];
        for ((i, j), c) in cells {
            rows[i as usize].push((j, c));
            cols[j as usize].push((i, c));
        }
        rows.iter_mut().chain(cols.iter_mut()).for_each(|v| v.sort_unstable());
        PeriodicalCitationMatrix { names, rows, cols }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        let row = &self.rows[i];
        row.binary_search_by_key(&(j as u32), |e| e.0)
            .map_or(0, |k| row[k].1)
    }

    /// Nonzero cells of row `i` (citations made by `i`).
    pub fn row(&self, i: usize) -> &[(u32, u64)] {
        &self.rows[i]
    }

    /// Nonzero cells of column `j` (citations received by `j`).
    pub fn col(&self, j: usize) -> &[(u32, u64)] {
        &self.cols[j]
    }

    pub fn total(&self) -> u64 {
        self.rows.iter().flatten().map(|e| e.1).sum()
    }

    /// Undirected weight `C[i][j] + C[j][i]` for every `j` with a nonzero
    /// entry, sorted by `j`. The diagonal is reported once as `C[i][i]`.
    pub fn undirected_row(&self, i: usize) -> Vec<(u32, u64)> {
        let mut merged: Vec<(u32, u64)> = Vec::with_capacity(self.rows[i].len() + self.cols[i].len());
        let (mut a, mut b) = (self.rows[i].iter().peekable(), self.cols[i].iter().peekable());
        loop {
            let next = match (a.peek(), b.peek()) {
                (Some(x), Some(y)) if x.0 == y.0 => {
                    let w = if x.0 as usize == i { x.1 } else { x.1 + y.1 };
                    let out = (x.0, w);
                    a.next();
                    b.next();
                    out
                }
                (Some(x), Some(y)) if x.0 < y.0 => *a.next().unwrap(),
                (Some(_), Some(_)) => *b.next().unwrap(),
                (Some(_), None) => *a.next().unwrap(),
                (None, Some(_)) => *b.next().unwrap(),
                (None, None) => break,
            };
            merged.push(next);
        }
        merged
    }

    /// Writes `i\tj\tcount` lines sorted by `(i, j)`.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = BufWriter::new(file);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, c) in row {
                writeln!(out, "{i}\t{j}\t{c}").map_err(|e| Error::io(path, e))?;
            }
        }
        out.flush().map_err(|e| Error::io(path, e))
    }

    /// Reads the coordinate format; `names` gives the periodical of each
    /// dense index.
    pub fn load(path: impl AsRef<Path>, names: Vec<String>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut triples = Vec::new();
        for (k, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| Error::io(path, e))?;
            if line.is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split('\t').collect();
            let parsed = (f.len() == 3)
                .then(|| Some((f[0].parse().ok()?, f[1].parse().ok()?, f[2].parse().ok()?)))
                .flatten();
            let Some(t) = parsed else {
                return Err(Error::parse(path, k + 1, "expected `i\\tj\\tcount`"));
            };
            triples.push(t);
        }
        Self::from_triples(names, triples)
    }
}

/// Aggregates paper-level citations by venue. Workers tally disjoint paper
/// ranges and the partial counts are merged once.
pub fn build_periodical_citation_matrix(g: &PaperGraph) -> PeriodicalCitationMatrix {
    let chunk = 4096;
    let cells = (0..g.paper_count().div_ceil(chunk))
        .into_par_iter()
        .fold(HashMap::new, |mut acc: HashMap<(u32, u32), u64>, block| {
            for p in block * chunk..((block + 1) * chunk).min(g.paper_count()) {
                let src = g.venue(p).0;
                for &q in g.out_edges(p) {
                    *acc.entry((src, g.venue(q as usize).0)).or_default() += 1;
                }
            }
            acc
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            a
        });
    PeriodicalCitationMatrix::from_cells(g.periodical_names().to_vec(), cells)
}
