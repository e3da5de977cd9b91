use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::{Error, Result};

/// Periodical trails stored flat: `tokens[offsets[i]..offsets[i + 1]]` is
/// trail `i`. Token values index into `names`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrailCorpus {
    names: Vec<String>,
    tokens: Vec<u32>,
    offsets: Vec<usize>,
    pub seed: Option<u64>,
}

impl TrailCorpus {
    pub fn new(names: Vec<String>) -> Self {
        TrailCorpus {
            names,
            tokens: Vec::new(),
            offsets: vec![0],
            seed: None,
        }
    }

    /// Appends one trail of periodical ids. Panics on ids outside `names`.
    pub fn push_ids(&mut self, trail: &[u32]) {
        assert!(trail.iter().all(|&t| (t as usize) < self.names.len()));
        self.tokens.extend_from_slice(trail);
        self.offsets.push(self.tokens.len());
    }

    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn token_count(&self) -> usize {
        self.tokens.len()
    }

    pub fn trail(&self, i: usize) -> &[u32] {
        &self.tokens[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> + '_ {
        (0..self.len()).map(move |i| self.trail(i))
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, id: u32) -> &str {
        &self.names[id as usize]
    }
}

/// Writes one trail per line as space-separated periodical names.
pub fn write_trails(corpus: &TrailCorpus, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    let io = |e| Error::io(path, e);
    for trail in corpus.iter() {
        for (i, &t) in trail.iter().enumerate() {
            if i > 0 {
                out.write_all(b" ").map_err(io)?;
            }
            out.write_all(corpus.name(t).as_bytes()).map_err(io)?;
        }
        out.write_all(b"\n").map_err(io)?;
    }
    out.flush().map_err(io)
}

/// Reads a trail file, interning periodical names in first-seen order.
pub fn read_trails(path: impl AsRef<Path>) -> Result<TrailCorpus> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut index: HashMap<String, u32> = HashMap::new();
    let mut corpus = TrailCorpus::new(Vec::new());
    let mut buf = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        buf.clear();
        for tok in line.split_whitespace() {
            let id = match index.get(tok) {
                Some(&id) => id,
                None => {
                    let id = corpus.names.len() as u32;
                    corpus.names.push(tok.to_string());
                    index.insert(tok.to_string(), id);
                    id
                }
            };
            buf.push(id);
        }
        if buf.len() < 2 {
            return Err(Error::parse(path, i + 1, "trail has fewer than two periodicals"));
        }
        corpus.push_ids(&buf);
    }
    Ok(corpus)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn write_then_read() {
        let mut c = TrailCorpus::new(vec!["A".into(), "B".into(), "C".into()]);
        c.push_ids(&[2, 0, 0]);
        c.push_ids(&[1, 2]);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.txt");
        write_trails(&c, &path).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "C A A\nB C\n");
        let back = read_trails(&path).unwrap();
        let spelled: Vec<Vec<&str>> = back
            .iter()
            .map(|t| t.iter().map(|&i| back.name(i)).collect())
            .collect();
        assert_eq!(spelled, vec![vec!["C", "A", "A"], vec!["B", "C"]]);
    }

    #[test]
    fn single_token_line_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.txt");
        std::fs::write(&path, "A B\nC\n").unwrap();
        assert!(matches!(read_trails(&path), Err(Error::Parse { line: 2, .. })));
    }
}
