use crate::corpus::TrailCorpus;
use crate::{Error, Result};

/// Periodicals kept for training, ordered by descending frequency (ties by
/// name). `kept_index` maps a corpus token id to its vocabulary row.
#[derive(Debug, Clone, PartialEq)]
pub struct Vocabulary {
    names: Vec<String>,
    counts: Vec<u64>,
    kept_index: Vec<Option<u32>>,
    total_kept: u64,
    dropped: usize,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count_of(&self, name: &str) -> Option<u64> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.counts[i])
    }

    /// Vocabulary row of a corpus token, if kept.
    pub fn row_of_token(&self, token: u32) -> Option<u32> {
        self.kept_index.get(token as usize).copied().flatten()
    }

    pub fn total_kept(&self) -> u64 {
        self.total_kept
    }

    /// Number of distinct periodicals below the frequency threshold.
    pub fn dropped(&self) -> usize {
        self.dropped
    }
}

pub fn build_vocabulary(corpus: &TrailCorpus, min_count: u64) -> Result<Vocabulary> {
    if corpus.is_empty() {
        return Err(Error::Config("corpus is empty".into()));
    }
    let mut counts = vec![0u64; corpus.names().len()];
    for trail in corpus.iter() {
        for &t in trail {
            counts[t as usize] += 1;
        }
    }
    let mut kept: Vec<u32> = (0..counts.len() as u32)
        .filter(|&t| counts[t as usize] >= min_count.max(1))
        .collect();
    kept.sort_by(|&a, &b| {
        counts[b as usize]
            .cmp(&counts[a as usize])
            .then_with(|| corpus.name(a).cmp(corpus.name(b)))
    });
    if kept.is_empty() {
        return Err(Error::Config(format!(
            "no periodical occurs at least {min_count} times"
        )));
    }
    let seen = counts.iter().filter(|&&c| c > 0).count();
    let mut kept_index = vec![None; counts.len()];
    for (row, &t) in kept.iter().enumerate() {
        kept_index[t as usize] = Some(row as u32);
    }
    Ok(Vocabulary {
        names: kept.iter().map(|&t| corpus.name(t).to_string()).collect(),
        counts: kept.iter().map(|&t| counts[t as usize]).collect(),
        total_kept: kept.iter().map(|&t| counts[t as usize]).sum(),
        dropped: seen - kept.len(),
        kept_index,
    })
}
