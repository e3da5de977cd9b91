use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};

use rand::Rng as _;

use super::kernel::{update_pair, Scratch, Tables};
use super::matrix::{EmbeddingMatrix, TrainMeta};
use super::noise::{noise_distribution, NoiseSampler, DEFAULT_NOISE_EXPONENT};
use super::vocab::{build_vocabulary, Vocabulary};
use crate::corpus::{read_trails, TrailCorpus};
use crate::seed;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub window: usize,
    pub dim: usize,
    pub negatives: usize,
    pub min_count: u64,
    pub epochs: usize,
    pub initial_lr: f64,
    pub final_lr: f64,
    /// Frequent-token subsampling threshold; `None` disables it.
    pub subsample: Option<f64>,
    /// Draw the effective window uniformly from `1..=window` per center.
    pub shrink_window: bool,
    pub noise_exponent: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            window: 10,
            dim: 100,
            negatives: 5,
            min_count: 50,
            epochs: 5,
            initial_lr: 0.025,
            final_lr: 1e-4,
            subsample: None,
            shrink_window: true,
            noise_exponent: DEFAULT_NOISE_EXPONENT,
            seed: 1,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(format!("training: {m}")));
        if self.window == 0 || self.dim == 0 || self.negatives == 0 || self.epochs == 0 {
            return bad("window, dimension, negatives and epochs must be at least 1");
        }
        if !(self.initial_lr > 0.0 && self.final_lr > 0.0 && self.final_lr < self.initial_lr) {
            return bad("learning rates must be positive and decreasing");
        }
        if let Some(t) = self.subsample {
            if !(t > 0.0) {
                return bad("subsample threshold must be positive");
            }
        }
        if !(self.noise_exponent > 0.0 && self.noise_exponent <= 1.0) {
            return bad("noise exponent must lie in (0, 1]");
        }
        Ok(())
    }
}

/// Reads a trail file and trains on it.
pub fn train(corpus_path: impl AsRef<Path>, cfg: &TrainConfig, workers: usize) -> Result<EmbeddingMatrix> {
    cfg.validate()?;
    let corpus = read_trails(corpus_path)?;
    train_corpus(&corpus, cfg, workers)
}

/// Trains input and output vectors on an in-memory corpus.
///
/// With `workers == 1` the result is a pure function of the corpus and
/// config. With more workers, rows are updated without synchronization and
/// the result depends on scheduling.
pub fn train_corpus(corpus: &TrailCorpus, cfg: &TrainConfig, workers: usize) -> Result<EmbeddingMatrix> {
    cfg.validate()?;
    let vocab = build_vocabulary(corpus, cfg.min_count)?;
    let noise = noise_distribution(&vocab, cfg.noise_exponent)?.sampler();

    let mut m = EmbeddingMatrix::zeros(vocab.names().to_vec(), cfg.dim);
    let mut init = seed::stream(cfg.seed, "train-init", 0);
    let half = 0.5 / cfg.dim as f64;
    for x in m.input.iter_mut() {
        *x = init.random_range(-half..half);
    }

    let workers = workers.clamp(1, corpus.len().max(1));
    let chunk = corpus.len().div_ceil(workers);
    let job = |w: usize| Job {
        corpus,
        vocab: &vocab,
        noise: &noise,
        cfg,
        trails: (w * chunk).min(corpus.len())..((w + 1) * chunk).min(corpus.len()),
        worker: w,
    };

    if workers == 1 {
        job(0).run(&mut m);
    } else {
        let shared = SharedTables::from_matrix(&m);
        std::thread::scope(|scope| {
            for w in 0..workers {
                let mut tables = shared.view();
                let job = job(w);
                scope.spawn(move || job.run(&mut tables));
            }
        });
        shared.write_back(&mut m);
    }

    if !m.is_finite() {
        return Err(Error::Integrity("training produced non-finite vectors".into()));
    }
    m.meta = Some(TrainMeta {
        window: cfg.window,
        negatives: cfg.negatives,
        epochs: cfg.epochs,
        min_count: cfg.min_count,
        seed: cfg.seed,
    });
    Ok(m)
}

struct Job<'a> {
    corpus: &'a TrailCorpus,
    vocab: &'a Vocabulary,
    noise: &'a NoiseSampler,
    cfg: &'a TrainConfig,
    trails: std::ops::Range<usize>,
    worker: usize,
}

impl Job<'_> {
    fn run<T: Tables>(&self, tables: &mut T) {
        let cfg = self.cfg;
        let mut rng = seed::stream(cfg.seed, "train", self.worker as u64);
        let mut scratch = Scratch::default();
        let mut sentence: Vec<u32> = Vec::new();
        let mut negatives = vec![0u32; cfg.negatives];

        let local_tokens: usize = self
            .trails
            .clone()
            .map(|i| self.corpus.trail(i).len())
            .sum();
        let planned = (local_tokens * cfg.epochs).max(1) as f64;
        let mut processed = 0usize;
        let total_kept = self.vocab.total_kept() as f64;

        for _epoch in 0..cfg.epochs {
            for i in self.trails.clone() {
                let trail = self.corpus.trail(i);
                let lr = cfg.initial_lr - (cfg.initial_lr - cfg.final_lr) * (processed as f64 / planned);
                processed += trail.len();

                sentence.clear();
                for &t in trail {
                    let Some(row) = self.vocab.row_of_token(t) else { continue };
                    if let Some(threshold) = cfg.subsample {
                        let f = self.vocab.counts()[row as usize] as f64;
                        let scaled = threshold * total_kept;
                        let keep = ((f / scaled).sqrt() + 1.0) * scaled / f;
                        if keep < 1.0 && rng.random::<f64>() > keep {
                            continue;
                        }
                    }
                    sentence.push(row);
                }

                for (pos, &center) in sentence.iter().enumerate() {
                    let span = if cfg.shrink_window {
                        rng.random_range(1..=cfg.window)
                    } else {
                        cfg.window
                    };
                    let lo = pos.saturating_sub(span);
                    let hi = (pos + span).min(sentence.len() - 1);
                    for ctx_pos in lo..=hi {
                        if ctx_pos == pos {
                            continue;
                        }
                        let context = sentence[ctx_pos];
                        for slot in negatives.iter_mut() {
                            *slot = loop {
                                let n = self.noise.sample(&mut rng);
                                if n != context || self.vocab.len() == 1 {
                                    break n;
                                }
                            };
                        }
                        update_pair(tables, &mut scratch, center, context, &negatives, lr);
                    }
                }
            }
        }
    }
}

/// Lock-free tables for Hogwild training. Entries are f64 bit patterns in
/// relaxed atomics; concurrent writers to one row race, last writer wins.
struct SharedTables {
    dim: usize,
    input: Vec<AtomicU64>,
    output: Vec<AtomicU64>,
}

#[derive(Clone, Copy)]
struct SharedView<'a> {
    dim: usize,
    input: &'a [AtomicU64],
    output: &'a [AtomicU64],
}

impl SharedTables {
    fn from_matrix(m: &EmbeddingMatrix) -> Self {
        let wrap = |t: &[f64]| t.iter().map(|x| AtomicU64::new(x.to_bits())).collect();
        SharedTables {
            dim: m.dim(),
            input: wrap(&m.input),
            output: wrap(&m.output),
        }
    }

    fn view(&self) -> SharedView<'_> {
        SharedView {
            dim: self.dim,
            input: &self.input,
            output: &self.output,
        }
    }

    fn write_back(self, m: &mut EmbeddingMatrix) {
        let unwrap = |t: Vec<AtomicU64>| t.into_iter().map(|a| f64::from_bits(a.into_inner())).collect();
        m.input = unwrap(self.input);
        m.output = unwrap(self.output);
    }
}

fn get(a: &AtomicU64) -> f64 {
    f64::from_bits(a.load(Ordering::Relaxed))
}

fn add(a: &AtomicU64, delta: f64) {
    a.store((get(a) + delta).to_bits(), Ordering::Relaxed);
}

impl Tables for SharedView<'_> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn read_input(&self, row: usize, dst: &mut [f64]) {
        for (d, a) in dst.iter_mut().zip(&self.input[row * self.dim..]) {
            *d = get(a);
        }
    }

    fn output_dot(&self, row: usize, v: &[f64]) -> f64 {
        self.output[row * self.dim..(row + 1) * self.dim]
            .iter()
            .zip(v)
            .map(|(a, x)| get(a) * x)
            .sum()
    }

    fn accumulate_output(&self, row: usize, scale: f64, dst: &mut [f64]) {
        for (d, a) in dst.iter_mut().zip(&self.output[row * self.dim..]) {
            *d += scale * get(a);
        }
    }

    fn add_input(&mut self, row: usize, scale: f64, src: &[f64]) {
        for (a, x) in self.input[row * self.dim..].iter().zip(src) {
            add(a, scale * x);
        }
    }

    fn add_output(&mut self, row: usize, scale: f64, src: &[f64]) {
        for (a, x) in self.output[row * self.dim..].iter().zip(src) {
            add(a, scale * x);
        }
    }
}
