//! Skip-gram with negative sampling over periodical trails.

mod kernel;
mod matrix;
mod noise;
mod train;
mod vocab;

pub use kernel::{log_sigmoid, pair_gradient, pair_objective, sgns_pair_update, sigmoid, PairGradient};
pub use matrix::{EmbeddingMatrix, TrainMeta};
pub use noise::{noise_distribution, NoiseDistribution, NoiseSampler, DEFAULT_NOISE_EXPONENT};
pub use train::{train, train_corpus, TrainConfig};
pub use vocab::{build_vocabulary, Vocabulary};
