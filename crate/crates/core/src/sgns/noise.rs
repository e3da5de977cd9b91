use rand::distr::Distribution;
use rand_distr::weighted::WeightedAliasIndex;

use super::vocab::Vocabulary;
use crate::seed::Rng;
use crate::{Error, Result};

pub const DEFAULT_NOISE_EXPONENT: f64 = 0.75;

/// Smoothed unigram distribution over vocabulary rows:
/// `p_i = f_i^alpha / sum_j f_j^alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseDistribution {
    probabilities: Vec<f64>,
    exponent: f64,
}

impl NoiseDistribution {
    pub fn from_counts(counts: &[u64], exponent: f64) -> Result<Self> {
        if !(exponent > 0.0 && exponent <= 1.0) {
            return Err(Error::Config(format!(
                "noise exponent {exponent} outside (0, 1]"
            )));
        }
        if counts.is_empty() || counts.iter().all(|&c| c == 0) {
            return Err(Error::Config("noise distribution over empty vocabulary".into()));
        }
        let weights: Vec<f64> = counts.iter().map(|&c| (c as f64).powf(exponent)).collect();
        let total: f64 = weights.iter().sum();
        Ok(NoiseDistribution {
            probabilities: weights.iter().map(|w| w / total).collect(),
            exponent,
        })
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn sampler(&self) -> NoiseSampler {
        NoiseSampler {
            alias: WeightedAliasIndex::new(self.probabilities.clone())
                .expect("probabilities are finite, nonnegative and not all zero"),
        }
    }
}

pub fn noise_distribution(vocab: &Vocabulary, exponent: f64) -> Result<NoiseDistribution> {
    NoiseDistribution::from_counts(vocab.counts(), exponent)
}

/// O(1) sampler of vocabulary rows from a [`NoiseDistribution`].
#[derive(Debug, Clone)]
pub struct NoiseSampler {
    alias: WeightedAliasIndex<f64>,
}

impl NoiseSampler {
    pub fn sample(&self, rng: &mut Rng) -> u32 {
        self.alias.sample(rng) as u32
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;

    #[test]
    fn uniform_counts_give_uniform_noise() {
        let d = NoiseDistribution::from_counts(&[1, 1], 1.0).unwrap();
        assert_eq!(d.probabilities(), &[0.5, 0.5]);
    }

    #[test]
    fn smoothed_by_hand() {
        // 4^0.75 / (4^0.75 + 1) = 2.828427 / 3.828427
        let d = NoiseDistribution::from_counts(&[4, 1], 0.75).unwrap();
        assert!((d.probabilities()[0] - 0.7388).abs() < 1e-4);
        assert!((d.probabilities()[1] - 0.2612).abs() < 1e-4);
    }

    #[test]
    fn rejects_bad_exponent() {
        assert!(NoiseDistribution::from_counts(&[1], 0.0).is_err());
        assert!(NoiseDistribution::from_counts(&[1], 1.5).is_err());
    }

    #[test]
    fn empirical_frequencies_match() {
        let d = NoiseDistribution::from_counts(&[50, 20, 10, 7, 3], 0.75).unwrap();
        let sampler = d.sampler();
        let mut rng = crate::seed::Rng::seed_from_u64(17);
        let draws = 1_000_000;
        let mut hits = [0usize; 5];
        for _ in 0..draws {
            hits[sampler.sample(&mut rng) as usize] += 1;
        }
        for (i, &p) in d.probabilities().iter().enumerate() {
            let freq = hits[i] as f64 / draws as f64;
            assert!((freq - p).abs() <= 0.01 * p, "id {i}: {freq} vs {p}");
        }
    }

    proptest! {
        #[test]
        fn sums_to_one(counts in prop::collection::vec(1u64..1_000_000, 1..200), alpha in 0.01f64..=1.0) {
            let d = NoiseDistribution::from_counts(&counts, alpha).unwrap();
            let sum: f64 = d.probabilities().iter().sum();
            prop_assert!((sum - 1.0).abs() <= 1e-12);
        }
    }
}
