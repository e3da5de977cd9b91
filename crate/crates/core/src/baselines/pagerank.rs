use super::matrix::PeriodicalCitationMatrix;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PageRankConfig {
    pub damping: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for PageRankConfig {
    fn default() -> Self {
        PageRankConfig {
            damping: 0.85,
            tolerance: 1e-10,
            max_iterations: 200,
        }
    }
}

/// PageRank on the weighted directed periodical network. A periodical
/// passes its score to the periodicals it cites in proportion to citation
/// counts; periodicals that cite nothing spread their score uniformly.
/// Iterates until the L1 change falls below the tolerance.
pub fn pagerank_scores(c: &PeriodicalCitationMatrix, cfg: &PageRankConfig) -> Result<Vec<f64>> {
    if !(cfg.damping > 0.0 && cfg.damping < 1.0) {
        return Err(Error::Config(format!("damping {} outside (0, 1)", cfg.damping)));
    }
    let n = c.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let out_weight: Vec<f64> = (0..n)
        .map(|i| c.row(i).iter().map(|e| e.1 as f64).sum())
        .collect();
    let d = cfg.damping;
    let uniform = 1.0 / n as f64;
    let mut x = vec![uniform; n];
    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for _ in 0..cfg.max_iterations {
        let dangling: f64 = (0..n).filter(|&i| out_weight[i] == 0.0).map(|i| x[i]).sum();
        let base = (1.0 - d) * uniform + d * dangling * uniform;
        next.iter_mut().for_each(|v| *v = base);
        for i in 0..n {
            if out_weight[i] > 0.0 {
                let share = d * x[i] / out_weight[i];
                for &(j, w) in c.row(i) {
                    next[j as usize] += share * w as f64;
                }
            }
        }
        let total: f64 = next.iter().sum();
        next.iter_mut().for_each(|v| *v /= total);
        residual = x.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut x, &mut next);
        if residual < cfg.tolerance {
            return Ok(x);
        }
    }
    Err(Error::Convergence {
        iterations: cfg.max_iterations,
        residual,
    })
}
