//! The negative-sampling objective for one (center, context) pair and its
//! exact gradient-ascent step.
//!
//! For center input vector `v`, context output vector `u_o` and negative
//! output vectors `u_i`:
//!
//! ```text
//! E       = ln σ(u_o·v) + Σ_i ln σ(−u_i·v)
//! ∂E/∂v   = (1 − σ(u_o·v)) u_o − Σ_i σ(u_i·v) u_i
//! ∂E/∂u_o = (1 − σ(u_o·v)) v
//! ∂E/∂u_i = −σ(u_i·v) v
//! ```

use super::matrix::EmbeddingMatrix;

const SIGMOID_CLAMP: f64 = 30.0;

/// Logistic function, clamped so the result stays strictly inside (0, 1).
pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x.clamp(-SIGMOID_CLAMP, SIGMOID_CLAMP)).exp())
}

/// `ln σ(x)`, computed without overflow.
pub fn log_sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        -(-x).exp().ln_1p()
    } else {
        x - x.exp().ln_1p()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn pair_objective(m: &EmbeddingMatrix, center: u32, context: u32, negatives: &[u32]) -> f64 {
    let v = m.input(center as usize);
    log_sigmoid(dot(m.output(context as usize), v))
        + negatives
            .iter()
            .map(|&n| log_sigmoid(-dot(m.output(n as usize), v)))
            .sum::<f64>()
}

/// Gradient of [`pair_objective`]. Output-row gradients are listed per
/// occurrence (context first, then negatives in order); repeated rows
/// contribute additively.
#[derive(Debug, Clone, PartialEq)]
pub struct PairGradient {
    pub center: Vec<f64>,
    pub outputs: Vec<(u32, Vec<f64>)>,
}

pub fn pair_gradient(m: &EmbeddingMatrix, center: u32, context: u32, negatives: &[u32]) -> PairGradient {
    let v = m.input(center as usize);
    let mut grad_v = vec![0.0; m.dim()];
    let mut outputs = Vec::with_capacity(negatives.len() + 1);
    let targets = std::iter::once((context, 1.0)).chain(negatives.iter().map(|&n| (n, 0.0)));
    for (row, label) in targets {
        let u = m.output(row as usize);
        let g = label - sigmoid(dot(u, v));
        for (gv, x) in grad_v.iter_mut().zip(u) {
            *gv += g * x;
        }
        outputs.push((row, v.iter().map(|x| g * x).collect()));
    }
    PairGradient {
        center: grad_v,
        outputs,
    }
}

/// Row access used by the update kernel, so single-threaded and Hogwild
/// training share one implementation.
pub(crate) trait Tables {
    fn dim(&self) -> usize;
    fn read_input(&self, row: usize, dst: &mut [f64]);
    fn output_dot(&self, row: usize, v: &[f64]) -> f64;
    /// `dst += scale * output[row]`
    fn accumulate_output(&self, row: usize, scale: f64, dst: &mut [f64]);
    fn add_input(&mut self, row: usize, scale: f64, src: &[f64]);
    fn add_output(&mut self, row: usize, scale: f64, src: &[f64]);
}

impl Tables for EmbeddingMatrix {
    fn dim(&self) -> usize {
        EmbeddingMatrix::dim(self)
    }

    fn read_input(&self, row: usize, dst: &mut [f64]) {
        dst.copy_from_slice(self.input(row));
    }

    fn output_dot(&self, row: usize, v: &[f64]) -> f64 {
        dot(self.output(row), v)
    }

    fn accumulate_output(&self, row: usize, scale: f64, dst: &mut [f64]) {
        for (d, x) in dst.iter_mut().zip(self.output(row)) {
            *d += scale * x;
        }
    }

    fn add_input(&mut self, row: usize, scale: f64, src: &[f64]) {
        for (d, x) in self.input_mut(row).iter_mut().zip(src) {
            *d += scale * x;
        }
    }

    fn add_output(&mut self, row: usize, scale: f64, src: &[f64]) {
        for (d, x) in self.output_mut(row).iter_mut().zip(src) {
            *d += scale * x;
        }
    }
}

/// Scratch buffers reused across pair updates.
#[derive(Debug, Default)]
pub(crate) struct Scratch {
    center: Vec<f64>,
    delta: Vec<f64>,
    coefficients: Vec<f64>,
}

/// One ascent step of size `lr` along the gradient of [`pair_objective`],
/// with every coefficient evaluated at the pre-step parameters.
pub(crate) fn update_pair<T: Tables>(
    tables: &mut T,
    scratch: &mut Scratch,
    center: u32,
    context: u32,
    negatives: &[u32],
    lr: f64,
) {
    let dim = tables.dim();
    scratch.center.resize(dim, 0.0);
    scratch.delta.clear();
    scratch.delta.resize(dim, 0.0);
    scratch.coefficients.clear();
    tables.read_input(center as usize, &mut scratch.center);

    let targets = std::iter::once((context, 1.0)).chain(negatives.iter().map(|&n| (n, 0.0)));
    for (row, label) in targets.clone() {
        let g = lr * (label - sigmoid(tables.output_dot(row as usize, &scratch.center)));
        tables.accumulate_output(row as usize, g, &mut scratch.delta);
        scratch.coefficients.push(g);
    }
    for ((row, _), &g) in targets.zip(&scratch.coefficients) {
        tables.add_output(row as usize, g, &scratch.center);
    }
    tables.add_input(center as usize, 1.0, &scratch.delta);
}

/// Applies one stochastic ascent step for a (center, context) pair with the
/// given negatives. Only the center's input row and the output rows of the
/// context and negatives change.
pub fn sgns_pair_update(m: &mut EmbeddingMatrix, center: u32, context: u32, negatives: &[u32], lr: f64) {
    update_pair(m, &mut Scratch::default(), center, context, negatives, lr);
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn random_matrix(rows: usize, dim: usize, seed: u64) -> EmbeddingMatrix {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut table = || (0..rows * dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        let names = (0..rows).map(|i| format!("p{i}")).collect();
        EmbeddingMatrix::from_tables(names, dim, table(), table()).unwrap()
    }

    #[test]
    fn sigmoid_stays_open() {
        for x in [-1e6, -40.0, 0.0, 40.0, 1e6] {
            let s = sigmoid(x);
            assert!(s > 0.0 && s < 1.0, "σ({x}) = {s}");
        }
        assert!((log_sigmoid(0.0) + std::f64::consts::LN_2).abs() < 1e-15);
        assert!(log_sigmoid(-800.0).is_finite());
    }

    #[test]
    fn gradient_matches_central_differences() {
        let h = 1e-5;
        let m = random_matrix(6, 5, 1);
        let (center, context, negs) = (0u32, 1u32, [2u32, 3, 4, 5, 2]);
        let grad = pair_gradient(&m, center, context, &negs);
        let f = |m: &EmbeddingMatrix| pair_objective(m, center, context, &negs);

        for d in 0..5 {
            let mut plus = m.clone();
            plus.input_mut(0)[d] += h;
            let mut minus = m.clone();
            minus.input_mut(0)[d] -= h;
            let fd = (f(&plus) - f(&minus)) / (2.0 * h);
            let rel = (fd - grad.center[d]).abs() / fd.abs().max(grad.center[d].abs()).max(1e-12);
            assert!(rel <= 1e-5, "center dim {d}: {fd} vs {}", grad.center[d]);
        }
        // Summed analytic gradient per output row.
        let mut per_row = vec![vec![0.0; 5]; 6];
        for (row, g) in &grad.outputs {
            for (a, b) in per_row[*row as usize].iter_mut().zip(g) {
                *a += b;
            }
        }
        for row in 1..6 {
            for d in 0..5 {
                let mut plus = m.clone();
                plus.output_mut(row)[d] += h;
                let mut minus = m.clone();
                minus.output_mut(row)[d] -= h;
                let fd = (f(&plus) - f(&minus)) / (2.0 * h);
                let an = per_row[row][d];
                let rel = (fd - an).abs() / fd.abs().max(an.abs()).max(1e-12);
                assert!(rel <= 1e-5, "row {row} dim {d}: {fd} vs {an}");
            }
        }
    }

    #[test]
    fn update_is_a_gradient_step() {
        let m = random_matrix(5, 4, 2);
        let negs = [2u32, 3, 3];
        let grad = pair_gradient(&m, 0, 1, &negs);
        let mut stepped = m.clone();
        sgns_pair_update(&mut stepped, 0, 1, &negs, 0.1);
        for d in 0..4 {
            assert!((stepped.input(0)[d] - (m.input(0)[d] + 0.1 * grad.center[d])).abs() < 1e-14);
        }
        let mut expected = m.clone();
        for (row, g) in &grad.outputs {
            for (x, gx) in expected.output_mut(*row as usize).iter_mut().zip(g) {
                *x += 0.1 * gx;
            }
        }
        for row in 0..5 {
            for d in 0..4 {
                assert!((stepped.output(row)[d] - expected.output(row)[d]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn zero_rate_is_a_no_op() {
        let m = random_matrix(4, 3, 3);
        let mut n = m.clone();
        sgns_pair_update(&mut n, 0, 1, &[2, 3], 0.0);
        assert_eq!(m, n);
    }

    #[test]
    fn touches_only_owned_rows() {
        let m = random_matrix(8, 3, 4);
        let mut n = m.clone();
        sgns_pair_update(&mut n, 2, 5, &[1, 7], 0.5);
        for row in 0..8 {
            if row != 2 {
                assert_eq!(m.input(row), n.input(row), "input row {row}");
            }
            if ![5, 1, 7].contains(&row) {
                assert_eq!(m.output(row), n.output(row), "output row {row}");
            }
        }
    }

    #[test]
    fn positive_pair_probability_increases() {
        let mut m = random_matrix(4, 5, 5);
        let score = |m: &EmbeddingMatrix| sigmoid(dot(m.output(1), m.input(0)));
        let mut last = score(&m);
        for _ in 0..200 {
            sgns_pair_update(&mut m, 0, 1, &[2, 3], 0.05);
            let now = score(&m);
            assert!(now > last, "{now} <= {last}");
            last = now;
        }
        assert!(last > 0.9);
    }
}
