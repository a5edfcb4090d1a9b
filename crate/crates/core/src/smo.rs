//! Sequential minimal optimization for a single linear soft-margin
//! subproblem. Deterministic given the seed: the second working-set
//! index is scanned from a seeded random offset.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub(crate) struct PairProblem<'a> {
    pub x: &'a [Vec<f64>],
    pub y: &'a [f64],
    pub c: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
    pub seed: u64,
}

struct State {
    alpha: Vec<f64>,
    weights: Vec<f64>,
    bias: f64,
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| u * v).sum()
}

impl PairProblem<'_> {
    /// Maximizes the dual objective to KKT tolerance; returns the primal
    /// weight vector and bias of the separating hyperplane.
    pub fn solve(&self) -> (Vec<f64>, f64) {
        let n = self.x.len();
        let dim = self.x.first().map_or(0, Vec::len);
        let mut state = State {
            alpha: vec![0.0; n],
            weights: vec![0.0; dim],
            bias: 0.0,
        };
        let self_products: Vec<f64> = self.x.iter().map(|v| dot(v, v)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);

        for _sweep in 0..self.max_iterations {
            let mut changed = 0usize;
            for i in 0..n {
                let error_i = dot(&state.weights, &self.x[i]) + state.bias - self.y[i];
                let violation = self.y[i] * error_i;
                let violates = (violation < -self.tolerance && state.alpha[i] < self.c)
                    || (violation > self.tolerance && state.alpha[i] > 0.0);
                if !violates {
                    continue;
                }
                let start = rng.random_range(0..n);
                for offset in 0..n {
                    let j = (start + offset) % n;
                    if j != i && self.take_step(i, j, &mut state, &self_products) {
                        changed += 1;
                        break;
                    }
                }
            }
            if changed == 0 {
                break;
            }
        }
        (state.weights, state.bias)
    }

    fn take_step(&self, i: usize, j: usize, state: &mut State, self_products: &[f64]) -> bool {
        let (x, y, c) = (self.x, self.y, self.c);
        let error_i = dot(&state.weights, &x[i]) + state.bias - y[i];
        let error_j = dot(&state.weights, &x[j]) + state.bias - y[j];
        let (lo, hi) = if y[i] != y[j] {
            (
                (state.alpha[j] - state.alpha[i]).max(0.0),
                (c + state.alpha[j] - state.alpha[i]).min(c),
            )
        } else {
            (
                (state.alpha[i] + state.alpha[j] - c).max(0.0),
                (state.alpha[i] + state.alpha[j]).min(c),
            )
        };
        if lo >= hi {
            return false;
        }
        let cross = dot(&x[i], &x[j]);
        // second derivative of the objective along the constraint line
        let eta = 2.0 * cross - self_products[i] - self_products[j];
        if eta >= 0.0 {
            return false;
        }
        let mut alpha_j = state.alpha[j] - y[j] * (error_i - error_j) / eta;
        alpha_j = alpha_j.clamp(lo, hi);
        if (alpha_j - state.alpha[j]).abs() < 1e-8 {
            return false;
        }
        let alpha_i = state.alpha[i] + y[i] * y[j] * (state.alpha[j] - alpha_j);
        let delta_i = alpha_i - state.alpha[i];
        let delta_j = alpha_j - state.alpha[j];
        for ((w, &xi), &xj) in state.weights.iter_mut().zip(&x[i]).zip(&x[j]) {
            *w += y[i] * delta_i * xi + y[j] * delta_j * xj;
        }
        let b1 = state.bias
            - error_i
            - y[i] * delta_i * self_products[i]
            - y[j] * delta_j * cross;
        let b2 = state.bias
            - error_j
            - y[i] * delta_i * cross
            - y[j] * delta_j * self_products[j];
        state.bias = if state.alpha_free(alpha_i, c) {
            b1
        } else if state.alpha_free(alpha_j, c) {
            b2
        } else {
            (b1 + b2) / 2.0
        };
        state.alpha[i] = alpha_i;
        state.alpha[j] = alpha_j;
        true
    }
}

impl State {
    fn alpha_free(&self, alpha: f64, c: f64) -> bool {
        alpha > 0.0 && alpha < c
    }
}
