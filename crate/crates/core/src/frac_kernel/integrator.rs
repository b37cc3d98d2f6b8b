//! Explicit product-rectangle ("fractional Euler") scheme on the Volterra form
//!
//! ```text
//! x_n = x_0 + h^α/Γ(α+1) · Σ_{j=0}^{n-1} b_{n-j} f(x_j),   b_k = k^α - (k-1)^α
//! ```
//!
//! Full history is kept; total cost is O(n²) field-weight products.

use super::{FracGrid, FracOrder};
use crate::{Error, Result};

/// Convolution weights b_1..b_n of the fractional Euler scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct MemoryWeights {
    alpha: FracOrder,
    weights: Vec<f64>,
}

impl MemoryWeights {
    pub fn alpha(&self) -> FracOrder {
        self.alpha
    }

    /// b_k for 1 <= k <= len.
    #[inline]
    pub fn get(&self, k: usize) -> f64 {
        self.weights[k - 1]
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }
}

pub fn frac_euler_weights(alpha: FracOrder, n: usize) -> Result<MemoryWeights> {
    if n == 0 {
        return Err(Error::Precondition("weight count must be at least 1".into()));
    }
    let a = alpha.value();
    let weights = if a == 1.0 {
        vec![1.0; n]
    } else {
        (1..=n)
            .map(|k| {
                if k == 1 {
                    1.0
                } else {
                    // k^α - (k-1)^α without cancellation
                    let m = (k - 1) as f64;
                    m.powf(a) * (a * (1.0 / m).ln_1p()).exp_m1()
                }
            })
            .collect()
    };
    Ok(MemoryWeights { alpha, weights })
}

/// States x_0..x_n on the grid times t_0..t_n.
#[derive(Debug, Clone, PartialEq)]
pub struct FracSolution<const D: usize> {
    pub times: Vec<f64>,
    pub states: Vec<[f64; D]>,
}

impl<const D: usize> FracSolution<D> {
    pub fn last(&self) -> &[f64; D] {
        self.states.last().expect("solution holds at least the initial state")
    }
}

/// Integrates `D^α x = field(x)`, `x(0) = x0` with the fractional Euler scheme.
pub fn integrate_caputo<const D: usize, F>(
    field: F,
    x0: [f64; D],
    grid: &FracGrid,
) -> Result<FracSolution<D>>
where
    F: FnMut(&[f64; D]) -> [f64; D],
{
    integrate_caputo_with(field, x0, grid, |_, _| {})
}

/// Like [`integrate_caputo`], but `project(step, &mut x)` may adjust each new
/// state before it enters the history (used for clamping round-off undershoot).
pub fn integrate_caputo_with<const D: usize, F, P>(
    mut field: F,
    x0: [f64; D],
    grid: &FracGrid,
    mut project: P,
) -> Result<FracSolution<D>>
where
    F: FnMut(&[f64; D]) -> [f64; D],
    P: FnMut(usize, &mut [f64; D]),
{
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteState { step: 0 });
    }
    let n = grid.n_steps();
    let weights = frac_euler_weights(grid.order(), n)?;
    let scale = grid.order().step_scale(grid.step_h());

    let mut times = Vec::with_capacity(n + 1);
    let mut states = Vec::with_capacity(n + 1);
    let mut history: Vec<[f64; D]> = Vec::with_capacity(n);
    times.push(0.0);
    states.push(x0);

    for step in 1..=n {
        let fx = field(&states[step - 1]);
        if fx.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteState { step: step - 1 });
        }
        history.push(fx);

        let mut acc = [0.0; D];
        for (j, f) in history.iter().enumerate() {
            let b = weights.get(step - j);
            for d in 0..D {
                acc[d] += b * f[d];
            }
        }
        let mut x = x0;
        for d in 0..D {
            x[d] += scale * acc[d];
        }
        project(step, &mut x);
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteState { step });
        }
        times.push(grid.time(step));
        states.push(x);
    }
    Ok(FracSolution { times, states })
}
