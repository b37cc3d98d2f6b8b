//! Fractional-calculus kernel: special functions, memory weights and the
//! explicit fractional Euler integrator for Caputo systems `D^α x = f(x)`.

mod gamma;
mod integrator;
mod mittag_leffler;

pub use gamma::gamma;
pub use integrator::{
    frac_euler_weights, integrate_caputo, integrate_caputo_with, FracSolution, MemoryWeights,
};
pub use mittag_leffler::{mittag_leffler, ML_DOMAIN, ML_TOLERANCE};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Order α of the Caputo derivative, 0 < α ≤ 1.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct FracOrder(f64);

impl FracOrder {
    pub const ONE: FracOrder = FracOrder(1.0);

    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 0.0 && alpha <= 1.0 {
            Ok(FracOrder(alpha))
        } else {
            Err(Error::InvalidParameter {
                field: "alpha",
                value: alpha,
                reason: "fractional order must satisfy 0 < alpha <= 1",
            })
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// h^α / Γ(α + 1), the scale in front of the memory sum.
    pub fn step_scale(self, h: f64) -> f64 {
        if self.0 == 1.0 {
            return h;
        }
        h.powf(self.0) / gamma::gamma_positive(self.0 + 1.0)
    }
}

impl TryFrom<f64> for FracOrder {
    type Error = Error;

    fn try_from(alpha: f64) -> Result<Self> {
        FracOrder::new(alpha)
    }
}

impl From<FracOrder> for f64 {
    fn from(order: FracOrder) -> f64 {
        order.0
    }
}

/// Uniform grid t_j = j·h, j = 0..=n_steps, anchored at the Caputo base point 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracGrid {
    order: FracOrder,
    step_h: f64,
    n_steps: usize,
}

impl FracGrid {
    pub fn new(order: FracOrder, step_h: f64, n_steps: usize) -> Result<Self> {
        if !(step_h.is_finite() && step_h > 0.0) {
            return Err(Error::InvalidParameter {
                field: "step_h",
                value: step_h,
                reason: "step must be finite and positive",
            });
        }
        if n_steps == 0 {
            return Err(Error::InvalidParameter {
                field: "n_steps",
                value: 0.0,
                reason: "at least one step is required",
            });
        }
        Ok(FracGrid {
            order,
            step_h,
            n_steps,
        })
    }

    /// Grid covering `[0, horizon]` with `ceil(horizon / h)` steps.
    pub fn with_horizon(order: FracOrder, step_h: f64, horizon: f64) -> Result<Self> {
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::InvalidParameter {
                field: "horizon_T",
                value: horizon,
                reason: "horizon must be finite and positive",
            });
        }
        if !(step_h.is_finite() && step_h > 0.0) {
            return Self::new(order, step_h, 1);
        }
        let ratio = horizon / step_h;
        // absorb representation error so T = n·h does not gain a spurious step
        let n = (ratio - 1e-9 * ratio.max(1.0)).ceil().max(1.0);
        if n > 1e8 {
            return Err(Error::Config(format!(
                "grid of {n} steps is too large for the O(n^2) memory scheme"
            )));
        }
        Self::new(order, step_h, n as usize)
    }

    pub fn order(&self) -> FracOrder {
        self.order
    }

    pub fn step_h(&self) -> f64 {
        self.step_h
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    #[inline]
    pub fn time(&self, j: usize) -> f64 {
        j as f64 * self.step_h
    }

    pub fn horizon(&self) -> f64 {
        self.time(self.n_steps)
    }

    /// Rejects grids where `rate · h^α / Γ(α+1) >= 1` for the decay rate of
    /// the linear part; beyond that the explicit scheme over-shoots.
    pub fn check_linear_stability(&self, rate: f64) -> Result<()> {
        let amplification = rate * self.order.step_scale(self.step_h);
        if amplification < 1.0 {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "step h = {} too large: rate * h^alpha / Gamma(alpha+1) = {amplification} >= 1",
                self.step_h
            )))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_bounds() {
        assert!(FracOrder::new(1.0).is_ok());
        assert!(FracOrder::new(1e-3).is_ok());
        for bad in [0.0, -0.1, 1.0 + 1e-12, f64::NAN] {
            assert!(FracOrder::new(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn horizon_rounds_up_but_not_for_exact_multiples() {
        let a = FracOrder::new(0.85).unwrap();
        assert_eq!(FracGrid::with_horizon(a, 0.05, 200.0).unwrap().n_steps(), 4000);
        assert_eq!(FracGrid::with_horizon(a, 0.1, 0.3).unwrap().n_steps(), 3);
        assert_eq!(FracGrid::with_horizon(a, 0.3, 1.0).unwrap().n_steps(), 4);
    }

    #[test]
    fn grid_rejects_bad_step() {
        let a = FracOrder::ONE;
        assert!(FracGrid::new(a, 0.0, 10).is_err());
        assert!(FracGrid::new(a, f64::INFINITY, 10).is_err());
        assert!(FracGrid::new(a, 0.1, 0).is_err());
        assert!(FracGrid::with_horizon(a, 0.1, -1.0).is_err());
    }

    #[test]
    fn stability_guard() {
        let grid = FracGrid::new(FracOrder::ONE, 0.5, 10).unwrap();
        assert!(grid.check_linear_stability(1.9).is_ok());
        assert!(grid.check_linear_stability(2.0).is_err());
    }
}
