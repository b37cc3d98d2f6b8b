//! Caputo fractional-order SIRS epidemic model with a general incidence rate.
//!
//! The crate is organised bottom-up:
//!
//! - [`frac_kernel`]: gamma and Mittag-Leffler functions, memory weights and the
//!   explicit fractional Euler integrator for `D^α x = f(x)`.
//! - [`model`]: parameters, state, incidence, vector field and Jacobian.
//! - [`equilibria`]: basic reproduction number, disease-free and endemic equilibria.
//! - [`stability`]: characteristic cubic, Matignon and Routh-Hurwitz checks,
//!   global-stability conditions and Lyapunov functions.
//! - [`engine`]: simulation runs with runtime invariants, Lyapunov monitoring,
//!   convergence detection and fractional-order sweeps.
//!
//! ```
//! use caputo_sirs::{equilibria, model::ModelParams};
//!
//! let p = ModelParams::preset_disease_free();
//! let r0 = equilibria::basic_reproduction_number(&p);
//! assert!((r0 - 0.7407).abs() < 5e-5);
//! ```

// `!(x <= tol)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod engine;
pub mod equilibria;
mod error;
pub mod frac_kernel;
pub mod model;
pub mod stability;

pub use error::{Error, Result};
pub use frac_kernel::{FracGrid, FracOrder};
pub use model::{EpidemicState, ModelParams};
