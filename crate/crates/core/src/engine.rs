//! Simulation driver: runs the fractional Euler scheme on the SIRS field,
//! records per-step diagnostics and checks the positivity/boundedness
//! invariants of the exact solution.

use rayon::prelude::*;
use serde::Serialize;

use crate::equilibria::{basic_reproduction_number, disease_free_equilibrium, endemic_equilibrium};
use crate::frac_kernel::{integrate_caputo_with, mittag_leffler, FracGrid, FracOrder, ML_DOMAIN};
use crate::model::{vector_field, EpidemicState, ModelParams};
use crate::stability::{lyapunov_l0, lyapunov_lstar};
use crate::{Error, Result};

/// Components in `(-CLAMP_BAND, 0)` are treated as round-off and set to zero.
pub const CLAMP_BAND: f64 = 1e-10;
/// Burn-in steps skipped by the Lyapunov monotonicity check.
pub const LYAPUNOV_BURN_IN: usize = 10;
/// Relative tolerance (to L(t₀)) on positive Lyapunov increments.
pub const LYAPUNOV_REL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LyapunovKind {
    /// Disease-free function L₀.
    L0,
    /// Endemic function L*.
    Lstar,
}

/// Per-step record kept alongside each state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepDiagnostics {
    pub total: f64,
    pub lyapunov: Option<f64>,
    /// Mittag-Leffler envelope N(0)E_α(-μt^α) + (Λ/μ)(1 - E_α(-μt^α)).
    pub envelope: f64,
    pub clamped: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<EpidemicState>,
    pub alpha: FracOrder,
    pub params: ModelParams,
    pub step_h: f64,
    pub diagnostics: Vec<StepDiagnostics>,
    /// Which Lyapunov function fills `diagnostics[..].lyapunov`, if any.
    pub lyapunov_kind: Option<LyapunovKind>,
    /// Endemic equilibrium used for L*, when it exists.
    pub endemic: Option<EpidemicState>,
    pub clamp_count: usize,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn final_state(&self) -> EpidemicState {
        *self.states.last().expect("trajectory holds the initial state")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    Negative,
    TotalBound,
    Envelope,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Violation {
    pub step: usize,
    pub kind: ViolationKind,
    pub magnitude: f64,
}

/// Tolerances for [`check_invariants`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantTolerances {
    pub negative: f64,
    pub bound: f64,
    pub envelope: f64,
}

impl InvariantTolerances {
    /// ε_neg = 1e-10, ε_bound = 1e-6·N(0), ε_env = 0.05·N(0).
    pub fn for_initial_total(n0: f64) -> Self {
        InvariantTolerances {
            negative: CLAMP_BAND,
            bound: 1e-6 * n0,
            envelope: 0.05 * n0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LyapunovRecord {
    pub kind: LyapunovKind,
    pub values: Vec<f64>,
    pub max_increment: f64,
    pub monotone: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub alpha: FracOrder,
    pub final_state: EpidemicState,
    pub converged_to: Option<EpidemicState>,
    pub convergence_time: Option<f64>,
    pub invariant_violations: Vec<Violation>,
    pub clamp_count: usize,
    pub lyapunov_monotone: Option<bool>,
    pub max_lyapunov_increment: Option<f64>,
}

fn envelope_at(p: &ModelParams, alpha: FracOrder, n0: f64, t: f64) -> Result<f64> {
    let level = p.carrying_level();
    let z = -p.death_rate() * t.powf(alpha.value());
    let e = if z >= ML_DOMAIN.0 {
        mittag_leffler(alpha, z)?
    } else if n0 >= level {
        // E_α is decreasing on the negative axis, so E_α(-50) bounds it from above
        mittag_leffler(alpha, ML_DOMAIN.0)?
    } else {
        0.0
    };
    Ok(n0 * e + level * (1.0 - e))
}

/// Simulates the model from `x0` on `grid`.
pub fn run(p: &ModelParams, x0: EpidemicState, grid: &FracGrid) -> Result<Trajectory> {
    if !(x0.is_finite() && x0.is_non_negative()) {
        return Err(Error::Precondition(format!(
            "initial state ({}, {}, {}) must be finite and non-negative",
            x0.s, x0.i, x0.r
        )));
    }
    grid.check_linear_stability(p.death_rate())?;

    let mut clamped_steps = vec![false; grid.n_steps() + 1];
    let sol = integrate_caputo_with(
        |x: &[f64; 3]| vector_field(p, &EpidemicState::from_array(*x)),
        x0.to_array(),
        grid,
        |step, x| {
            for v in x.iter_mut() {
                if *v < 0.0 && *v > -CLAMP_BAND {
                    *v = 0.0;
                    clamped_steps[step] = true;
                }
            }
        },
    )?;

    let endemic = if basic_reproduction_number(p) > 1.0 {
        endemic_equilibrium(p)?
    } else {
        None
    };
    let lyapunov_kind = match endemic {
        None => Some(LyapunovKind::L0),
        Some(_) => Some(LyapunovKind::Lstar),
    };
    let states: Vec<EpidemicState> = sol.states.into_iter().map(EpidemicState::from_array).collect();
    let n0 = x0.total();
    let alpha = grid.order();
    let mut diagnostics = Vec::with_capacity(states.len());
    for (k, (x, &t)) in states.iter().zip(&sol.times).enumerate() {
        let lyapunov = match (lyapunov_kind, endemic) {
            (Some(LyapunovKind::Lstar), Some(e)) => lyapunov_lstar(p, &e, x).ok(),
            (Some(LyapunovKind::L0), _) => lyapunov_l0(p, x).ok(),
            _ => None,
        };
        diagnostics.push(StepDiagnostics {
            total: x.total(),
            lyapunov,
            envelope: envelope_at(p, alpha, n0, t)?,
            clamped: clamped_steps[k],
        });
    }
    let clamp_count = clamped_steps.iter().filter(|c| **c).count();
    Ok(Trajectory {
        times: sol.times,
        states,
        alpha,
        params: *p,
        step_h: grid.step_h(),
        diagnostics,
        lyapunov_kind,
        endemic,
        clamp_count,
    })
}

/// Positivity, total-population bound and envelope checks with the default tolerances.
pub fn check_invariants(traj: &Trajectory) -> Vec<Violation> {
    let n0 = traj.states.first().map(|x| x.total()).unwrap_or(0.0);
    check_invariants_with(traj, InvariantTolerances::for_initial_total(n0))
}

pub fn check_invariants_with(traj: &Trajectory, tol: InvariantTolerances) -> Vec<Violation> {
    let Some(first) = traj.states.first() else {
        return Vec::new();
    };
    let bound = first.total() + traj.params.carrying_level();
    let mut out = Vec::new();
    for (step, x) in traj.states.iter().enumerate() {
        let lowest = x.s.min(x.i).min(x.r);
        if lowest < -tol.negative {
            out.push(Violation {
                step,
                kind: ViolationKind::Negative,
                magnitude: -lowest,
            });
        }
        let total = x.total();
        if total > bound + tol.bound {
            out.push(Violation {
                step,
                kind: ViolationKind::TotalBound,
                magnitude: total - bound,
            });
        }
        if let Some(d) = traj.diagnostics.get(step) {
            if total > d.envelope + tol.envelope {
                out.push(Violation {
                    step,
                    kind: ViolationKind::Envelope,
                    magnitude: total - d.envelope,
                });
            }
        }
    }
    out
}

/// Evaluates L₀ or L* along the trajectory and checks that it does not
/// increase by more than `1e-6·L(t₀)` per step after the burn-in.
pub fn monitor_lyapunov(
    traj: &Trajectory,
    kind: LyapunovKind,
    estar: Option<&EpidemicState>,
) -> Result<LyapunovRecord> {
    let p = &traj.params;
    let values = match kind {
        LyapunovKind::L0 => traj
            .states
            .iter()
            .map(|x| lyapunov_l0(p, x))
            .collect::<Result<Vec<_>>>()?,
        LyapunovKind::Lstar => {
            let e = estar.ok_or(Error::Domain {
                function: "monitor_lyapunov",
                value: f64::NAN,
                expected: "an endemic equilibrium for L*",
            })?;
            traj.states
                .iter()
                .map(|x| lyapunov_lstar(p, e, x))
                .collect::<Result<Vec<_>>>()?
        }
    };
    let max_increment = values
        .windows(2)
        .skip(LYAPUNOV_BURN_IN)
        .map(|w| w[1] - w[0])
        .fold(f64::NEG_INFINITY, f64::max);
    let max_increment = if max_increment.is_finite() { max_increment } else { 0.0 };
    let monotone = max_increment < LYAPUNOV_REL_TOL * values[0] || max_increment <= 0.0;
    Ok(LyapunovRecord {
        kind,
        values,
        max_increment,
        monotone,
    })
}

/// Earliest time after which every remaining state is within `tol` of
/// `target` in the sup-norm.
pub fn detect_convergence(traj: &Trajectory, target: &EpidemicState, tol: f64) -> Result<Option<f64>> {
    if !(tol > 0.0) {
        return Err(Error::Precondition(format!("tolerance must be positive, got {tol}")));
    }
    let mut first_inside = None;
    for (k, x) in traj.states.iter().enumerate().rev() {
        if x.distance_inf(target) <= tol {
            first_inside = Some(k);
        } else {
            break;
        }
    }
    Ok(first_inside.map(|k| traj.times[k]))
}

/// Equilibrium the run is expected to approach: E* when it exists, else E₀.
pub fn expected_limit(p: &ModelParams) -> Result<EpidemicState> {
    Ok(endemic_equilibrium(p)?.unwrap_or_else(|| disease_free_equilibrium(p)))
}

/// Convergence tolerance used in run reports: 1e-2 relative to the limit's size.
pub fn convergence_tolerance(target: &EpidemicState) -> f64 {
    1e-2 * target.norm_inf().max(1.0)
}

/// Builds the [`RunReport`] of a finished trajectory.
pub fn summarize(traj: &Trajectory) -> Result<RunReport> {
    let p = &traj.params;
    let target = expected_limit(p)?;
    let convergence_time = detect_convergence(traj, &target, convergence_tolerance(&target))?;
    let lyap = match traj.lyapunov_kind {
        Some(kind) => monitor_lyapunov(traj, kind, traj.endemic.as_ref()).ok(),
        None => None,
    };
    Ok(RunReport {
        alpha: traj.alpha,
        final_state: traj.final_state(),
        converged_to: convergence_time.map(|_| target),
        convergence_time,
        invariant_violations: check_invariants(traj),
        clamp_count: traj.clamp_count,
        lyapunov_monotone: lyap.as_ref().map(|l| l.monotone),
        max_lyapunov_increment: lyap.as_ref().map(|l| l.max_increment),
    })
}

/// Step size and horizon shared by every run of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridTemplate {
    pub step_h: f64,
    pub horizon: f64,
}

impl GridTemplate {
    pub fn grid(&self, alpha: FracOrder) -> Result<FracGrid> {
        FracGrid::with_horizon(alpha, self.step_h, self.horizon)
    }
}

#[derive(Debug, Clone)]
pub struct SweepEntry {
    pub alpha: FracOrder,
    pub outcome: Result<(Trajectory, RunReport)>,
}

/// One independent run per order, in parallel; results keep input order and
/// per-run failures are collected rather than aborting the sweep.
pub fn sweep(
    base: &ModelParams,
    x0: EpidemicState,
    alphas: &[FracOrder],
    template: GridTemplate,
) -> Result<Vec<SweepEntry>> {
    if alphas.is_empty() {
        return Err(Error::Precondition("sweep needs at least one alpha".into()));
    }
    Ok(alphas
        .par_iter()
        .map(|&alpha| SweepEntry {
            alpha,
            outcome: template
                .grid(alpha)
                .and_then(|grid| run(base, x0, &grid))
                .and_then(|traj| summarize(&traj).map(|rep| (traj, rep))),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn traj_of(states: Vec<EpidemicState>) -> Trajectory {
        let p = ModelParams::preset_disease_free();
        let n = states.len();
        Trajectory {
            times: (0..n).map(|k| k as f64 * 0.1).collect(),
            diagnostics: states
                .iter()
                .map(|x| StepDiagnostics {
                    total: x.total(),
                    lyapunov: None,
                    envelope: f64::INFINITY,
                    clamped: false,
                })
                .collect(),
            states,
            alpha: FracOrder::ONE,
            params: p,
            step_h: 0.1,
            lyapunov_kind: None,
            endemic: None,
            clamp_count: 0,
        }
    }

    #[test]
    fn single_negative_entry_is_one_violation() {
        let mut states = vec![EpidemicState::new(8.0, 0.5, 0.5); 6];
        states[3].i = -1e-6;
        let v = check_invariants(&traj_of(states));
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].step, 3);
        assert_eq!(v[0].kind, ViolationKind::Negative);
    }

    #[test]
    fn convergence_on_constant_trajectory() {
        let e = EpidemicState::new(8.0, 0.0, 0.0);
        let t = traj_of(vec![e; 5]);
        assert_eq!(detect_convergence(&t, &e, 1e-2).unwrap(), Some(0.0));
        let zero = EpidemicState::new(0.0, 0.0, 0.0);
        assert_eq!(detect_convergence(&t, &zero, 1e-2).unwrap(), None);
        assert!(detect_convergence(&t, &e, 0.0).is_err());
    }

    #[test]
    fn convergence_requires_whole_tail() {
        let e = EpidemicState::new(1.0, 1.0, 1.0);
        let far = EpidemicState::new(2.0, 1.0, 1.0);
        let t = traj_of(vec![far, e, e, far, e, e]);
        assert!((detect_convergence(&t, &e, 1e-3).unwrap().unwrap() - 0.4).abs() < 1e-12);
    }

    #[test]
    fn constant_lyapunov_has_zero_increments() {
        let p = ModelParams::preset_disease_free();
        let e0 = EpidemicState::new(p.carrying_level(), 0.0, 0.0);
        let rec = monitor_lyapunov(&traj_of(vec![e0; 20]), LyapunovKind::L0, None).unwrap();
        assert!(rec.values.iter().all(|v| *v == 0.0));
        assert_eq!(rec.max_increment, 0.0);
        assert!(rec.monotone);
    }

    #[test]
    fn lstar_without_endemic_state_is_an_error() {
        let e = EpidemicState::new(8.0, 1.0, 1.0);
        assert!(monitor_lyapunov(&traj_of(vec![e; 3]), LyapunovKind::Lstar, None).is_err());
    }

    #[test]
    fn empty_sweep_rejected() {
        let p = ModelParams::preset_endemic();
        let t = GridTemplate { step_h: 0.05, horizon: 1.0 };
        assert!(sweep(&p, EpidemicState::new(10.0, 1.0, 1.0), &[], t).is_err());
    }

    #[test]
    fn run_rejects_negative_start_and_large_step() {
        let p = ModelParams::preset_disease_free();
        let grid = FracGrid::new(FracOrder::ONE, 0.05, 10).unwrap();
        assert!(run(&p, EpidemicState::new(-1.0, 0.0, 0.0), &grid).is_err());
        let coarse = FracGrid::new(FracOrder::ONE, 20.0, 10).unwrap();
        assert!(matches!(
            run(&p, EpidemicState::new(1.0, 0.0, 0.0), &coarse),
            Err(Error::Config(_))
        ));
    }
}
