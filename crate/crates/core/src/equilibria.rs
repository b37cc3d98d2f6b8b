//! Basic reproduction number and the two equilibria of the model.
//!
//! The endemic susceptible level S* is the root of
//! `g(S) = f(S, I(S)) - a`, `I(S) = (μ+λ)(Λ - μS)/c`, which is strictly
//! increasing on `[0, Λ/μ]`; bisection on that bracket is the source of truth.
//! The published closed form for S* is evaluated alongside purely as a
//! cross-check and its distance from the bisection root is reported.

use serde::Serialize;

use crate::model::{force_of_infection, vector_field, EpidemicState, ModelParams};
use crate::{Error, Result};

/// Summary of the equilibrium structure for one parameter set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquilibriumReport {
    pub r0: f64,
    pub e0: EpidemicState,
    pub endemic: Option<EpidemicState>,
    pub s_star_closed_form: Option<f64>,
    pub closed_form_discrepancy: Option<f64>,
}

impl EquilibriumReport {
    pub fn compute(p: &ModelParams) -> Result<Self> {
        let r0 = basic_reproduction_number(p);
        let e0 = disease_free_equilibrium(p);
        let endemic = endemic_equilibrium(p)?;
        let (s_star_closed_form, closed_form_discrepancy) = match (endemic, p.k3() > 0.0) {
            (Some(e), true) => {
                let s = closed_form_s_star(p)?;
                (Some(s), Some((s - e.s).abs()))
            }
            _ => (None, None),
        };
        Ok(EquilibriumReport {
            r0,
            e0,
            endemic,
            s_star_closed_form,
            closed_form_discrepancy,
        })
    }
}

/// R₀ = βΛ / ((μ + Λk₁)(μ + r)).
pub fn basic_reproduction_number(p: &ModelParams) -> f64 {
    p.infection_rate() * p.recruitment()
        / ((p.death_rate() + p.recruitment() * p.k1()) * (p.death_rate() + p.recovery_rate()))
}

pub fn disease_free_equilibrium(p: &ModelParams) -> EpidemicState {
    EpidemicState::new(p.carrying_level(), 0.0, 0.0)
}

/// Infective level on the steady-state curve, (μ+λ)(Λ - μS)/c.
fn steady_infectives(p: &ModelParams, s: f64) -> f64 {
    (p.death_rate() + p.immunity_loss()) * (p.recruitment() - p.death_rate() * s) / p.c()
}

fn steady_recovered(p: &ModelParams, s: f64) -> f64 {
    p.recovery_rate() * (p.recruitment() - p.death_rate() * s) / p.c()
}

fn g_unchecked(p: &ModelParams, s: f64) -> f64 {
    force_of_infection(p, s, steady_infectives(p, s)) - p.a()
}

/// g(S) = f(S, I(S)) - a on `[0, Λ/μ]`.
pub fn endemic_g(p: &ModelParams, s: f64) -> Result<f64> {
    let top = p.carrying_level();
    if !(s.is_finite() && (0.0..=top).contains(&s)) {
        return Err(Error::Domain {
            function: "endemic_g",
            value: s,
            expected: "0 <= S <= Lambda/mu",
        });
    }
    Ok(g_unchecked(p, s))
}

/// Endemic equilibrium (S*, I*, R*), present only when R₀ > 1.
pub fn endemic_equilibrium(p: &ModelParams) -> Result<Option<EpidemicState>> {
    if basic_reproduction_number(p) <= 1.0 {
        return Ok(None);
    }
    let top = p.carrying_level();
    let (mut lo, mut hi) = (0.0, top);
    let (g_lo, g_hi) = (g_unchecked(p, lo), g_unchecked(p, hi));
    if !(g_lo < 0.0 && g_hi > 0.0) {
        return Err(Error::Internal(format!(
            "bisection bracket failed: g(0) = {g_lo}, g(Lambda/mu) = {g_hi}"
        )));
    }
    // Run to floating-point resolution; the 1e-12·Λ/μ width contract is
    // reached long before, but steep incidences need the extra digits to
    // keep the residual small.
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g_unchecked(p, mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let at = |s: f64| EpidemicState::new(s, steady_infectives(p, s), steady_recovered(p, s));
    let (e_lo, e_hi) = (at(lo), at(hi));
    let e = if residual_norm(p, &e_lo) <= residual_norm(p, &e_hi) {
        e_lo
    } else {
        e_hi
    };
    let residual = residual_norm(p, &e);
    if residual >= 1e-10 * p.recruitment().max(1.0) {
        return Err(Error::Internal(format!(
            "endemic equilibrium residual {residual:e} above tolerance"
        )));
    }
    Ok(Some(e))
}

/// Sup-norm of the vector field, used as the equilibrium residual.
pub fn residual_norm(p: &ModelParams, x: &EpidemicState) -> f64 {
    vector_field(p, x).iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// The published closed-form S* (with its Δ), evaluated verbatim.
///
/// Requires k₃ > 0. This is a diagnostic: it disagrees with the bisection
/// root for typical parameters.
pub fn closed_form_s_star(p: &ModelParams) -> Result<f64> {
    let k3 = p.k3();
    if !(k3 > 0.0) {
        return Err(Error::Domain {
            function: "closed_form_s_star",
            value: k3,
            expected: "k3 > 0",
        });
    }
    let (lam_cap, mu, beta, lambda) = (
        p.recruitment(),
        p.death_rate(),
        p.infection_rate(),
        p.immunity_loss(),
    );
    let (k1, k2) = (p.k1(), p.k2());
    let (a, c) = (p.a(), p.c());
    let ml = mu + lambda;
    let delta = closed_form_delta(p);
    let num = k3 * a * lam_cap * ml + k1 * a * c - beta * c - k2 * a * mu * ml + delta.sqrt();
    Ok(num / (2.0 * k3 * a * mu * ml))
}

/// Δ as printed alongside the closed-form S*.
pub fn closed_form_delta(p: &ModelParams) -> f64 {
    let (lam_cap, mu, beta, lambda) = (
        p.recruitment(),
        p.death_rate(),
        p.infection_rate(),
        p.immunity_loss(),
    );
    let (k1, k2, k3) = (p.k1(), p.k2(), p.k3());
    let (a, c) = (p.a(), p.c());
    let ml = mu + lambda;
    let lin = beta * c - k1 * a * c - k3 * a * lam_cap * ml + k2 * a * mu * ml;
    lin * lin + 4.0 * k3 * a * mu * (a * c + k2 * a * lam_cap * ml)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::RawParams;

    #[test]
    fn reproduction_numbers_of_reference_sets() {
        let r1 = basic_reproduction_number(&ModelParams::preset_disease_free());
        let r2 = basic_reproduction_number(&ModelParams::preset_endemic());
        assert!((r1 - 0.7407).abs() < 5e-5, "{r1}");
        assert!((r2 - 1.5385).abs() < 5e-5, "{r2}");
    }

    #[test]
    fn reproduction_number_without_saturation() {
        let base = ModelParams::preset_disease_free().raw();
        let p = ModelParams::new(RawParams { k1: 0.0, ..base }).unwrap();
        let expected = 0.1 * 0.8 / (0.1 * (0.1 + 0.5));
        assert!((basic_reproduction_number(&p) - expected).abs() < 1e-15);
    }

    #[test]
    fn disease_free_points() {
        assert_eq!(
            disease_free_equilibrium(&ModelParams::preset_disease_free()),
            EpidemicState::new(0.8 / 0.1, 0.0, 0.0)
        );
        let e = disease_free_equilibrium(&ModelParams::preset_endemic());
        assert!((e.s - 40.0).abs() < 1e-12);
        let base = ModelParams::preset_disease_free().raw();
        let p = ModelParams::new(RawParams { recruitment: 0.3, death_rate: 0.3, ..base }).unwrap();
        assert_eq!(disease_free_equilibrium(&p), EpidemicState::new(1.0, 0.0, 0.0));
    }

    #[test]
    fn g_endpoints() {
        let p = ModelParams::preset_endemic();
        assert_eq!(endemic_g(&p, 0.0).unwrap(), -p.a());
        let top = p.carrying_level();
        let expected = p.a() * (basic_reproduction_number(&p) - 1.0);
        assert!((endemic_g(&p, top).unwrap() - expected).abs() < 1e-14);
        assert!(endemic_g(&p, -0.1).is_err());
        assert!(endemic_g(&p, top * 1.001).is_err());
    }

    #[test]
    fn no_endemic_state_below_threshold() {
        assert_eq!(endemic_equilibrium(&ModelParams::preset_disease_free()).unwrap(), None);
    }

    #[test]
    fn threshold_exactly_one_is_disease_free() {
        // β chosen so that R₀ = 1 up to rounding; either way no endemic point is produced
        let base = ModelParams::preset_disease_free().raw();
        let beta = (0.1 + 0.8 * 0.1) * (0.1 + 0.5) / 0.8;
        let p = ModelParams::new(RawParams { infection_rate: beta, ..base }).unwrap();
        let r0 = basic_reproduction_number(&p);
        if r0 <= 1.0 {
            assert_eq!(endemic_equilibrium(&p).unwrap(), None);
        }
    }

    #[test]
    fn closed_form_requires_k3() {
        let base = ModelParams::preset_endemic().raw();
        let p = ModelParams::new(RawParams { k3: 0.0, ..base }).unwrap();
        assert!(matches!(closed_form_s_star(&p), Err(Error::Domain { .. })));
    }
}
