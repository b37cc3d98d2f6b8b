//! SIRS compartment model with the general incidence βSI/(1 + k₁S + k₂I + k₃SI).

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Unvalidated parameter record, as read from configuration files.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawParams {
    /// Recruitment rate Λ.
    #[serde(rename = "Lambda")]
    pub recruitment: f64,
    /// Natural death rate μ.
    #[serde(rename = "mu")]
    pub death_rate: f64,
    /// Infection rate β.
    #[serde(rename = "beta")]
    pub infection_rate: f64,
    /// Immunity-loss rate λ.
    #[serde(rename = "lambda")]
    pub immunity_loss: f64,
    /// Recovery rate r.
    #[serde(rename = "r")]
    pub recovery_rate: f64,
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
}

/// Validated model constants. Construction goes through [`ModelParams::new`],
/// so an instance always satisfies the positivity invariants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(into = "RawParams")]
pub struct ModelParams {
    raw: RawParams,
}

impl From<ModelParams> for RawParams {
    fn from(p: ModelParams) -> Self {
        p.raw
    }
}

impl<'de> Deserialize<'de> for ModelParams {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawParams::deserialize(d)?;
        ModelParams::new(raw).map_err(serde::de::Error::custom)
    }
}

fn check(field: &'static str, value: f64, ok: bool, reason: &'static str) -> Result<()> {
    if value.is_finite() && ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            field,
            value,
            reason,
        })
    }
}

impl ModelParams {
    pub fn new(raw: RawParams) -> Result<Self> {
        check("Lambda", raw.recruitment, raw.recruitment > 0.0, "must be positive")?;
        check("mu", raw.death_rate, raw.death_rate > 0.0, "must be positive")?;
        check("beta", raw.infection_rate, raw.infection_rate > 0.0, "must be positive")?;
        check("lambda", raw.immunity_loss, raw.immunity_loss >= 0.0, "must be non-negative")?;
        check("r", raw.recovery_rate, raw.recovery_rate > 0.0, "must be positive")?;
        check("k1", raw.k1, raw.k1 >= 0.0, "must be non-negative")?;
        check("k2", raw.k2, raw.k2 >= 0.0, "must be non-negative")?;
        check("k3", raw.k3, raw.k3 >= 0.0, "must be non-negative")?;
        let p = ModelParams { raw };
        // c = a(μ+λ) - λr must agree with μ² + μλ + rμ > 0
        let (mu, lambda, r) = (p.death_rate(), p.immunity_loss(), p.recovery_rate());
        let identity = mu * mu + mu * lambda + r * mu;
        let c = p.c();
        if !(identity > 0.0 && (c - identity).abs() <= 1e-12 * identity.max(1.0)) {
            return Err(Error::InvalidParameter {
                field: "mu",
                value: mu,
                reason: "derived constant c = a(mu+lambda) - lambda r must be positive",
            });
        }
        Ok(p)
    }

    /// Disease-free reference set: Λ=0.8, μ=0.1, λ=0.5, β=0.1, r=0.5,
    /// k₁=0.1, k₂=0.02, k₃=0.003 (R₀ ≈ 0.7407).
    pub fn preset_disease_free() -> Self {
        Self::new(RawParams {
            recruitment: 0.8,
            death_rate: 0.1,
            infection_rate: 0.1,
            immunity_loss: 0.5,
            recovery_rate: 0.5,
            k1: 0.1,
            k2: 0.02,
            k3: 0.003,
        })
        .expect("preset is valid")
    }

    /// Same as [`preset_disease_free`](Self::preset_disease_free) with μ = 0.02 (R₀ ≈ 1.5385).
    pub fn preset_endemic() -> Self {
        Self::preset_disease_free()
            .with_death_rate(0.02)
            .expect("preset is valid")
    }

    pub fn raw(&self) -> RawParams {
        self.raw
    }

    pub fn with_death_rate(&self, mu: f64) -> Result<Self> {
        Self::new(RawParams {
            death_rate: mu,
            ..self.raw
        })
    }

    pub fn with_immunity_loss(&self, lambda: f64) -> Result<Self> {
        Self::new(RawParams {
            immunity_loss: lambda,
            ..self.raw
        })
    }

    #[inline]
    pub fn recruitment(&self) -> f64 {
        self.raw.recruitment
    }
    #[inline]
    pub fn death_rate(&self) -> f64 {
        self.raw.death_rate
    }
    #[inline]
    pub fn infection_rate(&self) -> f64 {
        self.raw.infection_rate
    }
    #[inline]
    pub fn immunity_loss(&self) -> f64 {
        self.raw.immunity_loss
    }
    #[inline]
    pub fn recovery_rate(&self) -> f64 {
        self.raw.recovery_rate
    }
    #[inline]
    pub fn k1(&self) -> f64 {
        self.raw.k1
    }
    #[inline]
    pub fn k2(&self) -> f64 {
        self.raw.k2
    }
    #[inline]
    pub fn k3(&self) -> f64 {
        self.raw.k3
    }

    /// a = μ + r, total outflow rate of the infective class.
    #[inline]
    pub fn a(&self) -> f64 {
        self.death_rate() + self.recovery_rate()
    }

    /// c = a(μ + λ) - λr.
    #[inline]
    pub fn c(&self) -> f64 {
        let lambda = self.immunity_loss();
        self.a() * (self.death_rate() + lambda) - lambda * self.recovery_rate()
    }

    /// Λ/μ, the susceptible level of the disease-free state.
    #[inline]
    pub fn carrying_level(&self) -> f64 {
        self.recruitment() / self.death_rate()
    }

    /// 1 + k₁S + k₂I + k₃SI.
    #[inline]
    pub fn incidence_denominator(&self, s: f64, i: f64) -> f64 {
        1.0 + self.k1() * s + self.k2() * i + self.k3() * s * i
    }
}

/// Point (S, I, R) of the compartment space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpidemicState {
    #[serde(rename = "S")]
    pub s: f64,
    #[serde(rename = "I")]
    pub i: f64,
    #[serde(rename = "R")]
    pub r: f64,
}

impl EpidemicState {
    pub const fn new(s: f64, i: f64, r: f64) -> Self {
        EpidemicState { s, i, r }
    }

    pub fn total(&self) -> f64 {
        self.s + self.i + self.r
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.s, self.i, self.r]
    }

    pub fn from_array(x: [f64; 3]) -> Self {
        EpidemicState::new(x[0], x[1], x[2])
    }

    pub fn is_finite(&self) -> bool {
        self.s.is_finite() && self.i.is_finite() && self.r.is_finite()
    }

    pub fn is_non_negative(&self) -> bool {
        self.s >= 0.0 && self.i >= 0.0 && self.r >= 0.0
    }

    /// Sup-norm distance.
    pub fn distance_inf(&self, other: &EpidemicState) -> f64 {
        (self.s - other.s)
            .abs()
            .max((self.i - other.i).abs())
            .max((self.r - other.r).abs())
    }

    pub fn norm_inf(&self) -> f64 {
        self.s.abs().max(self.i.abs()).max(self.r.abs())
    }
}

/// βSI / (1 + k₁S + k₂I + k₃SI).
pub fn incidence(p: &ModelParams, s: f64, i: f64) -> f64 {
    p.infection_rate() * s * i / p.incidence_denominator(s, i)
}

/// Per-infective force f(S, I) = βS / (1 + k₁S + k₂I + k₃SI).
pub fn force_of_infection(p: &ModelParams, s: f64, i: f64) -> f64 {
    p.infection_rate() * s / p.incidence_denominator(s, i)
}

/// Right-hand side (dS, dI, dR) of the Caputo system.
pub fn vector_field(p: &ModelParams, x: &EpidemicState) -> [f64; 3] {
    let inc = incidence(p, x.s, x.i);
    let mu = p.death_rate();
    let lambda = p.immunity_loss();
    let r = p.recovery_rate();
    [
        p.recruitment() - mu * x.s - inc + lambda * x.r,
        inc - p.a() * x.i,
        r * x.i - (mu + lambda) * x.r,
    ]
}

/// Jacobian of [`vector_field`] at `x`, rows (S, I, R).
pub fn jacobian(p: &ModelParams, x: &EpidemicState) -> [[f64; 3]; 3] {
    let den = p.incidence_denominator(x.s, x.i);
    let den2 = den * den;
    let beta = p.infection_rate();
    // ∂(incidence)/∂S and ∂(incidence)/∂I
    let d_s = beta * x.i * (1.0 + p.k2() * x.i) / den2;
    let d_i = beta * x.s * (1.0 + p.k1() * x.s) / den2;
    let mu = p.death_rate();
    let lambda = p.immunity_loss();
    [
        [-mu - d_s, -d_i, lambda],
        [d_s, d_i - p.a(), 0.0],
        [0.0, p.recovery_rate(), -(mu + lambda)],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bilinear() -> ModelParams {
        ModelParams::new(RawParams {
            k1: 0.0,
            k2: 0.0,
            k3: 0.0,
            ..ModelParams::preset_disease_free().raw()
        })
        .unwrap()
    }

    #[test]
    fn incidence_bilinear_collapse() {
        assert!((incidence(&bilinear(), 10.0, 1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn incidence_vanishes_without_infectives() {
        let p = ModelParams::preset_disease_free();
        assert_eq!(incidence(&p, 10.0, 0.0), 0.0);
        assert_eq!(incidence(&p, 0.0, 0.0), 0.0);
    }

    #[test]
    fn incidence_reference_set() {
        let p = ModelParams::preset_disease_free();
        // 0.1·10·1 / (1 + 1 + 0.02 + 0.03), written out independently
        let expected = 1.0 / 2.05;
        assert!((incidence(&p, 10.0, 1.0) - expected).abs() < 1e-15);
        assert!((incidence(&p, 10.0, 1.0) - 0.487_804_88).abs() < 1e-8);
    }

    #[test]
    fn field_vanishes_at_disease_free_state() {
        let p = ModelParams::preset_disease_free();
        let e0 = EpidemicState::new(8.0, 0.0, 0.0);
        assert_eq!(vector_field(&p, &e0), [0.0, 0.0, 0.0]);
    }

    #[test]
    fn susceptible_inflow_on_boundary() {
        let p = ModelParams::preset_disease_free();
        let f = vector_field(&p, &EpidemicState::new(0.0, 2.0, 3.0));
        assert_eq!(f[0], 0.8 + 0.5 * 3.0);
    }

    #[test]
    fn jacobian_bilinear_entry() {
        let j = jacobian(&bilinear(), &EpidemicState::new(1.0, 1.0, 0.0));
        assert_eq!(j[0][1], -0.1);
    }

    #[test]
    fn jacobian_fixed_entries() {
        let p = ModelParams::preset_disease_free();
        let j = jacobian(&p, &EpidemicState::new(3.0, 2.0, 1.0));
        assert_eq!(j[2][2], -(0.1 + 0.5));
        assert_eq!(j[2][1], 0.5);
        assert_eq!(j[0][2], 0.5);
        assert_eq!(j[1][2], 0.0);
    }

    #[test]
    fn invalid_params_rejected() {
        let base = ModelParams::preset_disease_free().raw();
        let cases = [
            RawParams { recruitment: 0.0, ..base },
            RawParams { death_rate: 0.0, ..base },
            RawParams { infection_rate: -1.0, ..base },
            RawParams { immunity_loss: -0.1, ..base },
            RawParams { recovery_rate: 0.0, ..base },
            RawParams { k1: -1e-9, ..base },
            RawParams { k2: f64::NAN, ..base },
            RawParams { k3: f64::INFINITY, ..base },
        ];
        for raw in cases {
            assert!(ModelParams::new(raw).is_err(), "{raw:?}");
        }
        assert!(ModelParams::new(RawParams { immunity_loss: 0.0, ..base }).is_ok());
    }

    #[test]
    fn derived_constants() {
        let p = ModelParams::preset_endemic();
        assert!((p.a() - 0.52).abs() < 1e-15);
        let identity = 0.02 * 0.02 + 0.02 * 0.5 + 0.5 * 0.02;
        assert!((p.c() - identity).abs() < 1e-15);
        assert!((p.carrying_level() - 40.0).abs() < 1e-12);
    }
}
