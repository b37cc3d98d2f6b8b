//! Local and global stability analysis.
//!
//! Local stability of an equilibrium of the Caputo system follows from the
//! Matignon sector condition `|arg ξ| > απ/2` on every Jacobian eigenvalue ξ.
//! The Routh-Hurwitz style coefficient cases are evaluated independently and
//! must never contradict it.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::equilibria::{basic_reproduction_number, residual_norm, EquilibriumReport};
use crate::frac_kernel::FracOrder;
use crate::model::{EpidemicState, ModelParams};
use crate::{Error, Result};

/// Coefficients of the monic cubic ξ³ + a₁ξ² + a₂ξ + a₃.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CubicCoeffs {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl CubicCoeffs {
    pub fn new(a1: f64, a2: f64, a3: f64) -> Self {
        CubicCoeffs { a1, a2, a3 }
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        ((x + self.a1) * x + self.a2) * x + self.a3
    }

    pub fn max_abs(&self) -> f64 {
        self.a1.abs().max(self.a2.abs()).max(self.a3.abs())
    }
}

/// Coefficient case of the Routh-Hurwitz analysis for fractional cubics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RhCase {
    /// a₁ > 0, a₃ > 0, a₁a₂ > a₃: asymptotically stable for all α.
    #[serde(rename = "i")]
    I,
    /// D < 0, a₁ ≥ 0, a₂ ≥ 0, a₃ > 0, a₁a₂ < a₃, α < 2/3: asymptotically stable.
    #[serde(rename = "ii")]
    II,
    /// D < 0, a₁ < 0, a₂ < 0, α > 2/3: unstable.
    #[serde(rename = "iii")]
    III,
    /// D < 0, a₁ > 0, a₂ > 0, a₁a₂ = a₃: asymptotically stable for α < 1.
    #[serde(rename = "iv")]
    IV,
    /// D < 0, a₁ > 0, a₃ = 0: stable, not asymptotically (zero root).
    #[serde(rename = "v")]
    V,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RhVerdict {
    AsymptoticallyStable,
    /// Lyapunov stable with a zero eigenvalue.
    Stable,
    Unstable,
}

impl RhCase {
    pub fn verdict(self) -> Option<RhVerdict> {
        match self {
            RhCase::I | RhCase::II | RhCase::IV => Some(RhVerdict::AsymptoticallyStable),
            RhCase::V => Some(RhVerdict::Stable),
            RhCase::III => Some(RhVerdict::Unstable),
            RhCase::Inconclusive => None,
        }
    }
}

/// Relative band for the a₁a₂ = a₃ equality of case (iv).
pub const RH_PRODUCT_TOL: f64 = 1e-10;
/// Absolute band for the a₃ = 0 equality of case (v).
pub const RH_ZERO_TOL: f64 = 1e-12;
/// Eigenvalues at or below this modulus count as zero in the sector test.
pub const ZERO_EIGENVALUE_TOL: f64 = 1e-14;

/// Everything the local analysis knows about one equilibrium at one order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub equilibrium: EpidemicState,
    #[serde(serialize_with = "complex_pairs")]
    pub eigenvalues: [Complex64; 3],
    pub coeffs: CubicCoeffs,
    pub discriminant: f64,
    pub alpha: FracOrder,
    pub matignon_stable: bool,
    pub rh_case: RhCase,
    pub global_e0_condition: bool,
    pub global_estar_condition: bool,
}

fn complex_pairs<S: Serializer>(eigs: &[Complex64; 3], s: S) -> std::result::Result<S::Ok, S::Error> {
    let pairs: Vec<[f64; 2]> = eigs.iter().map(|z| [z.re, z.im]).collect();
    pairs.serialize(s)
}

fn require_equilibrium(p: &ModelParams, eq: &EpidemicState) -> Result<()> {
    let res = residual_norm(p, eq);
    if res < 1e-8 * p.recruitment().max(1.0) {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "point ({}, {}, {}) is not an equilibrium (residual {res:e})",
            eq.s, eq.i, eq.r
        )))
    }
}

/// Characteristic cubic of the Jacobian at an equilibrium, written out in
/// terms of the incidence partials X = βI(1+k₂I)/D² and Y = βS(1+k₁S)/D².
pub fn characteristic_coefficients(p: &ModelParams, eq: &EpidemicState) -> Result<CubicCoeffs> {
    require_equilibrium(p, eq)?;
    let (s, i) = (eq.s, eq.i);
    let den = p.incidence_denominator(s, i);
    let den2 = den * den;
    let beta = p.infection_rate();
    let x = beta * i * (1.0 + p.k2() * i);
    let y = beta * s * (1.0 + p.k1() * s);
    let mu = p.death_rate();
    let ml = mu + p.immunity_loss();
    let a = p.a();
    let c = p.c();
    let a1 = a + 2.0 * mu + p.immunity_loss() + (x - y) / den2;
    let a2 = mu * a + ml * mu + ml * a + ((a + ml) * x - (2.0 * mu + p.immunity_loss()) * y) / den2;
    let a3 = ml * mu * a + (c * x - ml * mu * y) / den2;
    Ok(CubicCoeffs::new(a1, a2, a3))
}

/// D(f) = 18a₁a₂a₃ + (a₁a₂)² - 4a₃a₁³ - 4a₂³ - 27a₃².
pub fn cubic_discriminant(c: &CubicCoeffs) -> f64 {
    let CubicCoeffs { a1, a2, a3 } = *c;
    18.0 * a1 * a2 * a3 + (a1 * a2).powi(2) - 4.0 * a3 * a1.powi(3) - 4.0 * a2.powi(3) - 27.0 * a3 * a3
}

fn newton_polish(c: &CubicCoeffs, mut x: f64) -> f64 {
    let p = |t: f64| ((t + c.a1) * t + c.a2) * t + c.a3;
    let dp = |t: f64| (3.0 * t + 2.0 * c.a1) * t + c.a2;
    for _ in 0..3 {
        let d = dp(x);
        if d == 0.0 {
            break;
        }
        let next = x - p(x) / d;
        if !next.is_finite() || p(next).abs() >= p(x).abs() {
            break;
        }
        x = next;
    }
    x
}

/// Roots of the monic cubic, sorted by real part. The branch (three real
/// roots vs one real root and a conjugate pair) follows the sign of
/// [`cubic_discriminant`]; complex roots are exact conjugates.
pub fn cubic_roots(c: &CubicCoeffs) -> [Complex64; 3] {
    let CubicCoeffs { a1, a2, a3 } = *c;
    let shift = -a1 / 3.0;
    // depressed cubic t³ + pt + q with ξ = t + shift
    let p = a2 - a1 * a1 / 3.0;
    let q = 2.0 * a1.powi(3) / 27.0 - a1 * a2 / 3.0 + a3;
    let disc = cubic_discriminant(c);

    let mut roots = if disc > 0.0 && p < 0.0 {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        let mut r: [Complex64; 3] = [0, 1, 2].map(|k| {
            let t = m * (phi - 2.0 * PI * k as f64 / 3.0).cos();
            Complex64::new(newton_polish(c, t + shift), 0.0)
        });
        r.sort_by(|x, y| x.re.total_cmp(&y.re));
        r
    } else {
        let h = ((q / 2.0).powi(2) + (p / 3.0).powi(3)).max(0.0).sqrt();
        let sign = if q >= 0.0 { 1.0 } else { -1.0 };
        let u = -sign * (q.abs() / 2.0 + h).cbrt();
        let v = if u == 0.0 { 0.0 } else { -p / (3.0 * u) };
        let real = newton_polish(c, u + v + shift);
        // deflate: (ξ - real)(ξ² + bξ + k)
        let b = a1 + real;
        let k = a2 + real * b;
        let qd = b * b - 4.0 * k;
        let pair = if qd < 0.0 {
            let im = (-qd).sqrt() / 2.0;
            [Complex64::new(-b / 2.0, im), Complex64::new(-b / 2.0, -im)]
        } else {
            let sq = qd.sqrt();
            [Complex64::new((-b - sq) / 2.0, 0.0), Complex64::new((-b + sq) / 2.0, 0.0)]
        };
        [Complex64::new(real, 0.0), pair[0], pair[1]]
    };
    if roots.iter().all(|z| z.im == 0.0) {
        roots.sort_by(|x, y| x.re.total_cmp(&y.re));
    }
    roots
}

/// Matignon sector test: every eigenvalue must satisfy `|arg ξ| > απ/2`.
/// The boundary itself and zero eigenvalues count as not stable.
pub fn matignon_check(eigs: &[Complex64], alpha: FracOrder) -> bool {
    let sector = alpha.value() * PI / 2.0;
    eigs.iter()
        .all(|z| z.norm() > ZERO_EIGENVALUE_TOL && z.im.atan2(z.re).abs() > sector)
}

/// Routh-Hurwitz coefficient case whose hypotheses (including the α range)
/// hold, or [`RhCase::Inconclusive`].
pub fn routh_hurwitz_case(c: &CubicCoeffs, discriminant: f64, alpha: FracOrder) -> RhCase {
    let CubicCoeffs { a1, a2, a3 } = *c;
    let alpha = alpha.value();
    let prod = a1 * a2;
    let prod_band = RH_PRODUCT_TOL * prod.abs().max(a3.abs()).max(f64::MIN_POSITIVE);
    let a3_zero = a3.abs() <= RH_ZERO_TOL;
    let prod_equal = (prod - a3).abs() <= prod_band;
    let two_thirds = 2.0 / 3.0;

    if a1 > 0.0 && a3 > RH_ZERO_TOL && prod - a3 > prod_band {
        return RhCase::I;
    }
    if discriminant < 0.0 {
        if a1 >= 0.0 && a2 >= 0.0 && a3 > RH_ZERO_TOL && a3 - prod > prod_band && alpha < two_thirds {
            return RhCase::II;
        }
        if a1 < 0.0 && a2 < 0.0 && alpha > two_thirds {
            return RhCase::III;
        }
        if a1 > 0.0 && a2 > 0.0 && prod_equal && !a3_zero && alpha < 1.0 {
            return RhCase::IV;
        }
        if a1 > 0.0 && a3_zero {
            return RhCase::V;
        }
    }
    RhCase::Inconclusive
}

/// Local analysis of the equilibrium `eq` at order `alpha`.
pub fn classify_local(p: &ModelParams, eq: &EpidemicState, alpha: FracOrder) -> Result<StabilityReport> {
    let coeffs = characteristic_coefficients(p, eq)?;
    let discriminant = cubic_discriminant(&coeffs);
    let eigenvalues = cubic_roots(&coeffs);
    let matignon_stable = matignon_check(&eigenvalues, alpha);
    let rh_case = routh_hurwitz_case(&coeffs, discriminant, alpha);
    let report = EquilibriumReport::compute(p)?;
    let (global_e0_condition, global_estar_condition) = global_conditions(p, &report);
    Ok(StabilityReport {
        equilibrium: *eq,
        eigenvalues,
        coeffs,
        discriminant,
        alpha,
        matignon_stable,
        rh_case,
        global_e0_condition,
        global_estar_condition,
    })
}

/// Sufficient conditions for global asymptotic stability:
/// `(R₀ <= 1, R₀ > 1 and λR* <= μS*)`. The second flag is false when no
/// endemic state exists and true when λ = 0.
pub fn global_conditions(p: &ModelParams, rep: &EquilibriumReport) -> (bool, bool) {
    let r0 = basic_reproduction_number(p);
    let disease_free = r0 <= 1.0;
    let endemic = match rep.endemic {
        Some(e) if r0 > 1.0 => p.immunity_loss() * e.r <= p.death_rate() * e.s,
        _ => false,
    };
    (disease_free, endemic)
}

/// Ψ(x) = x - 1 - ln x for x > 0.
pub fn lyapunov_psi(x: f64) -> Result<f64> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::Domain {
            function: "lyapunov_psi",
            value: x,
            expected: "finite x > 0",
        });
    }
    let d = x - 1.0;
    Ok(d - d.ln_1p())
}

/// Lyapunov function for the disease-free state S₀ = Λ/μ:
///
/// ```text
/// L₀ = S₀/(1+k₁S₀) Ψ(S/S₀) + I + 1/(S₀(1+k₁S₀)) · (λ/r · R²/2 + λ/(4μ) · (N-S₀)²/2)
/// ```
pub fn lyapunov_l0(p: &ModelParams, x: &EpidemicState) -> Result<f64> {
    if !(x.s > 0.0) {
        return Err(Error::Domain {
            function: "lyapunov_l0",
            value: x.s,
            expected: "S > 0",
        });
    }
    let s0 = p.carrying_level();
    let w = 1.0 + p.k1() * s0;
    let lambda = p.immunity_loss();
    let dn = x.total() - s0;
    let quad = lambda / p.recovery_rate() * x.r * x.r / 2.0 + lambda / (4.0 * p.death_rate()) * dn * dn / 2.0;
    Ok(s0 / w * lyapunov_psi(x.s / s0)? + x.i + quad / (s0 * w))
}

/// Lyapunov function for the endemic state E* = (S*, I*, R*), with
/// q = (1+k₂S*)/(1+k₁S*+k₂I*+k₃S*I*):
///
/// ```text
/// L* = q S*² Ψ(S/S*) + S* I* Ψ(I/I*)
///      + λq/(4μ) · ((S-S*) + (I-I*) + (R-R*))² + λq/(2r) · (R-R*)²
/// ```
pub fn lyapunov_lstar(p: &ModelParams, estar: &EpidemicState, x: &EpidemicState) -> Result<f64> {
    if !(estar.s > 0.0 && estar.i > 0.0) {
        return Err(Error::Domain {
            function: "lyapunov_lstar",
            value: estar.s.min(estar.i),
            expected: "endemic equilibrium with S*, I* > 0",
        });
    }
    for v in [x.s, x.i] {
        if !(v > 0.0) {
            return Err(Error::Domain {
                function: "lyapunov_lstar",
                value: v,
                expected: "S > 0 and I > 0",
            });
        }
    }
    let (ss, is, rs) = (estar.s, estar.i, estar.r);
    let q = (1.0 + p.k2() * ss) / p.incidence_denominator(ss, is);
    let lambda = p.immunity_loss();
    let dn = (x.s - ss) + (x.i - is) + (x.r - rs);
    let dr = x.r - rs;
    Ok(q * ss * ss * lyapunov_psi(x.s / ss)?
        + ss * is * lyapunov_psi(x.i / is)?
        + lambda * q / (4.0 * p.death_rate()) * dn * dn
        + lambda * q / (2.0 * p.recovery_rate()) * dr * dr)
}
