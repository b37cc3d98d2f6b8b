//! JSON documents written by the commands.

use caputo_sirs::engine::{RunReport, SweepEntry};
use caputo_sirs::equilibria::EquilibriumReport;
use caputo_sirs::model::RawParams;
use caputo_sirs::stability::{
    characteristic_coefficients, classify_local, cubic_discriminant, cubic_roots,
    global_conditions, CubicCoeffs, RhCase,
};
use caputo_sirs::{EpidemicState, FracOrder, ModelParams};
use serde::Serialize;

use crate::error::CliResult;

/// Discrepancies larger than this between the published closed-form S* and
/// the bisection root are raised as open flags.
const CLOSED_FORM_FLAG_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub params: RawParams,
    pub r0: f64,
    pub e0: EpidemicState,
    pub endemic: Option<EpidemicState>,
    pub s_star_closed_form: Option<f64>,
    pub closed_form_discrepancy: Option<f64>,
    pub stability: Vec<EquilibriumStability>,
    pub global_conditions: GlobalConditions,
    pub open_flags: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquilibriumStability {
    pub label: &'static str,
    pub equilibrium: EpidemicState,
    /// `[re, im]` pairs.
    pub eigenvalues: Vec<[f64; 2]>,
    pub coeffs: CubicCoeffs,
    pub discriminant: f64,
    pub by_alpha: Vec<AlphaVerdict>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaVerdict {
    pub alpha: FracOrder,
    pub matignon_stable: bool,
    pub rh_case: RhCase,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GlobalConditions {
    /// R₀ ≤ 1.
    pub disease_free: bool,
    /// R₀ > 1 and λR* ≤ μS*.
    pub endemic: bool,
}

fn equilibrium_stability(
    label: &'static str,
    p: &ModelParams,
    eq: &EpidemicState,
    alphas: &[FracOrder],
) -> CliResult<EquilibriumStability> {
    let coeffs = characteristic_coefficients(p, eq)?;
    let eigenvalues = cubic_roots(&coeffs).iter().map(|z| [z.re, z.im]).collect();
    let by_alpha = alphas
        .iter()
        .map(|&alpha| {
            classify_local(p, eq, alpha).map(|r| AlphaVerdict {
                alpha,
                matignon_stable: r.matignon_stable,
                rh_case: r.rh_case,
            })
        })
        .collect::<caputo_sirs::Result<Vec<_>>>()?;
    Ok(EquilibriumStability {
        label,
        equilibrium: *eq,
        eigenvalues,
        coeffs,
        discriminant: cubic_discriminant(&coeffs),
        by_alpha,
    })
}

impl AnalysisReport {
    pub fn build(p: &ModelParams, alphas: &[FracOrder]) -> CliResult<Self> {
        let eq = EquilibriumReport::compute(p)?;
        let mut stability = vec![equilibrium_stability("E0", p, &eq.e0, alphas)?];
        if let Some(e) = &eq.endemic {
            stability.push(equilibrium_stability("E*", p, e, alphas)?);
        }
        let (disease_free, endemic) = global_conditions(p, &eq);
        let mut open_flags = Vec::new();
        if let (Some(s), Some(gap)) = (eq.s_star_closed_form, eq.closed_form_discrepancy) {
            if !(gap <= CLOSED_FORM_FLAG_TOL) {
                open_flags.push(format!(
                    "published closed-form S* evaluates to {s} but the root of g(S) is {}; \
                     the closed form is reported only, not used",
                    eq.endemic.map_or(f64::NAN, |e| e.s)
                ));
            }
        }
        if let Some(e) = &eq.endemic {
            if !endemic {
                open_flags.push(format!(
                    "sufficient global condition lambda*R* <= mu*S* fails ({} > {}); \
                     global stability of E* is not established by it",
                    p.immunity_loss() * e.r,
                    p.death_rate() * e.s
                ));
            }
        }
        Ok(AnalysisReport {
            params: p.raw(),
            r0: eq.r0,
            e0: eq.e0,
            endemic: eq.endemic,
            s_star_closed_form: eq.s_star_closed_form,
            closed_form_discrepancy: eq.closed_form_discrepancy,
            stability,
            global_conditions: GlobalConditions {
                disease_free,
                endemic,
            },
            open_flags,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// One line of a sweep summary: the run report, or the error that stopped the run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummaryEntry {
    pub alpha: FracOrder,
    pub csv: Option<String>,
    pub run: Option<RunReport>,
    pub error: Option<String>,
}

impl SweepSummaryEntry {
    pub fn from_entry(entry: &SweepEntry, csv: Option<String>) -> Self {
        match &entry.outcome {
            Ok((_, rep)) => SweepSummaryEntry {
                alpha: entry.alpha,
                csv,
                run: Some(rep.clone()),
                error: None,
            },
            Err(e) => SweepSummaryEntry {
                alpha: entry.alpha,
                csv: None,
                run: None,
                error: Some(e.to_string()),
            },
        }
    }
}

pub fn summary_json(entries: &[SweepSummaryEntry]) -> String {
    let mut s = serde_json::to_string_pretty(entries).expect("summary serializes");
    s.push('\n');
    s
}
