//! JSON run configuration.
//!
//! ```json
//! {
//!   "params": {"Lambda": 0.8, "mu": 0.1, "beta": 0.1, "lambda": 0.5,
//!              "r": 0.5, "k1": 0.1, "k2": 0.02, "k3": 0.003},
//!   "initial": {"S0": 10, "I0": 1, "R0": 1},
//!   "grid": {"alpha": 0.85, "step_h": 0.05, "horizon_T": 200},
//!   "outputs": {"csv": true, "json": true, "svg": false},
//!   "output_dir": "out"
//! }
//! ```

use std::path::{Path, PathBuf};

use caputo_sirs::engine::GridTemplate;
use caputo_sirs::model::RawParams;
use caputo_sirs::{EpidemicState, FracGrid, FracOrder, ModelParams};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Environment variable that, when set, replaces `output_dir`.
pub const OUT_DIR_ENV: &str = "CAPUTO_SIRS_OUT";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub params: RawParams,
    pub initial: InitialState,
    pub grid: GridConfig,
    #[serde(default)]
    pub outputs: OutputFlags,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialState {
    #[serde(rename = "S0")]
    pub s0: f64,
    #[serde(rename = "I0")]
    pub i0: f64,
    #[serde(rename = "R0")]
    pub r0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub alpha: f64,
    pub step_h: f64,
    #[serde(rename = "horizon_T")]
    pub horizon: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputFlags {
    pub csv: bool,
    pub json: bool,
    pub svg: bool,
}

impl Default for OutputFlags {
    fn default() -> Self {
        OutputFlags {
            csv: true,
            json: true,
            svg: false,
        }
    }
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

/// A configuration that passed every model and grid check.
#[derive(Debug, Clone, PartialEq)]
pub struct Validated {
    pub params: ModelParams,
    pub x0: EpidemicState,
    pub alpha: FracOrder,
    pub grid: FracGrid,
    pub template: GridTemplate,
    pub outputs: OutputFlags,
    pub output_dir: PathBuf,
}

impl RunConfig {
    pub fn from_json(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> CliResult<Validated> {
        let params = ModelParams::new(self.params)?;
        let InitialState { s0, i0, r0 } = self.initial;
        for (field, v) in [("initial.S0", s0), ("initial.I0", i0), ("initial.R0", r0)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(CliError::Config(format!(
                    "{field} = {v}: must be finite and non-negative"
                )));
            }
        }
        let alpha = FracOrder::new(self.grid.alpha)
            .map_err(|e| CliError::Config(format!("grid.alpha: {e}")))?;
        let template = GridTemplate {
            step_h: self.grid.step_h,
            horizon: self.grid.horizon,
        };
        let grid = checked_grid(&params, template, alpha)?;
        Ok(Validated {
            params,
            x0: EpidemicState::new(s0, i0, r0),
            alpha,
            grid,
            template,
            outputs: self.outputs,
            output_dir: self.output_dir.clone(),
        })
    }
}

/// Grid for `alpha`, including the step-size guard on the model's linear part.
pub fn checked_grid(p: &ModelParams, template: GridTemplate, alpha: FracOrder) -> CliResult<FracGrid> {
    let grid = template
        .grid(alpha)
        .map_err(|e| CliError::Config(format!("grid: {e}")))?;
    grid.check_linear_stability(p.death_rate())
        .map_err(|e| CliError::Config(format!("grid: {e}")))?;
    Ok(grid)
}

/// `CAPUTO_SIRS_OUT` wins over the configured directory.
pub fn resolve_output_dir(configured: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(v) if !v.is_empty() => PathBuf::from(v),
        _ => configured.to_path_buf(),
    }
}
