//! The four subcommands. Each returns the files it wrote; the binary maps
//! errors to exit codes via [`CliError::exit_code`].

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use caputo_sirs::engine::{run, summarize, sweep, GridTemplate, SweepEntry, Trajectory};
use caputo_sirs::{EpidemicState, FracOrder, ModelParams};
use clap::ValueEnum;

use crate::config::{checked_grid, resolve_output_dir, RunConfig};
use crate::csv::trajectory_csv;
use crate::error::{CliError, CliResult};
use crate::report::{summary_json, AnalysisReport, SweepSummaryEntry};
use crate::svg::{render, Plot, Series};

/// Orders used by the figure reproductions.
pub const FIGURE_ALPHAS: [f64; 4] = [0.85, 0.9, 0.95, 1.0];
pub const FIGURE_STEP: f64 = 0.05;
pub const FIGURE_X0: EpidemicState = EpidemicState::new(10.0, 1.0, 1.0);

/// Published values quoted for the endemic figure.
const PAPER_R0: [f64; 2] = [0.7407, 1.5385];
const PAPER_R_STAR: f64 = 0.552;
const PAPER_R_STAR_BOUND: f64 = 21.8944;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    /// Disease-free case (μ = 0.1), T = 200.
    Fig1,
    /// Endemic case (μ = 0.02), T = 500.
    Fig2,
}

impl Figure {
    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
        }
    }

    pub fn params(self) -> ModelParams {
        match self {
            Figure::Fig1 => ModelParams::preset_disease_free(),
            Figure::Fig2 => ModelParams::preset_endemic(),
        }
    }

    pub fn horizon(self) -> f64 {
        match self {
            Figure::Fig1 => 200.0,
            Figure::Fig2 => 500.0,
        }
    }
}

#[derive(Debug, Default)]
pub struct Outcome {
    pub written: Vec<PathBuf>,
    /// Text for standard output.
    pub stdout: String,
    /// Non-fatal notices for standard error.
    pub warnings: Vec<String>,
}

struct Writer {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl Writer {
    fn create(dir: &Path) -> CliResult<Self> {
        fs::create_dir_all(dir).map_err(|source| CliError::Output {
            path: dir.to_path_buf(),
            source,
        })?;
        Ok(Writer {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, contents: &str) -> CliResult<()> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|source| CliError::Output {
            path: path.clone(),
            source,
        })?;
        self.written.push(path);
        Ok(())
    }
}

fn state_plot(traj: &Trajectory, title: String) -> String {
    let cols: [Vec<f64>; 3] = [
        traj.states.iter().map(|x| x.s).collect(),
        traj.states.iter().map(|x| x.i).collect(),
        traj.states.iter().map(|x| x.r).collect(),
    ];
    let series = ["S", "I", "R"]
        .iter()
        .zip(&cols)
        .map(|(label, ys)| Series {
            label: label.to_string(),
            xs: &traj.times,
            ys,
        })
        .collect();
    render(&Plot {
        title,
        x_label: "t".into(),
        y_label: "individuals".into(),
        series,
    })
}

fn infectives_overlay(entries: &[SweepEntry], title: String) -> String {
    let runs: Vec<(FracOrder, &Trajectory, Vec<f64>)> = entries
        .iter()
        .filter_map(|e| e.outcome.as_ref().ok())
        .map(|(traj, _)| (traj.alpha, traj, traj.states.iter().map(|x| x.i).collect()))
        .collect();
    let series = runs
        .iter()
        .map(|(alpha, traj, ys)| Series {
            label: format!("α = {}", alpha.value()),
            xs: &traj.times,
            ys,
        })
        .collect();
    render(&Plot {
        title,
        x_label: "t".into(),
        y_label: "I(t)".into(),
        series,
    })
}

fn csv_name(alpha: FracOrder) -> String {
    format!("trajectory_alpha_{}.csv", alpha.value())
}

pub fn analyze(config: &RunConfig) -> CliResult<Outcome> {
    let v = config.validate()?;
    let report = AnalysisReport::build(&v.params, &[v.alpha])?;
    let mut w = Writer::create(&resolve_output_dir(&v.output_dir))?;
    w.write("report.json", &report.to_json())?;
    let mut stdout = format!("R0 = {}\n", report.r0);
    match report.endemic {
        Some(e) => writeln!(stdout, "endemic equilibrium: ({}, {}, {})", e.s, e.i, e.r).unwrap(),
        None => writeln!(stdout, "no endemic equilibrium").unwrap(),
    }
    for flag in &report.open_flags {
        writeln!(stdout, "note: {flag}").unwrap();
    }
    Ok(Outcome {
        written: w.written,
        stdout,
        warnings: Vec::new(),
    })
}

pub fn simulate(config: &RunConfig, svg: bool) -> CliResult<Outcome> {
    let v = config.validate()?;
    let traj = run(&v.params, v.x0, &v.grid)?;
    let rep = summarize(&traj)?;
    let mut w = Writer::create(&resolve_output_dir(&v.output_dir))?;
    if v.outputs.csv {
        w.write("trajectory.csv", &trajectory_csv(&traj))?;
    }
    if v.outputs.json {
        let mut json = serde_json::to_string_pretty(&rep).expect("run report serializes");
        json.push('\n');
        w.write("run_report.json", &json)?;
    }
    if svg || v.outputs.svg {
        let title = format!("S, I, R (α = {})", v.alpha.value());
        w.write("trajectory.svg", &state_plot(&traj, title))?;
    }
    let x = rep.final_state;
    let t_end = traj.times.last().copied().unwrap_or(0.0);
    let mut stdout = format!("final state at t = {t_end}: ({}, {}, {})\n", x.s, x.i, x.r);
    match rep.convergence_time {
        Some(t) => writeln!(stdout, "within tolerance of the expected limit from t = {t}").unwrap(),
        None => writeln!(stdout, "not within tolerance of the expected limit by the horizon").unwrap(),
    }
    if !rep.invariant_violations.is_empty() {
        writeln!(stdout, "invariant violations: {}", rep.invariant_violations.len()).unwrap();
    }
    Ok(Outcome {
        written: w.written,
        stdout,
        warnings: Vec::new(),
    })
}

/// Parses and de-duplicates the order list, keeping first occurrences.
pub fn dedup_alphas(raw: &[f64]) -> CliResult<(Vec<FracOrder>, Vec<String>)> {
    if raw.is_empty() {
        return Err(CliError::Config("--alphas needs at least one value".into()));
    }
    let mut out: Vec<FracOrder> = Vec::new();
    let mut warnings = Vec::new();
    for &a in raw {
        let alpha = FracOrder::new(a).map_err(|e| CliError::Config(format!("--alphas: {e}")))?;
        if out.contains(&alpha) {
            warnings.push(format!("duplicate alpha {a} ignored"));
        } else {
            out.push(alpha);
        }
    }
    Ok((out, warnings))
}

fn sweep_into(
    w: &mut Writer,
    p: &ModelParams,
    x0: EpidemicState,
    alphas: &[FracOrder],
    template: GridTemplate,
    prefix: &str,
    per_run_svg: bool,
) -> CliResult<Vec<SweepEntry>> {
    for &alpha in alphas {
        checked_grid(p, template, alpha)?;
    }
    let entries = sweep(p, x0, alphas, template)?;
    let mut summary = Vec::with_capacity(entries.len());
    for entry in &entries {
        let csv = match &entry.outcome {
            Ok((traj, _)) => {
                let name = format!("{prefix}{}", csv_name(entry.alpha));
                w.write(&name, &trajectory_csv(traj))?;
                if per_run_svg {
                    let title = format!("S, I, R (α = {})", entry.alpha.value());
                    let svg_name = name.replace(".csv", ".svg");
                    w.write(&svg_name, &state_plot(traj, title))?;
                }
                Some(name)
            }
            Err(_) => None,
        };
        summary.push(SweepSummaryEntry::from_entry(entry, csv));
    }
    w.write(&format!("{prefix}summary.json"), &summary_json(&summary))?;
    Ok(entries)
}

fn first_failure(entries: &[SweepEntry]) -> Option<CliError> {
    entries.iter().find_map(|e| match &e.outcome {
        Err(err) => Some(CliError::from(err.clone())),
        Ok(_) => None,
    })
}

pub fn sweep_cmd(config: &RunConfig, raw_alphas: &[f64]) -> CliResult<Outcome> {
    let v = config.validate()?;
    let (alphas, warnings) = dedup_alphas(raw_alphas)?;
    let mut w = Writer::create(&resolve_output_dir(&v.output_dir))?;
    let entries = sweep_into(&mut w, &v.params, v.x0, &alphas, v.template, "", false)?;
    let list: Vec<String> = alphas.iter().map(|a| a.value().to_string()).collect();
    w.write(
        "sweep_infectives.svg",
        &infectives_overlay(&entries, format!("I(t) for α ∈ {{{}}}", list.join(", "))),
    )?;
    let mut stdout = String::new();
    for e in &entries {
        match &e.outcome {
            Ok((_, rep)) => writeln!(
                stdout,
                "alpha {}: convergence time {}",
                e.alpha.value(),
                rep.convergence_time.map_or("none".to_string(), |t| t.to_string())
            )
            .unwrap(),
            Err(err) => writeln!(stdout, "alpha {}: failed: {err}", e.alpha.value()).unwrap(),
        }
    }
    if let Some(err) = first_failure(&entries) {
        return Err(err);
    }
    Ok(Outcome {
        written: w.written,
        stdout,
        warnings,
    })
}

/// One line of the published-vs-computed comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub quantity: String,
    pub paper: String,
    pub computed: String,
    pub status: &'static str,
}

fn fmt_state(x: &EpidemicState) -> String {
    format!("({:.4}, {:.4}, {:.4})", x.s, x.i, x.r)
}

pub fn comparison_rows(
    figure: Figure,
    report: &AnalysisReport,
    entries: &[SweepEntry],
) -> Vec<ComparisonRow> {
    let p = figure.params();
    let mut rows = Vec::new();
    let paper_r0 = PAPER_R0[(figure == Figure::Fig2) as usize];
    rows.push(ComparisonRow {
        quantity: "R0".into(),
        paper: format!("{paper_r0}"),
        computed: format!("{:.6}", report.r0),
        status: if (report.r0 - paper_r0).abs() < 5e-5 { "match" } else { "DISCREPANCY" },
    });
    let (target, label) = match (figure, report.endemic) {
        (Figure::Fig2, Some(e)) => {
            rows.push(ComparisonRow {
                quantity: "E*".into(),
                paper: "-".into(),
                computed: fmt_state(&e),
                status: "-",
            });
            rows.push(ComparisonRow {
                quantity: "R*".into(),
                paper: format!("{PAPER_R_STAR}"),
                computed: format!("{:.4}", e.r),
                status: if (e.r - PAPER_R_STAR).abs() < 5e-4 { "match" } else { "DISCREPANCY" },
            });
            let bound = p.death_rate() / p.immunity_loss() * e.s;
            rows.push(ComparisonRow {
                quantity: "(mu/lambda) S*".into(),
                paper: format!("{PAPER_R_STAR_BOUND}"),
                computed: format!("{bound:.4}"),
                status: if (bound - PAPER_R_STAR_BOUND).abs() < 5e-5 { "match" } else { "DISCREPANCY" },
            });
            rows.push(ComparisonRow {
                quantity: "R* <= (mu/lambda) S*".into(),
                paper: "holds".into(),
                computed: if report.global_conditions.endemic { "holds" } else { "fails" }.into(),
                status: if report.global_conditions.endemic { "match" } else { "DISCREPANCY" },
            });
            (e, "E*")
        }
        _ => {
            let e0 = report.e0;
            rows.push(ComparisonRow {
                quantity: "E0".into(),
                paper: "(8, 0, 0)".into(),
                computed: format!("({}, {}, {})", e0.s, e0.i, e0.r),
                status: if (e0.s, e0.i, e0.r) == (8.0, 0.0, 0.0) { "match" } else { "DISCREPANCY" },
            });
            rows.push(ComparisonRow {
                quantity: "R0 <= 1".into(),
                paper: "holds".into(),
                computed: if report.global_conditions.disease_free { "holds" } else { "fails" }.into(),
                status: if report.global_conditions.disease_free { "match" } else { "DISCREPANCY" },
            });
            (e0, "E0")
        }
    };
    for e in entries {
        let quantity = format!("x(T), alpha = {}", e.alpha.value());
        let paper = format!("-> {label}");
        match &e.outcome {
            Ok((traj, _)) => {
                let x = traj.final_state();
                let dist = x.distance_inf(&target);
                // E0 is judged in absolute terms, E* relative to its size
                let (gap, what) = match figure {
                    Figure::Fig1 => (dist, "abs"),
                    Figure::Fig2 => (dist / target.norm_inf(), "rel"),
                };
                rows.push(ComparisonRow {
                    quantity,
                    paper,
                    computed: format!("{} ({what} dist {gap:.2e})", fmt_state(&x)),
                    status: if gap < 1e-2 { "converged" } else { "not yet within 1e-2" },
                });
            }
            Err(err) => rows.push(ComparisonRow {
                quantity,
                paper,
                computed: format!("failed: {err}"),
                status: "error",
            }),
        }
    }
    rows
}

pub fn format_table(rows: &[ComparisonRow]) -> String {
    let head = ["quantity", "paper", "computed", "status"];
    let cells: Vec<[&str; 4]> = rows
        .iter()
        .map(|r| [r.quantity.as_str(), r.paper.as_str(), r.computed.as_str(), r.status])
        .collect();
    let mut width = head.map(|h| h.chars().count());
    for row in &cells {
        for (w, c) in width.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |row: [&str; 4]| -> String {
        let mut s = String::new();
        for (k, (c, w)) in row.iter().zip(width).enumerate() {
            if k > 0 {
                s.push_str(" | ");
            }
            s.push_str(c);
            s.extend(std::iter::repeat_n(' ', w - c.chars().count()));
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(head);
    out.push_str(&width.map(|w| "-".repeat(w)).join("-+-"));
    out.push('\n');
    for row in cells {
        out.push_str(&line(row));
    }
    out
}

pub fn reproduce(figure: Figure, out: Option<&Path>) -> CliResult<Outcome> {
    let dir = match out {
        Some(d) => d.to_path_buf(),
        None => resolve_output_dir(Path::new("out")),
    };
    let p = figure.params();
    let alphas = FIGURE_ALPHAS.map(|a| FracOrder::new(a).expect("valid order"));
    let template = GridTemplate {
        step_h: FIGURE_STEP,
        horizon: figure.horizon(),
    };
    let report = AnalysisReport::build(&p, &alphas)?;
    let mut w = Writer::create(&dir)?;
    w.write("report.json", &report.to_json())?;
    let prefix = format!("{}_", figure.name());
    let entries = sweep_into(&mut w, &p, FIGURE_X0, &alphas, template, &prefix, true)?;
    let title = match figure {
        Figure::Fig1 => "I(t), disease-free case, α ∈ {0.85, 0.9, 0.95, 1}",
        Figure::Fig2 => "I(t), endemic case, α ∈ {0.85, 0.9, 0.95, 1}",
    };
    w.write(
        &format!("{prefix}infectives.svg"),
        &infectives_overlay(&entries, title.to_string()),
    )?;
    let table = format_table(&comparison_rows(figure, &report, &entries));
    w.write(&format!("{prefix}comparison.txt"), &table)?;
    let mut stdout = table;
    for flag in &report.open_flags {
        writeln!(stdout, "note: {flag}").unwrap();
    }
    if let Some(err) = first_failure(&entries) {
        return Err(err);
    }
    Ok(Outcome {
        written: w.written,
        stdout,
        warnings: Vec::new(),
    })
}
