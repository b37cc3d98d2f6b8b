//! Trajectory CSV: header `t,S,I,R,N,lyapunov`, LF line endings.
//!
//! Numbers use Rust's shortest round-trip formatting, so parsing a field
//! back gives the in-memory `f64` bit for bit. The Lyapunov column is left
//! empty where the function is undefined (e.g. I = 0 for L*).

use std::fmt::Write as _;

use caputo_sirs::engine::Trajectory;

pub const HEADER: &str = "t,S,I,R,N,lyapunov";

pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut out = String::with_capacity(64 * (traj.len() + 1));
    out.push_str(HEADER);
    out.push('\n');
    for (k, (x, t)) in traj.states.iter().zip(&traj.times).enumerate() {
        let diag = traj.diagnostics.get(k);
        let n = diag.map_or(x.total(), |d| d.total);
        write!(out, "{t},{},{},{},{n},", x.s, x.i, x.r).unwrap();
        if let Some(l) = diag.and_then(|d| d.lyapunov) {
            write!(out, "{l}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// One parsed CSV row; `lyapunov` is `None` for an empty field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Row {
    pub t: f64,
    pub s: f64,
    pub i: f64,
    pub r: f64,
    pub n: f64,
    pub lyapunov: Option<f64>,
}

pub fn parse_trajectory_csv(text: &str) -> Result<Vec<Row>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(HEADER) => {}
        other => return Err(format!("unexpected header {other:?}")),
    }
    lines
        .enumerate()
        .map(|(k, line)| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 6 {
                return Err(format!("row {}: expected 6 fields, got {}", k + 1, f.len()));
            }
            let num = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| format!("row {}: {s:?}: {e}", k + 1))
            };
            Ok(Row {
                t: num(f[0])?,
                s: num(f[1])?,
                i: num(f[2])?,
                r: num(f[3])?,
                n: num(f[4])?,
                lyapunov: if f[5].is_empty() { None } else { Some(num(f[5])?) },
            })
        })
        .collect()
}
