//! Machine-readable run reports.
//!
//! Reports are plain data: a schema version, the engine version, the run
//! parameters, one line per check with its residual and tolerance, and the
//! verdict text lines.  Serialization order is the declaration order below
//! and never depends on runtime state, so identical runs produce
//! byte-identical JSON.

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Report schema version.
pub const SCHEMA: u32 = 1;

/// Engine version string baked in at compile time.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// One checked quantity.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CheckLine {
    /// Stable check name.
    pub name: String,
    /// Max residual over the samples.
    pub max_residual: f64,
    /// Tolerance the residual was compared against.
    pub tolerance: f64,
    /// `max_residual < tolerance`.
    pub pass: bool,
    /// Worst sample point, present when the check failed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_point: Option<[f64; 3]>,
}

impl CheckLine {
    /// Build a line, recording the worst point only on failure.
    pub fn new(name: impl Into<String>, max_residual: f64, tolerance: f64, worst: [f64; 3]) -> CheckLine {
        let pass = max_residual < tolerance;
        CheckLine {
            name: name.into(),
            max_residual,
            tolerance,
            pass,
            worst_point: if pass { None } else { Some(worst) },
        }
    }

    /// Build a line for a sample-free check.
    pub fn scalar(name: impl Into<String>, max_residual: f64, tolerance: f64) -> CheckLine {
        let pass = max_residual < tolerance;
        CheckLine {
            name: name.into(),
            max_residual,
            tolerance,
            pass,
            worst_point: None,
        }
    }
}

/// A full run report.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Report {
    /// Schema version (always [`SCHEMA`] for reports this engine writes).
    pub schema: u32,
    /// Engine version that produced the report.
    pub engine_version: String,
    /// Command that produced the report (`check`, `classify`, `gallery`,
    /// `model`).
    pub command: String,
    /// Manifold name, absent for manifold-free runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub manifold: Option<String>,
    /// Sample seed.
    pub seed: u64,
    /// Sample count (or draw count for model runs).
    pub points: usize,
    /// Check lines in a stable order.
    pub checks: Vec<CheckLine>,
    /// Verdict and note lines.
    pub verdicts: Vec<String>,
    /// Conjunction of all check passes.
    pub pass: bool,
}

impl Report {
    /// Assemble a report, computing the `pass` flag.
    pub fn new(
        command: &str,
        manifold: Option<String>,
        seed: u64,
        points: usize,
        checks: Vec<CheckLine>,
        verdicts: Vec<String>,
    ) -> Report {
        let pass = checks.iter().all(|c| c.pass);
        Report {
            schema: SCHEMA,
            engine_version: ENGINE_VERSION.to_string(),
            command: command.to_string(),
            manifold,
            seed,
            points,
            checks,
            verdicts,
            pass,
        }
    }

    /// Deterministic pretty JSON with a trailing newline.
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    /// Parse a report from JSON.
    pub fn from_json(text: &str) -> Result<Report> {
        Ok(serde_json::from_str(text)?)
    }

    /// Human-readable rendering: one line per check, then the verdicts.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match &self.manifold {
            Some(name) => out.push_str(&format!(
                "{} `{}` (engine {}, seed {}, {} points)\n",
                self.command, name, self.engine_version, self.seed, self.points
            )),
            None => out.push_str(&format!(
                "{} (engine {}, seed {}, {} draws)\n",
                self.command, self.engine_version, self.seed, self.points
            )),
        }
        for c in &self.checks {
            let mark = if c.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "[{mark}] {:<44} max residual {:>12.4e}  (tol {:.1e})",
                c.name, c.max_residual, c.tolerance
            ));
            if let Some(p) = c.worst_point {
                out.push_str(&format!("  worst at ({:.4}, {:.4}, {:.4})", p[0], p[1], p[2]));
            }
            out.push('\n');
        }
        for v in &self.verdicts {
            out.push_str(&format!("note: {v}\n"));
        }
        out.push_str(if self.pass { "overall: PASS\n" } else { "overall: FAIL\n" });
        out
    }
}
