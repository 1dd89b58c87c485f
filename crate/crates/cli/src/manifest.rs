//! Machine-readable record written next to every run's output.

use std::path::Path;

use cp_nonreciprocal::EvalOptions;
use serde::Serialize;

use crate::scan::ErrorSummary;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub wavenumber_rel_tol: f64,
    pub wavenumber_abs_tol: f64,
    pub frequency_rel_tol: f64,
    pub frequency_abs_tol: f64,
    pub max_intervals: usize,
}

impl From<&EvalOptions> for Tolerances {
    fn from(o: &EvalOptions) -> Self {
        Self {
            wavenumber_rel_tol: o.greens.rel_tol,
            wavenumber_abs_tol: o.greens.abs_tol,
            frequency_rel_tol: o.frequency_integral.rel_tol,
            frequency_abs_tol: o.frequency_integral.abs_tol,
            max_intervals: o.greens.max_intervals,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    /// Echo of the parsed configuration, or of the figure grid.
    pub config: serde_json::Value,
    pub tolerances: Tolerances,
    pub threads: usize,
    pub wall_time_seconds: f64,
    pub error_estimates: Option<ErrorSummary>,
    pub outputs: Vec<String>,
    pub status: &'static str,
    pub error: Option<String>,
}

impl RunManifest {
    pub fn new(command: impl Into<String>, opts: &EvalOptions) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.into(),
            config: serde_json::Value::Null,
            tolerances: opts.into(),
            threads: 0,
            wall_time_seconds: 0.0,
            error_estimates: None,
            outputs: Vec::new(),
            status: "ok",
            error: None,
        }
    }

    pub fn fail(&mut self, message: String) {
        self.status = "error";
        self.error = Some(message);
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        let text = serde_json::to_string_pretty(self).map_err(std::io::Error::other)?;
        std::fs::write(path, text + "\n")
    }
}
