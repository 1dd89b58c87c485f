//! Grid evaluation and CSV emission.

use std::fmt::Write as _;

use cp_nonreciprocal::atomics::{nonresonant_channels, resonant_quantities, ChannelSplit};
use cp_nonreciprocal::{circular_dipole, EvalOptions, HalfSpaceMedium, Handedness, Transition};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::config::{QuantityKind, ScanConfig};

pub const THREADS_ENV: &str = "CPSHIFT_THREADS";

#[derive(Debug, Error)]
pub enum ScanError {
    #[error("numerical failure at zeta = {zeta:e}: {source}")]
    Numerical {
        zeta: f64,
        #[source]
        source: cp_nonreciprocal::Error,
    },
    #[error("{0}")]
    Setup(String),
}

/// Values at one grid point in free-space rate units, split by channel.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PointValues {
    pub zeta: f64,
    pub gamma: Option<ChannelSplit>,
    pub shift_res: Option<ChannelSplit>,
    pub shift_nres: Option<ChannelSplit>,
    pub gamma_error: f64,
    pub shift_res_error: f64,
    pub shift_nres_error: f64,
}

impl PointValues {
    pub fn get(&self, q: QuantityKind) -> Option<ChannelSplit> {
        match q {
            QuantityKind::Gamma => self.gamma,
            QuantityKind::ShiftRes => self.shift_res,
            QuantityKind::ShiftNres => self.shift_nres,
        }
    }
}

/// Largest quadrature error bound per quantity over a grid.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct ErrorSummary {
    pub max_gamma_error: f64,
    pub max_shift_res_error: f64,
    pub max_shift_nres_error: f64,
    pub points: usize,
}

impl ErrorSummary {
    pub fn of(points: &[PointValues]) -> Self {
        let mut s = ErrorSummary {
            points: points.len(),
            ..Self::default()
        };
        for p in points {
            s.max_gamma_error = s.max_gamma_error.max(p.gamma_error);
            s.max_shift_res_error = s.max_shift_res_error.max(p.shift_res_error);
            s.max_shift_nres_error = s.max_shift_nres_error.max(p.shift_nres_error);
        }
        s
    }

    pub fn merge(&mut self, other: &ErrorSummary) {
        self.max_gamma_error = self.max_gamma_error.max(other.max_gamma_error);
        self.max_shift_res_error = self.max_shift_res_error.max(other.max_shift_res_error);
        self.max_shift_nres_error = self.max_shift_nres_error.max(other.max_shift_nres_error);
        self.points += other.points;
    }
}

pub fn transition(handedness: Handedness) -> Transition {
    Transition::new(circular_dipole(1.0, handedness), 1.0).expect("unit transition is valid")
}

pub fn evaluate_point(
    medium: &HalfSpaceMedium,
    handedness: Handedness,
    zeta: f64,
    quantities: &[QuantityKind],
    opts: &EvalOptions,
) -> Result<PointValues, ScanError> {
    let t = transition(handedness);
    let wrap = |source| ScanError::Numerical { zeta, source };
    let mut out = PointValues {
        zeta,
        ..PointValues::default()
    };
    let wants = |q| quantities.contains(&q);
    if wants(QuantityKind::Gamma) || wants(QuantityKind::ShiftRes) {
        let r = resonant_quantities(&t, zeta, medium, opts).map_err(wrap)?;
        if wants(QuantityKind::Gamma) {
            out.gamma = Some(r.rate);
            out.gamma_error = r.rate_error;
        }
        if wants(QuantityKind::ShiftRes) {
            out.shift_res = Some(r.shift);
            out.shift_res_error = r.shift_error;
        }
    }
    if wants(QuantityKind::ShiftNres) {
        let n = nonresonant_channels(&t, zeta, medium, opts).map_err(wrap)?;
        out.shift_nres = Some(n.split());
        out.shift_nres_error = n.reciprocal.error + n.nonreciprocal.error;
    }
    Ok(out)
}

/// Worker count from the environment, if set.
pub fn thread_override() -> Result<Option<usize>, ScanError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(ScanError::Setup(format!(
                "{THREADS_ENV} must be a positive integer, got `{v}`"
            ))),
        },
    }
}

/// Thread pool honoring the environment override.
pub fn pool() -> Result<rayon::ThreadPool, ScanError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_override()? {
        b = b.num_threads(n);
    }
    b.build().map_err(|e| ScanError::Setup(e.to_string()))
}

/// Evaluates every grid point in parallel; results keep grid order. On
/// failure the error of the smallest failing `zeta` is returned.
pub fn evaluate_grid(
    pool: &rayon::ThreadPool,
    medium: &HalfSpaceMedium,
    handedness: Handedness,
    grid: &[f64],
    quantities: &[QuantityKind],
    opts: &EvalOptions,
) -> Result<Vec<PointValues>, ScanError> {
    pool.install(|| {
        grid.par_iter()
            .map(|&zeta| evaluate_point(medium, handedness, zeta, quantities, opts))
            .collect::<Vec<_>>()
    })
    .into_iter()
    .collect()
}

pub fn format_value(x: f64) -> String {
    format!("{x:.11e}")
}

/// CSV with one row per point; `pick` selects the channel combination written.
pub fn to_csv(points: &[PointValues], quantities: &[QuantityKind], pick: impl Fn(ChannelSplit) -> f64) -> String {
    let mut s = String::from("zeta");
    for q in quantities {
        s.push(',');
        s.push_str(q.column());
    }
    s.push('\n');
    for p in points {
        s.push_str(&format_value(p.zeta));
        for &q in quantities {
            let v = p.get(q).map(&pick).unwrap_or(f64::NAN);
            write!(s, ",{}", format_value(v)).expect("writing to a String");
        }
        s.push('\n');
    }
    s
}

pub fn total(c: ChannelSplit) -> f64 {
    c.total()
}

pub fn nonreciprocal(c: ChannelSplit) -> f64 {
    c.nonreciprocal
}

#[derive(Debug, Clone)]
pub struct ScanResult {
    pub points: Vec<PointValues>,
    pub csv: String,
    pub errors: ErrorSummary,
}

pub fn run_scan(config: &ScanConfig, pool: &rayon::ThreadPool, opts: &EvalOptions) -> Result<ScanResult, ScanError> {
    config.validate().map_err(|e| ScanError::Setup(e.to_string()))?;
    let medium = config.medium.build().map_err(|e| ScanError::Setup(e.to_string()))?;
    let grid = config.grid();
    let points = evaluate_grid(
        pool,
        &medium,
        config.handedness.handedness(),
        &grid,
        &config.quantities,
        opts,
    )?;
    let csv = to_csv(&points, &config.quantities, total);
    let errors = ErrorSummary::of(&points);
    Ok(ScanResult { points, csv, errors })
}
