//! Trace sets for the standard figures.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use cp_nonreciprocal::atomics::{asymptotic, AsymptoticCase, AsymptoticMedium, ChannelSplit, Quantity, Regime};
use cp_nonreciprocal::{EvalOptions, HalfSpaceMedium, Handedness, MirrorSign};
use serde::Serialize;

use crate::config::{QuantityKind, ScanConfig, Spacing};
use crate::scan::{evaluate_grid, format_value, nonreciprocal, to_csv, total, ErrorSummary, PointValues, ScanError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Figure {
    GammaMirrors,
    OmegaMirrors,
    LoglogNres,
    GammaTi,
    OmegaTi,
}

impl Figure {
    pub const ALL: [Figure; 5] = [
        Figure::GammaMirrors,
        Figure::OmegaMirrors,
        Figure::LoglogNres,
        Figure::GammaTi,
        Figure::OmegaTi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Figure::GammaMirrors => "gamma_mirrors",
            Figure::OmegaMirrors => "omega_mirrors",
            Figure::LoglogNres => "loglog_nres",
            Figure::GammaTi => "gamma_ti",
            Figure::OmegaTi => "omega_ti",
        }
    }

    /// Default grid: linear on `[0.05, 8]` for the oscillating curves, four
    /// decades for the log-log plot.
    pub fn grid(self, count: usize) -> ScanConfig {
        let (zeta_min, zeta_max, spacing) = match self {
            Figure::LoglogNres => (1e-2, 1e2, Spacing::Log),
            _ => (0.05, 8.0, Spacing::Linear),
        };
        ScanConfig {
            zeta_min,
            zeta_max,
            count,
            spacing,
            quantities: self.quantities().to_vec(),
            ..ScanConfig::default()
        }
    }

    pub fn quantities(self) -> &'static [QuantityKind] {
        match self {
            Figure::GammaMirrors | Figure::GammaTi => &[QuantityKind::Gamma],
            Figure::OmegaMirrors | Figure::OmegaTi => &[QuantityKind::ShiftRes, QuantityKind::ShiftNres],
            Figure::LoglogNres => &[QuantityKind::ShiftNres],
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownFigure(pub String);

impl fmt::Display for UnknownFigure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = Figure::ALL.iter().map(|x| x.name()).collect();
        write!(f, "unknown figure `{}` (expected one of {})", self.0, names.join(", "))
    }
}

impl std::error::Error for UnknownFigure {}

impl FromStr for Figure {
    type Err = UnknownFigure;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Figure::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| UnknownFigure(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub name: String,
    pub csv: String,
}

#[derive(Debug, Clone)]
pub struct FigureOutput {
    pub figure: Figure,
    pub grid: ScanConfig,
    pub traces: Vec<Trace>,
    pub errors: ErrorSummary,
}

const CONDUCTOR: HalfSpaceMedium = HalfSpaceMedium::PerfectConductor;
const MIRROR_PLUS: HalfSpaceMedium = HalfSpaceMedium::PerfectNonreciprocalMirror { sign: MirrorSign::Plus };
const MIRROR_MINUS: HalfSpaceMedium = HalfSpaceMedium::PerfectNonreciprocalMirror {
    sign: MirrorSign::Minus,
};

/// Permittivity of the insulator in the difference traces.
pub const TI_EPSILON: f64 = 16.0;

fn axion(epsilon: f64, theta: f64) -> HalfSpaceMedium {
    HalfSpaceMedium::axion(epsilon, 1.0, theta).expect("fixed axion parameters are valid")
}

fn split_difference(a: Option<ChannelSplit>, b: Option<ChannelSplit>) -> Option<ChannelSplit> {
    Some(ChannelSplit {
        reciprocal: a?.reciprocal - b?.reciprocal,
        nonreciprocal: a?.nonreciprocal - b?.nonreciprocal,
    })
}

/// Point-wise `a - b`; error bounds add.
pub fn difference(a: &[PointValues], b: &[PointValues]) -> Vec<PointValues> {
    a.iter()
        .zip(b)
        .map(|(p, q)| {
            debug_assert_eq!(p.zeta, q.zeta);
            PointValues {
                zeta: p.zeta,
                gamma: split_difference(p.gamma, q.gamma),
                shift_res: split_difference(p.shift_res, q.shift_res),
                shift_nres: split_difference(p.shift_nres, q.shift_nres),
                gamma_error: p.gamma_error + q.gamma_error,
                shift_res_error: p.shift_res_error + q.shift_res_error,
                shift_nres_error: p.shift_nres_error + q.shift_nres_error,
            }
        })
        .collect()
}

fn asymptote_csv(grid: &[f64], medium: AsymptoticMedium, regime: Regime) -> Result<String, ScanError> {
    let case = AsymptoticCase {
        regime,
        medium,
        quantity: Quantity::NonresonantShift,
    };
    let mut s = format!("zeta,{}\n", QuantityKind::ShiftNres.column());
    for &zeta in grid {
        let v = asymptotic(&case, zeta, Handedness::Plus).map_err(|source| ScanError::Numerical { zeta, source })?;
        s.push_str(&format!("{},{}\n", format_value(zeta), format_value(v)));
    }
    Ok(s)
}

pub fn render(
    figure: Figure,
    count: usize,
    pool: &rayon::ThreadPool,
    opts: &EvalOptions,
) -> Result<FigureOutput, ScanError> {
    let grid_cfg = figure.grid(count);
    grid_cfg.validate().map_err(|e| ScanError::Setup(e.to_string()))?;
    let grid = grid_cfg.grid();
    let quantities = figure.quantities();
    let mut errors = ErrorSummary::default();
    let mut traces = Vec::new();
    let mut eval = |medium: &HalfSpaceMedium| -> Result<Vec<PointValues>, ScanError> {
        let points = evaluate_grid(pool, medium, Handedness::Plus, &grid, quantities, opts)?;
        errors.merge(&ErrorSummary::of(&points));
        Ok(points)
    };
    let push = |traces: &mut Vec<Trace>, name: &str, points: &[PointValues], pick: fn(ChannelSplit) -> f64| {
        traces.push(Trace {
            name: name.to_string(),
            csv: to_csv(points, quantities, pick),
        })
    };

    match figure {
        Figure::GammaMirrors | Figure::OmegaMirrors => {
            for (name, medium) in [
                ("conductor", CONDUCTOR),
                ("mirror_plus", MIRROR_PLUS),
                ("mirror_minus", MIRROR_MINUS),
            ] {
                push(&mut traces, name, &eval(&medium)?, total);
            }
        }
        Figure::LoglogNres => {
            push(&mut traces, "conductor", &eval(&CONDUCTOR)?, total);
            push(&mut traces, "mirror_minus", &eval(&MIRROR_MINUS)?, total);
            for (name, medium, regime) in [
                (
                    "conductor_retarded",
                    AsymptoticMedium::PerfectConductor,
                    Regime::Retarded,
                ),
                (
                    "conductor_nonretarded",
                    AsymptoticMedium::PerfectConductor,
                    Regime::Nonretarded,
                ),
                (
                    "mirror_minus_retarded",
                    AsymptoticMedium::NonreciprocalMirror(MirrorSign::Minus),
                    Regime::Retarded,
                ),
                (
                    "mirror_minus_nonretarded",
                    AsymptoticMedium::NonreciprocalMirror(MirrorSign::Minus),
                    Regime::Nonretarded,
                ),
            ] {
                traces.push(Trace {
                    name: name.to_string(),
                    csv: asymptote_csv(&grid, medium, regime)?,
                });
            }
        }
        Figure::GammaTi | Figure::OmegaTi => {
            let reference = eval(&axion(TI_EPSILON, 0.0))?;
            for (label, theta) in [("theta_pi", PI), ("theta_minus_pi", -PI)] {
                let pure = eval(&axion(1.0, theta))?;
                push(&mut traces, &format!("axion_{label}"), &pure, total);
                push(
                    &mut traces,
                    &format!("axion_{label}_nonreciprocal"),
                    &pure,
                    nonreciprocal,
                );
                let diff = difference(&eval(&axion(TI_EPSILON, theta))?, &reference);
                push(&mut traces, &format!("eps16_difference_{label}"), &diff, total);
                push(
                    &mut traces,
                    &format!("eps16_difference_{label}_nonreciprocal"),
                    &diff,
                    nonreciprocal,
                );
            }
        }
    }

    Ok(FigureOutput {
        figure,
        grid: grid_cfg,
        traces,
        errors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for f in Figure::ALL {
            assert_eq!(f.name().parse::<Figure>().unwrap(), f);
        }
        assert!("fig7".parse::<Figure>().is_err());
    }
}
