//! Closed-form retarded and nonretarded limits, in units of the free-space
//! rate, as functions of the dimensionless height `zeta = omega z / c`.

use std::f64::consts::PI;

use crate::atom::Handedness;
use crate::error::{invalid, Error, Result};
use crate::media::{delta, MirrorSign};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `zeta >> 1`.
    Retarded,
    /// `zeta << 1`.
    Nonretarded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantity {
    Rate,
    ResonantShift,
    NonresonantShift,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AsymptoticMedium {
    PerfectConductor,
    NonreciprocalMirror(MirrorSign),
    /// Axion medium with `eps = mu = 1`.
    PureAxion {
        theta: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticCase {
    pub regime: Regime,
    pub medium: AsymptoticMedium,
    pub quantity: Quantity,
}

fn handedness_sign(h: Handedness) -> f64 {
    match h {
        Handedness::Plus => 1.0,
        Handedness::Minus => -1.0,
    }
}

/// Limits of the mirror with `r_sp = r_ps = -1` for a `Plus` dipole.
fn mirror_minus(regime: Regime, quantity: Quantity, zeta: f64) -> f64 {
    let x = 2.0 * zeta;
    match (regime, quantity) {
        (Regime::Retarded, Quantity::Rate) => 0.75 * x.cos() / zeta,
        (Regime::Retarded, Quantity::ResonantShift) => 0.375 * x.sin() / zeta,
        (Regime::Retarded, Quantity::NonresonantShift) => 3.0 / (16.0 * PI * zeta.powi(5)),
        (Regime::Nonretarded, Quantity::Rate) => 0.0,
        (Regime::Nonretarded, Quantity::ResonantShift) => 3.0 / (16.0 * zeta * zeta),
        (Regime::Nonretarded, Quantity::NonresonantShift) => 3.0 / (16.0 * PI * zeta.powi(3)),
    }
}

fn conductor(regime: Regime, quantity: Quantity, zeta: f64) -> f64 {
    let x = 2.0 * zeta;
    match (regime, quantity) {
        (Regime::Retarded, Quantity::Rate) => -0.75 * x.sin() / zeta,
        (Regime::Retarded, Quantity::ResonantShift) => 0.375 * x.cos() / zeta,
        (Regime::Retarded, Quantity::NonresonantShift) => 3.0 / (16.0 * PI * zeta.powi(4)),
        (Regime::Nonretarded, Quantity::Rate) => -1.0,
        (Regime::Nonretarded, Quantity::ResonantShift) => -3.0 / (32.0 * zeta.powi(3)),
        (Regime::Nonretarded, Quantity::NonresonantShift) => 3.0 / (64.0 * zeta.powi(3)),
    }
}

fn check_zeta(zeta: f64) -> Result<()> {
    if zeta.is_finite() && zeta > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveHeight(zeta))
    }
}

/// Limiting law of `case` at height `zeta`.
pub fn asymptotic(case: &AsymptoticCase, zeta: f64, handedness: Handedness) -> Result<f64> {
    check_zeta(zeta)?;
    let h = handedness_sign(handedness);
    let (regime, quantity) = (case.regime, case.quantity);
    match case.medium {
        AsymptoticMedium::PerfectConductor => Ok(conductor(regime, quantity, zeta)),
        AsymptoticMedium::NonreciprocalMirror(sign) => Ok(-sign.value() * h * mirror_minus(regime, quantity, zeta)),
        AsymptoticMedium::PureAxion { theta } => {
            let d = delta(0.0, theta);
            match (regime, quantity) {
                (Regime::Retarded, Quantity::NonresonantShift) => Err(Error::Unsupported(
                    "retarded nonresonant shift of the pure axion medium".into(),
                )),
                (Regime::Nonretarded, Quantity::Rate) => Ok(-3.0 / 16.0 * d / (zeta * zeta) * h),
                _ => Ok(0.5 * d * h * mirror_minus(regime, quantity, zeta)),
            }
        }
    }
}

/// Limit of (axion medium with coupling `theta`) minus (same medium without),
/// for permittivity `eps`.
pub fn axion_difference(
    quantity: Quantity,
    regime: Regime,
    eps: f64,
    theta: f64,
    zeta: f64,
    handedness: Handedness,
) -> Result<f64> {
    check_zeta(zeta)?;
    if !(eps.is_finite() && eps > 0.0) {
        return Err(invalid("permittivity", format!("expected > 0, got {eps}")));
    }
    let d = delta(0.0, theta);
    let h = handedness_sign(handedness);
    match regime {
        Regime::Retarded => {
            if quantity == Quantity::NonresonantShift {
                return Err(Error::Unsupported("retarded nonresonant axion difference".into()));
            }
            let n = eps.sqrt();
            let factor = 2.0 * d / ((1.0 + n) * (1.0 + n));
            Ok(factor * h * mirror_minus(regime, quantity, zeta))
        }
        Regime::Nonretarded => {
            let f = d / (eps + 1.0);
            Ok(h * match quantity {
                Quantity::Rate => -0.375 * f / (zeta * zeta),
                Quantity::ResonantShift => 0.1875 * f / (zeta * zeta),
                Quantity::NonresonantShift => 3.0 * f / (16.0 * PI * zeta.powi(3)),
            })
        }
    }
}
