//! Physical constants and the scaled/SI units policy.
//!
//! Internally every quantity is dimensionless: frequencies are measured in
//! units of the transition frequency, lengths in units of `c / omega`, and
//! rates and shifts in units of the free-space decay rate of that transition.
//! SI values only appear at the edges, through [`Scale`].

use crate::error::{invalid, Result};

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Vacuum permeability (N/A^2), CODATA 2018.
pub const VACUUM_PERMEABILITY: f64 = 1.256_637_062_12e-6;
/// Vacuum permittivity (F/m), CODATA 2018.
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;
/// Reduced Planck constant (J s).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Fine-structure constant, CODATA 2018.
pub const FINE_STRUCTURE: f64 = 7.297_352_569_3e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UnitsPolicy {
    /// Frequencies in units of the transition frequency, lengths in `c/omega`,
    /// rates and shifts in units of the free-space rate.
    #[default]
    Scaled,
    /// Hertz (angular, rad/s), meters, C m.
    Si,
}

/// Conversion factors between the scaled units of one transition and SI.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scale {
    /// Angular frequency unit (rad/s).
    pub frequency: f64,
    /// Length unit `c / omega` (m).
    pub length: f64,
    /// Rate unit, the free-space decay rate (1/s).
    pub rate: f64,
}

impl Scale {
    /// Builds the scale from an angular frequency (rad/s) and a free-space rate (1/s).
    pub fn new(frequency: f64, rate: f64) -> Result<Self> {
        if !(frequency.is_finite() && frequency > 0.0) {
            return Err(invalid("frequency", format!("expected > 0, got {frequency}")));
        }
        if !(rate.is_finite() && rate > 0.0) {
            return Err(invalid("rate", format!("expected > 0, got {rate}")));
        }
        Ok(Self {
            frequency,
            length: SPEED_OF_LIGHT / frequency,
            rate,
        })
    }

    pub fn length_to_si(&self, scaled: f64) -> f64 {
        scaled * self.length
    }

    pub fn length_from_si(&self, meters: f64) -> f64 {
        meters / self.length
    }

    pub fn frequency_to_si(&self, scaled: f64) -> f64 {
        scaled * self.frequency
    }

    pub fn frequency_from_si(&self, si: f64) -> f64 {
        si / self.frequency
    }

    pub fn rate_to_si(&self, scaled: f64) -> f64 {
        scaled * self.rate
    }

    pub fn rate_from_si(&self, si: f64) -> f64 {
        si / self.rate
    }

    /// Ratio of the rate unit to the frequency unit, the dimensionless
    /// coupling strength entering the self-consistent frequency equation.
    pub fn coupling(&self) -> f64 {
        self.rate / self.frequency
    }
}
