//! Diagonal rate equations
//! `dp_n/dt = -Gamma_n p_n + sum_{k > n} Gamma_kn p_k`, `Gamma_n = sum_{k < n} Gamma_nk`.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use super::shifts::{decay_rate, EvalOptions};
use crate::atom::{free_space_rate, AtomModel};
use crate::error::{invalid, Error, Result};
use crate::media::HalfSpaceMedium;
use crate::units::UnitsPolicy;

/// Total downward rates `Gamma_nk`, `n > k`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RateTable {
    levels: usize,
    rates: BTreeMap<(usize, usize), f64>,
}

impl RateTable {
    pub fn new(levels: usize) -> Self {
        Self {
            levels,
            rates: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, upper: usize, lower: usize, rate: f64) -> Result<()> {
        if upper <= lower {
            return Err(Error::UpwardTransition { upper, lower });
        }
        if upper >= self.levels {
            return Err(invalid(
                "upper",
                format!("level {upper} out of range for {} levels", self.levels),
            ));
        }
        if !rate.is_finite() {
            return Err(invalid("rate", "must be finite"));
        }
        self.rates.insert((upper, lower), rate);
        Ok(())
    }

    pub fn with(mut self, upper: usize, lower: usize, rate: f64) -> Result<Self> {
        self.set(upper, lower, rate)?;
        Ok(self)
    }

    pub fn get(&self, upper: usize, lower: usize) -> f64 {
        self.rates.get(&(upper, lower)).copied().unwrap_or(0.0)
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    /// `Gamma_n`, the total decay rate out of level `n`.
    pub fn total_out(&self, n: usize) -> f64 {
        self.rates.range((n, 0)..(n, n)).map(|(_, r)| r).sum()
    }

    /// Free-space plus body-induced rates (1/s) of every dipole-allowed
    /// transition of `atom` at height `z` (m).
    pub fn for_atom(atom: &AtomModel, z: f64, medium: &HalfSpaceMedium, opts: &EvalOptions) -> Result<Self> {
        let si = EvalOptions {
            units: UnitsPolicy::Si,
            ..*opts
        };
        let mut table = Self::new(atom.levels());
        for upper in 0..atom.levels() {
            for lower in 0..upper {
                if let Some(t) = atom.transition(upper, lower)? {
                    let rate = free_space_rate(&t, UnitsPolicy::Si) + decay_rate(&t, z, medium, &si)?;
                    if rate < 0.0 {
                        return Err(Error::NegativeRate { level: upper, rate });
                    }
                    table.set(upper, lower, rate)?;
                }
            }
        }
        Ok(table)
    }

    fn generator(&self) -> DMatrix<f64> {
        let n = self.levels;
        let mut m = DMatrix::zeros(n, n);
        for (&(upper, lower), &rate) in &self.rates {
            m[(upper, upper)] -= rate;
            m[(lower, upper)] += rate;
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PopulationState {
    populations: Vec<f64>,
}

impl PopulationState {
    pub fn new(populations: Vec<f64>) -> Result<Self> {
        if populations.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(invalid("populations", "entries must be finite and nonnegative"));
        }
        let sum: f64 = populations.iter().sum();
        if sum > 1.0 + 1e-9 {
            return Err(invalid("populations", format!("sum {sum} exceeds 1")));
        }
        Ok(Self { populations })
    }

    /// All population in `level`.
    pub fn excited(levels: usize, level: usize) -> Result<Self> {
        if level >= levels {
            return Err(invalid("level", format!("{level} out of range for {levels} levels")));
        }
        let mut p = vec![0.0; levels];
        p[level] = 1.0;
        Self::new(p)
    }

    pub fn populations(&self) -> &[f64] {
        &self.populations
    }

    pub fn total(&self) -> f64 {
        self.populations.iter().sum()
    }
}

/// Populations at each time of `t_grid` (in the time unit reciprocal to the
/// rates), starting from `initial` at `t = 0`. The rate equations are linear
/// with constant coefficients, so each point is an exact propagation
/// `exp(M t) p0`.
pub fn evolve_populations(
    atom: &AtomModel,
    rates: &RateTable,
    initial: &PopulationState,
    t_grid: &[f64],
) -> Result<Vec<PopulationState>> {
    let n = atom.levels();
    if rates.levels() != n || initial.populations.len() != n {
        return Err(invalid(
            "levels",
            "atom, rate table and initial state disagree on the level count",
        ));
    }
    for (&(upper, lower), &rate) in &rates.rates {
        if rate < 0.0 {
            return Err(Error::NegativeRate { level: upper, rate });
        }
        debug_assert!(lower < upper);
    }
    if t_grid.iter().any(|t| !(t.is_finite() && *t >= 0.0)) || t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid(
            "t_grid",
            "times must be finite, nonnegative and strictly increasing",
        ));
    }
    let m = rates.generator();
    let p0 = DVector::from_column_slice(&initial.populations);
    Ok(t_grid
        .iter()
        .map(|&t| {
            let p = (&m * t).exp() * &p0;
            // Exact propagation keeps entries nonnegative; clear roundoff below zero.
            PopulationState {
                populations: p.iter().map(|v| v.max(0.0)).collect(),
            }
        })
        .collect())
}
