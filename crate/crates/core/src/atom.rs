//! Atomic transitions, dipole moments and the free-space reference rate.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::units::{Scale, UnitsPolicy, HBAR, SPEED_OF_LIGHT, VACUUM_PERMEABILITY};

/// Complex Cartesian dipole vector (x, y, z).
pub type Dipole = [Complex64; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Handedness {
    Plus,
    Minus,
}

impl Handedness {
    pub fn flipped(self) -> Self {
        match self {
            Handedness::Plus => Handedness::Minus,
            Handedness::Minus => Handedness::Plus,
        }
    }
}

/// `(d / sqrt 2) (1, +-i, 0)`. `Plus` is the downward matrix element of a
/// sigma+ transition, `Minus` its conjugate.
pub fn circular_dipole(magnitude: f64, handedness: Handedness) -> Dipole {
    let a = magnitude * FRAC_1_SQRT_2;
    let y = match handedness {
        Handedness::Plus => Complex64::new(0.0, a),
        Handedness::Minus => Complex64::new(0.0, -a),
    };
    [Complex64::new(a, 0.0), y, Complex64::new(0.0, 0.0)]
}

pub fn conjugate(d: &Dipole) -> Dipole {
    [d[0].conj(), d[1].conj(), d[2].conj()]
}

/// `d . conj(d)`.
pub fn norm_sqr(d: &Dipole) -> f64 {
    d.iter().map(|c| c.norm_sqr()).sum()
}

/// One downward transition `upper -> lower` with its matrix element
/// `d_{upper,lower}` (C m) and angular frequency (rad/s).
#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    dipole: Dipole,
    frequency: f64,
    upper: usize,
    lower: usize,
}

impl Transition {
    pub fn new(dipole: Dipole, frequency: f64) -> Result<Self> {
        Self::between(dipole, frequency, 1, 0)
    }

    pub fn between(dipole: Dipole, frequency: f64, upper: usize, lower: usize) -> Result<Self> {
        if !(frequency.is_finite() && frequency > 0.0) {
            return Err(Error::NonPositiveFrequency(frequency));
        }
        let n2 = norm_sqr(&dipole);
        if !(n2.is_finite() && n2 > 0.0) {
            return Err(invalid("dipole", "needs at least one nonzero finite component"));
        }
        Ok(Self {
            dipole,
            frequency,
            upper,
            lower,
        })
    }

    pub fn dipole(&self) -> &Dipole {
        &self.dipole
    }

    pub fn frequency(&self) -> f64 {
        self.frequency
    }

    pub fn levels(&self) -> (usize, usize) {
        (self.upper, self.lower)
    }

    /// Unit polarization vector `d / |d|`.
    pub fn polarization(&self) -> Dipole {
        let inv = 1.0 / norm_sqr(&self.dipole).sqrt();
        [self.dipole[0] * inv, self.dipole[1] * inv, self.dipole[2] * inv]
    }

    /// Same transition at a different frequency (used by the self-consistent loop).
    pub fn with_frequency(&self, frequency: f64) -> Result<Self> {
        Self::between(self.dipole, frequency, self.upper, self.lower)
    }

    /// Scaled units anchored to this transition.
    pub fn scale(&self) -> Scale {
        Scale::new(self.frequency, free_space_rate(self, UnitsPolicy::Si))
            .expect("validated transition has positive rate")
    }
}

/// Vacuum spontaneous emission rate `mu0 omega^3 |d|^2 / (3 pi hbar c)`.
/// In scaled units this is the rate unit itself, hence 1.
pub fn free_space_rate(transition: &Transition, units: UnitsPolicy) -> f64 {
    match units {
        UnitsPolicy::Scaled => 1.0,
        UnitsPolicy::Si => {
            let w = transition.frequency;
            VACUUM_PERMEABILITY * w * w * w * norm_sqr(&transition.dipole) / (3.0 * PI * HBAR * SPEED_OF_LIGHT)
        }
    }
}

/// Level energies (J) and dipole matrix elements of a multilevel atom.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomModel {
    energies: Vec<f64>,
    dipoles: BTreeMap<(usize, usize), Dipole>,
}

impl AtomModel {
    /// `dipoles` lists `d_mn` for `m > n`; the conjugate entries are filled in.
    pub fn new(energies: Vec<f64>, dipoles: impl IntoIterator<Item = ((usize, usize), Dipole)>) -> Result<Self> {
        if energies.is_empty() {
            return Err(invalid("energies", "at least one level required"));
        }
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(invalid("energies", "must be finite"));
        }
        let mut map = BTreeMap::new();
        for ((m, n), d) in dipoles {
            if m >= energies.len() || n >= energies.len() {
                return Err(invalid("dipoles", format!("level index ({m}, {n}) out of range")));
            }
            if m == n {
                if norm_sqr(&d) != 0.0 {
                    return Err(invalid("dipoles", format!("diagonal element d_{m}{m} must vanish")));
                }
                continue;
            }
            if let Some(existing) = map.get(&(m, n)) {
                if existing != &d {
                    return Err(invalid("dipoles", format!("conflicting entries for d_{m}{n}")));
                }
            }
            let conj = conjugate(&d);
            if let Some(existing) = map.get(&(n, m)) {
                if existing != &conj {
                    return Err(invalid("dipoles", format!("d_{n}{m} is not the conjugate of d_{m}{n}")));
                }
            }
            map.insert((m, n), d);
            map.insert((n, m), conj);
        }
        Ok(Self { energies, dipoles: map })
    }

    pub fn levels(&self) -> usize {
        self.energies.len()
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// `d_mn`, zero when the pair carries no dipole.
    pub fn dipole(&self, m: usize, n: usize) -> Dipole {
        self.dipoles
            .get(&(m, n))
            .copied()
            .unwrap_or([Complex64::new(0.0, 0.0); 3])
    }

    /// The downward transition `upper -> lower`, if it carries a dipole.
    pub fn transition(&self, upper: usize, lower: usize) -> Result<Option<Transition>> {
        let n = self.levels();
        if upper >= n || lower >= n {
            return Err(invalid("level", format!("index out of range for {n} levels")));
        }
        let gap = self.energies[upper] - self.energies[lower];
        if gap.is_nan() || gap <= 0.0 {
            return Err(Error::UpwardTransition { upper, lower });
        }
        let d = self.dipole(upper, lower);
        if norm_sqr(&d) == 0.0 {
            return Ok(None);
        }
        Transition::between(d, gap / HBAR, upper, lower).map(Some)
    }
}
