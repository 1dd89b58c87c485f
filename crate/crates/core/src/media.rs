//! Reflection coefficients of the lower half-space.
//!
//! All wavenumbers are expressed with `c = 1`, so a frequency doubles as the
//! vacuum wavenumber. The upper half-space is vacuum.

use std::f64::consts::PI;
use std::ops::Index;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::units::FINE_STRUCTURE;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarization {
    S,
    P,
}

impl Polarization {
    pub const ALL: [Polarization; 2] = [Polarization::S, Polarization::P];

    fn index(self) -> usize {
        match self {
            Polarization::S => 0,
            Polarization::P => 1,
        }
    }
}

/// `r[out][in]` over polarizations `{s, p}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionMatrix {
    entries: [[Complex64; 2]; 2],
}

impl ReflectionMatrix {
    pub fn new(ss: Complex64, sp: Complex64, ps: Complex64, pp: Complex64) -> Self {
        Self {
            entries: [[ss, sp], [ps, pp]],
        }
    }

    pub fn real(ss: f64, sp: f64, ps: f64, pp: f64) -> Self {
        let c = |x| Complex64::new(x, 0.0);
        Self::new(c(ss), c(sp), c(ps), c(pp))
    }

    pub fn zero() -> Self {
        Self::real(0.0, 0.0, 0.0, 0.0)
    }

    pub fn ss(&self) -> Complex64 {
        self.entries[0][0]
    }

    pub fn sp(&self) -> Complex64 {
        self.entries[0][1]
    }

    pub fn ps(&self) -> Complex64 {
        self.entries[1][0]
    }

    pub fn pp(&self) -> Complex64 {
        self.entries[1][1]
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Reflected power fraction `sum_out |r[out][incoming]|^2`.
    pub fn reflectance(&self, incoming: Polarization) -> f64 {
        let j = incoming.index();
        self.entries[0][j].norm_sqr() + self.entries[1][j].norm_sqr()
    }
}

impl Index<(Polarization, Polarization)> for ReflectionMatrix {
    type Output = Complex64;

    fn index(&self, (out, incoming): (Polarization, Polarization)) -> &Complex64 {
        &self.entries[out.index()][incoming.index()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MirrorSign {
    Plus,
    Minus,
}

impl MirrorSign {
    pub fn value(self) -> f64 {
        match self {
            MirrorSign::Plus => 1.0,
            MirrorSign::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            MirrorSign::Plus => MirrorSign::Minus,
            MirrorSign::Minus => MirrorSign::Plus,
        }
    }
}

/// Nondispersive magnetodielectric with an axion coupling, below vacuum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxionMedium {
    permittivity: f64,
    permeability: f64,
    theta: f64,
    delta: f64,
}

impl AxionMedium {
    pub fn new(permittivity: f64, permeability: f64, theta: f64) -> Result<Self> {
        if !(permittivity.is_finite() && permittivity > 0.0) {
            return Err(invalid("permittivity", format!("expected > 0, got {permittivity}")));
        }
        if !(permeability.is_finite() && permeability > 0.0) {
            return Err(invalid("permeability", format!("expected > 0, got {permeability}")));
        }
        if !theta.is_finite() {
            return Err(invalid("theta", "must be finite"));
        }
        Ok(Self {
            permittivity,
            permeability,
            theta,
            delta: delta(0.0, theta),
        })
    }

    pub fn permittivity(&self) -> f64 {
        self.permittivity
    }

    pub fn permeability(&self) -> f64 {
        self.permeability
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `alpha (theta - 0) / pi`.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Same medium with the axion coupling reversed.
    pub fn time_reversed(&self) -> Self {
        Self::new(self.permittivity, self.permeability, -self.theta).expect("valid by construction")
    }

    /// Same medium without axion coupling.
    pub fn without_axion(&self) -> Self {
        Self::new(self.permittivity, self.permeability, 0.0).expect("valid by construction")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HalfSpaceMedium {
    PerfectConductor,
    /// `r_ss = r_pp = 0`, `r_sp = r_ps = sign`.
    PerfectNonreciprocalMirror {
        sign: MirrorSign,
    },
    Axion(AxionMedium),
}

impl HalfSpaceMedium {
    pub fn axion(permittivity: f64, permeability: f64, theta: f64) -> Result<Self> {
        AxionMedium::new(permittivity, permeability, theta).map(HalfSpaceMedium::Axion)
    }

    /// Reflection is independent of frequency and wavevector.
    pub fn is_ideal(&self) -> bool {
        !matches!(self, HalfSpaceMedium::Axion(_))
    }

    pub fn is_reciprocal(&self) -> bool {
        match self {
            HalfSpaceMedium::PerfectConductor => true,
            HalfSpaceMedium::PerfectNonreciprocalMirror { .. } => false,
            HalfSpaceMedium::Axion(m) => m.delta == 0.0,
        }
    }

    /// Medium with the opposite internal sense of time.
    pub fn time_reversed(&self) -> Self {
        match self {
            HalfSpaceMedium::PerfectConductor => HalfSpaceMedium::PerfectConductor,
            HalfSpaceMedium::PerfectNonreciprocalMirror { sign } => {
                HalfSpaceMedium::PerfectNonreciprocalMirror { sign: sign.flipped() }
            }
            HalfSpaceMedium::Axion(m) => HalfSpaceMedium::Axion(m.time_reversed()),
        }
    }
}

/// Anything that yields a reflection matrix at a given vacuum wavenumber `k`
/// and vacuum perpendicular wavenumber `k1` (`k_par^2 = k^2 - k1^2`).
pub trait ReflectionModel: Sync {
    fn reflection_at(&self, k: Complex64, k1: Complex64) -> Result<ReflectionMatrix>;

    /// Values of `k1^2` at which the coefficients have square-root branch points.
    fn branch_points(&self, _k: Complex64) -> Vec<Complex64> {
        Vec::new()
    }
}

/// A constant matrix, independent of `(omega, k_par)`.
impl ReflectionModel for ReflectionMatrix {
    fn reflection_at(&self, _k: Complex64, _k1: Complex64) -> Result<ReflectionMatrix> {
        Ok(*self)
    }
}

impl ReflectionModel for HalfSpaceMedium {
    fn reflection_at(&self, k: Complex64, k1: Complex64) -> Result<ReflectionMatrix> {
        match self {
            HalfSpaceMedium::PerfectConductor => Ok(ReflectionMatrix::real(-1.0, 0.0, 0.0, 1.0)),
            HalfSpaceMedium::PerfectNonreciprocalMirror { sign } => {
                let s = sign.value();
                Ok(ReflectionMatrix::real(0.0, s, s, 0.0))
            }
            HalfSpaceMedium::Axion(m) => axion_reflection(m, k, k1),
        }
    }

    fn branch_points(&self, k: Complex64) -> Vec<Complex64> {
        match self {
            HalfSpaceMedium::Axion(m) if m.permittivity * m.permeability != 1.0 => {
                vec![(1.0 - m.permittivity * m.permeability) * k * k]
            }
            _ => Vec::new(),
        }
    }
}

/// `alpha (theta2 - theta1) / pi`.
pub fn delta(theta1: f64, theta2: f64) -> f64 {
    FINE_STRUCTURE * (theta2 - theta1) / PI
}

/// Square root on the branch `Im >= 0`, and `Re >= 0` on the real axis.
pub fn branch_sqrt(w: Complex64) -> Complex64 {
    let s = w.sqrt();
    if s.im < 0.0 || (s.im == 0.0 && s.re < 0.0) {
        -s
    } else {
        // Normalize -0.0 so that purely imaginary results compare equal.
        Complex64::new(s.re + 0.0, s.im + 0.0)
    }
}

fn check_frequency(omega: Complex64) -> Result<()> {
    let on_real = omega.im == 0.0 && omega.re >= 0.0;
    let on_imag = omega.re == 0.0 && omega.im >= 0.0;
    if (on_real || on_imag) && omega.re.is_finite() && omega.im.is_finite() {
        Ok(())
    } else {
        Err(Error::UnsupportedFrequency {
            re: omega.re,
            im: omega.im,
        })
    }
}

/// `sqrt(eps mu omega^2 - k_par^2)` with `c = 1`, on the decaying branch.
pub fn perpendicular_wavenumber(
    omega: Complex64,
    k_par: f64,
    permittivity: f64,
    permeability: f64,
) -> Result<Complex64> {
    check_frequency(omega)?;
    if !(k_par.is_finite() && k_par >= 0.0) {
        return Err(invalid("k_par", format!("expected >= 0, got {k_par}")));
    }
    if omega.norm() == 0.0 && k_par == 0.0 {
        return Err(Error::DegenerateWavenumber);
    }
    let index2 = permittivity * permeability;
    Ok(branch_sqrt(index2 * omega * omega - k_par * k_par))
}

/// Reflection matrix of `medium` at frequency `omega` (real or `i xi`, `c = 1`)
/// and in-plane wavenumber `k_par`.
pub fn reflection(medium: &HalfSpaceMedium, omega: Complex64, k_par: f64) -> Result<ReflectionMatrix> {
    let k1 = perpendicular_wavenumber(omega, k_par, 1.0, 1.0)?;
    medium.reflection_at(omega, k1).map_err(|e| match e {
        Error::Pole { .. } => Error::Pole { k_par },
        other => other,
    })
}

pub(crate) fn axion_reflection(m: &AxionMedium, k: Complex64, k1: Complex64) -> Result<ReflectionMatrix> {
    let eps = m.permittivity;
    let index2 = eps * m.permeability;
    let k2 = if index2 == 1.0 {
        k1
    } else {
        branch_sqrt((index2 - 1.0) * k * k + k1 * k1)
    };
    let d2 = m.delta * m.delta;
    let cross = k1 * k2;
    let te = k1 + k2;
    let tm = eps * k1 + k2;
    let den = te * tm + cross * d2;
    if den.norm() == 0.0 || !den.re.is_finite() || !den.im.is_finite() {
        let k_par = (k * k - k1 * k1).sqrt().re;
        return Err(Error::Pole { k_par });
    }
    let ss = ((k1 - k2) * tm - cross * d2) / den;
    let pp = ((eps * k1 - k2) * te + cross * d2) / den;
    // Mixing channels in the p-vector convention of the Green's tensor
    // module: this sign reproduces the ideal nonreciprocal mirror limits.
    let mix = -2.0 * cross * m.delta / den;
    Ok(ReflectionMatrix::new(ss, mix, mix, pp))
}

/// Normal-incidence (far-field) coefficients with `n = sqrt(eps)`.
pub fn retarded_limit_coefficients(medium: &AxionMedium) -> ReflectionMatrix {
    let eps = medium.permittivity;
    let n = eps.sqrt();
    let d = medium.delta;
    let den = (1.0 + n) * (1.0 + n) + d * d;
    let ss = ((1.0 - eps) - d * d) / den;
    let mix = -2.0 * d / den;
    ReflectionMatrix::real(ss, mix, mix, -ss)
}

/// Large-`k_par` (near-field) coefficients.
pub fn nonretarded_limit_coefficients(medium: &AxionMedium) -> ReflectionMatrix {
    let eps = medium.permittivity;
    let d = medium.delta;
    let den = 2.0 * (eps + 1.0) + d * d;
    let mix = -2.0 * d / den;
    ReflectionMatrix::real(-d * d / den, mix, mix, (2.0 * (eps - 1.0) + d * d) / den)
}
