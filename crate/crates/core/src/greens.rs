//! Coincident-point scattering Green's tensor above a planar half-space.
//!
//! Units: `c = 1`, so the frequency is also the vacuum wavenumber `k` and
//! `k z` is the dimensionless height.

use std::f64::consts::PI;
use std::ops::{Add, Index, Mul, Sub};

use num_complex::Complex64;

use crate::atom::Dipole;
use crate::error::{Error, Result};
use crate::media::{HalfSpaceMedium, MirrorSign, ReflectionModel};
use crate::quadrature::{integrate_segments, QuadratureConfig};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Evanescent integrals are cut at `exp(-2 kappa z) = exp(-TAIL)`, about 4e-18.
const TAIL: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexDyadic {
    entries: [[Complex64; 3]; 3],
}

impl ComplexDyadic {
    pub fn new(entries: [[Complex64; 3]; 3]) -> Self {
        Self { entries }
    }

    pub fn zero() -> Self {
        Self::new([[ZERO; 3]; 3])
    }

    /// Tensor with the symmetry of a planar, rotationally invariant system:
    /// `xx = yy`, `zz`, and an antisymmetric `xy = -yx` block.
    pub fn planar(xx: Complex64, zz: Complex64, xy: Complex64) -> Self {
        Self::new([[xx, xy, ZERO], [-xy, xx, ZERO], [ZERO, ZERO, zz]])
    }

    pub fn entries(&self) -> &[[Complex64; 3]; 3] {
        &self.entries
    }

    pub fn transpose(&self) -> Self {
        let e = &self.entries;
        Self::new(std::array::from_fn(|i| std::array::from_fn(|j| e[j][i])))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let e = &self.entries;
        Self::new(std::array::from_fn(|i| std::array::from_fn(|j| e[j][i].conj())))
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        let e = &self.entries;
        Self::new(std::array::from_fn(|i| std::array::from_fn(|j| f(e[i][j]))))
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.entries.iter().flatten().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .flatten()
            .zip(other.entries.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol * self.norm().max(f64::MIN_POSITIVE)
    }

    /// `sum_ij a_i G_ij b_j`.
    pub fn sandwich(&self, a: &Dipole, b: &Dipole) -> Complex64 {
        let mut s = ZERO;
        for (ai, row) in a.iter().zip(&self.entries) {
            for (gij, bj) in row.iter().zip(b) {
                s += ai * gij * bj;
            }
        }
        s
    }

    /// Splits into the transpose-symmetric (reciprocal) and antisymmetric parts.
    pub fn split_reciprocal(&self) -> (Self, Self) {
        let t = self.transpose();
        ((*self + t) * 0.5, (*self - t) * 0.5)
    }
}

impl Index<(usize, usize)> for ComplexDyadic {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i][j]
    }
}

impl Add for ComplexDyadic {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self::new(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.entries[i][j] + rhs.entries[i][j])
        }))
    }
}

impl Sub for ComplexDyadic {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        Self::new(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.entries[i][j] - rhs.entries[i][j])
        }))
    }
}

impl Mul<Complex64> for ComplexDyadic {
    type Output = Self;

    fn mul(self, rhs: Complex64) -> Self {
        self.map(|c| c * rhs)
    }
}

impl Mul<f64> for ComplexDyadic {
    type Output = Self;

    fn mul(self, rhs: f64) -> Self {
        self.map(|c| c * rhs)
    }
}

/// `(A + A^dagger) / 2`.
pub fn generalized_re(a: &ComplexDyadic) -> ComplexDyadic {
    (*a + a.adjoint()) * 0.5
}

/// `(A - A^dagger) / 2i`.
pub fn generalized_im(a: &ComplexDyadic) -> ComplexDyadic {
    (*a - a.adjoint()) * Complex64::new(0.0, -0.5)
}

/// Atom height and frequency (`omega` real or `i xi`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvaluationPoint {
    z: f64,
    frequency: Complex64,
}

impl EvaluationPoint {
    pub fn new(z: f64, frequency: Complex64) -> Result<Self> {
        if !(z.is_finite() && z > 0.0) {
            return Err(Error::NonPositiveHeight(z));
        }
        let real = frequency.im == 0.0 && frequency.re > 0.0 && frequency.re.is_finite();
        let imaginary = frequency.re == 0.0 && frequency.im > 0.0 && frequency.im.is_finite();
        if !(real || imaginary) {
            return Err(Error::UnsupportedFrequency {
                re: frequency.re,
                im: frequency.im,
            });
        }
        Ok(Self { z, frequency })
    }

    pub fn real(z: f64, omega: f64) -> Result<Self> {
        if omega.is_nan() || omega <= 0.0 {
            return Err(Error::NonPositiveFrequency(omega));
        }
        Self::new(z, Complex64::new(omega, 0.0))
    }

    pub fn imaginary(z: f64, xi: f64) -> Result<Self> {
        if xi.is_nan() || xi <= 0.0 {
            return Err(Error::NonPositiveFrequency(xi));
        }
        Self::new(z, Complex64::new(0.0, xi))
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn frequency(&self) -> Complex64 {
        self.frequency
    }

    pub fn is_imaginary(&self) -> bool {
        self.frequency.re == 0.0
    }
}

fn conductor_entries(z: f64, k: Complex64) -> (Complex64, Complex64) {
    let phase = (2.0 * I * k * z).exp();
    let xx = -1.0 / (8.0 * PI * z) - I / (16.0 * PI * k * z * z) + 1.0 / (32.0 * PI * k * k * z * z * z);
    let zz = -I / (8.0 * PI * k * z * z) + 1.0 / (16.0 * PI * k * k * z * z * z);
    (xx * phase, zz * phase)
}

/// `G_xy` of the mirror with `r_sp = r_ps = -1`.
fn mirror_xy(z: f64, k: Complex64) -> Complex64 {
    let phase = (2.0 * I * k * z).exp();
    (-1.0 / (8.0 * PI * z) - I / (16.0 * PI * k * z * z)) * phase
}

fn check_real(z: f64, omega: f64) -> Result<()> {
    EvaluationPoint::real(z, omega).map(|_| ())
}

/// Closed-form tensor of the perfectly conducting mirror.
pub fn greens_perfect_conductor(z: f64, omega: f64) -> Result<ComplexDyadic> {
    check_real(z, omega)?;
    let (xx, zz) = conductor_entries(z, Complex64::new(omega, 0.0));
    Ok(ComplexDyadic::planar(xx, zz, ZERO))
}

/// Closed-form tensor of the perfect nonreciprocal mirror `r_sp = r_ps = sign`.
pub fn greens_nonreciprocal_mirror(z: f64, omega: f64, sign: MirrorSign) -> Result<ComplexDyadic> {
    check_real(z, omega)?;
    let xy = -sign.value() * mirror_xy(z, Complex64::new(omega, 0.0));
    Ok(ComplexDyadic::planar(ZERO, ZERO, xy))
}

/// Closed form for either ideal mirror at a real or imaginary frequency.
pub fn greens_closed_form(point: EvaluationPoint, medium: &HalfSpaceMedium) -> Result<ComplexDyadic> {
    let (z, k) = (point.z, point.frequency);
    match medium {
        HalfSpaceMedium::PerfectConductor => {
            let (xx, zz) = conductor_entries(z, k);
            Ok(ComplexDyadic::planar(xx, zz, ZERO))
        }
        HalfSpaceMedium::PerfectNonreciprocalMirror { sign } => {
            Ok(ComplexDyadic::planar(ZERO, ZERO, -sign.value() * mirror_xy(z, k)))
        }
        HalfSpaceMedium::Axion(_) => Err(Error::Unsupported(
            "closed-form Green's tensor of an axion medium".into(),
        )),
    }
}

/// Numerically integrated tensor with per-entry absolute error estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreensEstimate {
    pub tensor: ComplexDyadic,
    /// Error bounds for `xx` (= `yy`), `zz` and `xy` (= `-yx`).
    pub error_xx: f64,
    pub error_zz: f64,
    pub error_xy: f64,
    pub evaluations: usize,
}

impl GreensEstimate {
    pub fn max_error(&self) -> f64 {
        self.error_xx.max(self.error_zz).max(self.error_xy)
    }
}

/// Kernel after the azimuthal integration, as a function of the vacuum
/// perpendicular wavenumber `k1`. Returns `(xx, zz, xy)` without the measure.
fn kernel<R: ReflectionModel + ?Sized>(
    model: &R,
    z: f64,
    k: Complex64,
    k1: Complex64,
    k_par2: Complex64,
) -> Result<[Complex64; 3]> {
    let r = model.reflection_at(k, k1)?;
    let pre = I / (8.0 * PI) * (2.0 * I * k1 * z).exp();
    let k2 = k * k;
    let xx = pre * (r.ss() - r.pp() * k1 * k1 / k2);
    let zz = pre * 2.0 * r.pp() * k_par2 / k2;
    let xy = pre * (r.sp() + r.ps()) * k1 / k;
    Ok([xx, zz, xy])
}

fn pack(v: [Complex64; 3], measure: Complex64) -> [f64; 6] {
    let [a, b, c] = v.map(|x| x * measure);
    [a.re, a.im, b.re, b.im, c.re, c.im]
}

fn sorted_points(mut p: Vec<f64>) -> Vec<f64> {
    p.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
    p.dedup();
    p
}

/// Scattering tensor of `medium` by k_par-quadrature with default tolerances.
pub fn scattering_greens_numeric(point: EvaluationPoint, medium: &HalfSpaceMedium) -> Result<ComplexDyadic> {
    scattering_greens_estimate(point, medium, &QuadratureConfig::default()).map(|e| e.tensor)
}

/// Scattering tensor of any reflection model, with error estimates.
///
/// Real `omega`: propagating waves are integrated over `k1 in (0, k]` and
/// evanescent ones over `k1 = i kappa`, `kappa in (0, TAIL / 2z]`. Imaginary
/// frequency `i xi`: `k1 = i kappa`, `kappa = xi + s / 2z`, `s in (0, TAIL]`.
pub fn scattering_greens_estimate<R: ReflectionModel + ?Sized>(
    point: EvaluationPoint,
    model: &R,
    config: &QuadratureConfig,
) -> Result<GreensEstimate> {
    let z = point.z;
    let k = point.frequency;
    let branch: Vec<Complex64> = model.branch_points(k);
    let est = if point.is_imaginary() {
        let xi = k.im;
        let f = |s: f64| {
            let kappa = xi + s / (2.0 * z);
            let k1 = Complex64::new(0.0, kappa);
            let k_par2 = Complex64::new((kappa - xi) * (kappa + xi), 0.0);
            kernel(model, z, k, k1, k_par2).map(|v| pack(v, Complex64::new(0.0, -1.0 / (2.0 * z))))
        };
        integrate_segments(f, &[0.0, 0.5, 2.0, 8.0, TAIL], config)?
    } else {
        let w = k.re;
        let kappa_max = TAIL / (2.0 * z);
        let mut q_points = vec![0.0, w];
        let mut kappa_points = vec![0.0, kappa_max];
        for b in branch {
            if b.re > 0.0 && b.re < w * w {
                q_points.push(b.re.sqrt());
            } else if b.re < 0.0 && -b.re < kappa_max * kappa_max {
                kappa_points.push((-b.re).sqrt());
            }
        }
        for s in [0.5, 2.0, 8.0] {
            if s / (2.0 * z) < kappa_max {
                kappa_points.push(s / (2.0 * z));
            }
        }
        let q_points = sorted_points(q_points);
        let kappa_points = sorted_points(kappa_points);
        // Propagating and evanescent parts as one integral over a
        // joint parameter t: t in [0, 1] maps onto q, t in [1, 2] onto kappa.
        let nq = q_points.len() - 1;
        let mut t_points: Vec<f64> = (0..=nq).map(|i| i as f64 / nq as f64).collect();
        let nk = kappa_points.len() - 1;
        t_points.extend((1..=nk).map(|i| 1.0 + i as f64 / nk as f64));
        let piece = |t: f64, pts: &[f64]| {
            let n = pts.len() - 1;
            let x = t * n as f64;
            let i = (x.floor() as usize).min(n - 1);
            let frac = x - i as f64;
            let (a, b) = (pts[i], pts[i + 1]);
            (a + frac * (b - a), (b - a) * n as f64)
        };
        let f = |t: f64| -> Result<[f64; 6]> {
            if t < 1.0 {
                let (q, jac) = piece(t, &q_points);
                let k1 = Complex64::new(q, 0.0);
                let k_par2 = Complex64::new((w - q) * (w + q), 0.0);
                kernel(model, z, k, k1, k_par2).map(|v| pack(v, Complex64::new(jac, 0.0)))
            } else {
                let (kappa, jac) = piece(t - 1.0, &kappa_points);
                let k1 = Complex64::new(0.0, kappa);
                let k_par2 = Complex64::new(w * w + kappa * kappa, 0.0);
                kernel(model, z, k, k1, k_par2).map(|v| pack(v, Complex64::new(0.0, -jac)))
            }
        };
        integrate_segments(f, &t_points, config)?
    };
    let v = est.value;
    let e = est.error;
    let xx = Complex64::new(v[0], v[1]);
    let zz = Complex64::new(v[2], v[3]);
    let xy = Complex64::new(v[4], v[5]);
    Ok(GreensEstimate {
        tensor: ComplexDyadic::planar(xx, zz, xy),
        error_xx: e[0] + e[1],
        error_zz: e[2] + e[3],
        error_xy: e[4] + e[5],
        evaluations: est.evaluations,
    })
}
