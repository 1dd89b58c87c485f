use std::f64::consts::PI;

use num_complex::Complex64;

use crate::atom::{conjugate, free_space_rate, Dipole, Transition};
use crate::error::{invalid, Error, Result};
use crate::greens::{greens_closed_form, scattering_greens_estimate, ComplexDyadic, EvaluationPoint};
use crate::media::HalfSpaceMedium;
use crate::quadrature::{integrate_segments, QuadratureConfig};
use crate::units::{UnitsPolicy, SPEED_OF_LIGHT};

/// Upper end of the imaginary-frequency integral in `u = 2 xi z`; the
/// integrand is damped by `exp(-u)`, so the neglected tail is below 1e-21.
const U_MAX: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Route {
    /// Closed forms for the ideal mirrors, quadrature otherwise.
    #[default]
    Auto,
    /// Always integrate over the in-plane wavenumber.
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOptions {
    /// `Scaled`: heights in units of `c / omega` of the transition, results in
    /// units of its free-space rate. `Si`: meters and 1/s (rad/s for shifts).
    pub units: UnitsPolicy,
    pub route: Route,
    /// Tolerances of the in-plane wavenumber integral.
    pub greens: QuadratureConfig,
    /// Tolerances of the imaginary-frequency integral.
    pub frequency_integral: QuadratureConfig,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            units: UnitsPolicy::Scaled,
            route: Route::Auto,
            greens: QuadratureConfig::default(),
            frequency_integral: QuadratureConfig::with_rel_tol(1e-8),
        }
    }
}

impl EvalOptions {
    pub fn si() -> Self {
        Self {
            units: UnitsPolicy::Si,
            ..Self::default()
        }
    }

    pub fn numeric() -> Self {
        Self {
            route: Route::Numeric,
            ..Self::default()
        }
    }
}

/// Contributions of the transpose-symmetric and antisymmetric parts of the tensor.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ChannelSplit {
    pub reciprocal: f64,
    pub nonreciprocal: f64,
}

impl ChannelSplit {
    pub fn total(&self) -> f64 {
        self.reciprocal + self.nonreciprocal
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftBreakdown {
    pub resonant: f64,
    pub nonresonant: f64,
}

impl ShiftBreakdown {
    pub fn total(&self) -> f64 {
        self.resonant + self.nonresonant
    }
}

/// The two imaginary-frequency integrals making up the nonresonant shift:
/// the one over `Im` of the sandwich (nonreciprocal media only) and the one
/// over `Re`. Both carry their sign, so the shift is their sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonresonantTerms {
    pub im_term: f64,
    pub re_term: f64,
    pub error: f64,
}

impl NonresonantTerms {
    pub fn total(&self) -> f64 {
        self.im_term + self.re_term
    }
}

fn scaled_height(t: &Transition, z: f64, units: UnitsPolicy) -> Result<f64> {
    if !(z.is_finite() && z > 0.0) {
        return Err(Error::NonPositiveHeight(z));
    }
    Ok(match units {
        UnitsPolicy::Scaled => t.frequency() * z,
        UnitsPolicy::Si => t.frequency() * z / SPEED_OF_LIGHT,
    })
}

fn rate_unit(t: &Transition, units: UnitsPolicy) -> f64 {
    free_space_rate(t, units)
}

/// Tensor at `k = 1` (real) or `k = i xi`, height `zeta`, with a bound on the
/// error of any unit-vector sandwich.
fn tensor(point: EvaluationPoint, medium: &HalfSpaceMedium, opts: &EvalOptions) -> Result<(ComplexDyadic, f64)> {
    if opts.route == Route::Auto && medium.is_ideal() {
        greens_closed_form(point, medium).map(|g| (g, 0.0))
    } else {
        scattering_greens_estimate(point, medium, &opts.greens)
            .map(|e| (e.tensor, e.error_xx + e.error_zz + e.error_xy))
    }
}

fn sandwich_parts(g: &ComplexDyadic, e: &Dipole) -> (Complex64, Complex64) {
    let ec = conjugate(e);
    let (sym, anti) = g.split_reciprocal();
    (sym.sandwich(e, &ec), anti.sandwich(e, &ec))
}

/// Decay rate and resonant shift from one evaluation of the tensor at the
/// transition frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonantQuantities {
    pub rate: ChannelSplit,
    pub shift: ChannelSplit,
    /// Absolute error bounds from the wavenumber quadrature (0 for closed forms).
    pub rate_error: f64,
    pub shift_error: f64,
}

pub fn resonant_quantities(
    t: &Transition,
    z: f64,
    medium: &HalfSpaceMedium,
    opts: &EvalOptions,
) -> Result<ResonantQuantities> {
    let zeta = scaled_height(t, z, opts.units)?;
    let (g, err) = tensor(EvaluationPoint::real(zeta, 1.0)?, medium, opts)?;
    let (sym, anti) = sandwich_parts(&g, &t.polarization());
    let unit = rate_unit(t, opts.units);
    Ok(ResonantQuantities {
        rate: ChannelSplit {
            reciprocal: 6.0 * PI * sym.im * unit,
            nonreciprocal: 6.0 * PI * anti.im * unit,
        },
        shift: ChannelSplit {
            reciprocal: -3.0 * PI * sym.re * unit,
            nonreciprocal: -3.0 * PI * anti.re * unit,
        },
        rate_error: 6.0 * PI * err * unit,
        shift_error: 3.0 * PI * err * unit,
    })
}

/// Body-induced decay rate `Gamma^(1)` of the transition at height `z`.
pub fn decay_rate(t: &Transition, z: f64, medium: &HalfSpaceMedium, opts: &EvalOptions) -> Result<f64> {
    decay_rate_split(t, z, medium, opts).map(|s| s.total())
}

pub fn decay_rate_split(t: &Transition, z: f64, medium: &HalfSpaceMedium, opts: &EvalOptions) -> Result<ChannelSplit> {
    resonant_quantities(t, z, medium, opts).map(|q| q.rate)
}

/// Resonant part of the frequency shift, from real-photon exchange at the
/// transition frequency.
pub fn resonant_shift(t: &Transition, z: f64, medium: &HalfSpaceMedium, opts: &EvalOptions) -> Result<f64> {
    resonant_shift_split(t, z, medium, opts).map(|s| s.total())
}

pub fn resonant_shift_split(
    t: &Transition,
    z: f64,
    medium: &HalfSpaceMedium,
    opts: &EvalOptions,
) -> Result<ChannelSplit> {
    resonant_quantities(t, z, medium, opts).map(|q| q.shift)
}

/// Nonresonant (virtual-photon) part of the shift, as an integral over
/// imaginary frequencies `xi = u / (2 zeta)`, `u in (0, U_MAX]`.
pub fn nonresonant_shift(t: &Transition, z: f64, medium: &HalfSpaceMedium, opts: &EvalOptions) -> Result<f64> {
    nonresonant_terms(t, z, medium, opts).map(|n| n.total())
}

pub fn nonresonant_terms(
    t: &Transition,
    z: f64,
    medium: &HalfSpaceMedium,
    opts: &EvalOptions,
) -> Result<NonresonantTerms> {
    let (value, error) = nonresonant_integral::<1, 2, _>(t, z, medium, opts, |g, e, ec| [g.sandwich(e, ec)])?;
    Ok(NonresonantTerms {
        im_term: value[0],
        re_term: value[1],
        error: error[0] + error[1],
    })
}

/// Nonresonant shift split into the reciprocal and nonreciprocal parts of the
/// tensor, each integrated to its own tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonresonantChannels {
    pub reciprocal: NonresonantTerms,
    pub nonreciprocal: NonresonantTerms,
}

impl NonresonantChannels {
    pub fn split(&self) -> ChannelSplit {
        ChannelSplit {
            reciprocal: self.reciprocal.total(),
            nonreciprocal: self.nonreciprocal.total(),
        }
    }
}

pub fn nonresonant_channels(
    t: &Transition,
    z: f64,
    medium: &HalfSpaceMedium,
    opts: &EvalOptions,
) -> Result<NonresonantChannels> {
    let (value, error) = nonresonant_integral::<2, 4, _>(t, z, medium, opts, |g, e, _| {
        let (sym, anti) = sandwich_parts(g, e);
        [sym, anti]
    })?;
    Ok(NonresonantChannels {
        reciprocal: NonresonantTerms {
            im_term: value[0],
            re_term: value[1],
            error: error[0] + error[1],
        },
        nonreciprocal: NonresonantTerms {
            im_term: value[2],
            re_term: value[3],
            error: error[2] + error[3],
        },
    })
}

/// Integrates the `M` sandwiches produced by `parts`; returns `2M` values
/// ordered as (Im term, Re term) per sandwich, in rate units, with errors.
fn nonresonant_integral<const M: usize, const N: usize, P>(
    t: &Transition,
    z: f64,
    medium: &HalfSpaceMedium,
    opts: &EvalOptions,
    parts: P,
) -> Result<([f64; N], [f64; N])>
where
    P: Fn(&ComplexDyadic, &Dipole, &Dipole) -> [Complex64; M],
{
    debug_assert_eq!(N, 2 * M);
    let zeta = scaled_height(t, z, opts.units)?;
    let e = t.polarization();
    let ec = conjugate(&e);
    let f = |u: f64| -> Result<[f64; N]> {
        let xi = u / (2.0 * zeta);
        let (g, _) = tensor(EvaluationPoint::imaginary(zeta, xi)?, medium, opts)?;
        let w = xi * xi / (xi * xi + 1.0) / (2.0 * zeta);
        let mut out = [0.0; N];
        for (i, s) in parts(&g, &e, &ec).iter().enumerate() {
            out[2 * i] = 3.0 * w * xi * s.im;
            out[2 * i + 1] = -3.0 * w * s.re;
        }
        Ok(out)
    };
    let mut points = vec![0.0, 0.5, 2.0, 8.0, U_MAX];
    if 2.0 * zeta < U_MAX {
        points.push(2.0 * zeta);
    }
    points.sort_by(|a, b| a.total_cmp(b));
    points.dedup();
    let est = integrate_segments(f, &points, &opts.frequency_integral)?;
    let unit = rate_unit(t, opts.units);
    Ok((est.value.map(|v| v * unit), est.error.map(|v| v * unit)))
}

pub fn total_shift(t: &Transition, z: f64, medium: &HalfSpaceMedium, opts: &EvalOptions) -> Result<ShiftBreakdown> {
    Ok(ShiftBreakdown {
        resonant: resonant_shift(t, z, medium, opts)?,
        nonresonant: nonresonant_shift(t, z, medium, opts)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfConsistency {
    pub max_iter: usize,
    /// Convergence threshold on the change of the shifted frequency, relative
    /// to the bare frequency.
    pub tol: f64,
    /// Free-space rate over transition frequency. Derived from the SI dipole
    /// and frequency when `None`; required in scaled units.
    pub coupling: Option<f64>,
}

impl Default for SelfConsistency {
    fn default() -> Self {
        Self {
            max_iter: 1,
            tol: 1e-12,
            coupling: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfConsistentShift {
    /// Shift at the final frequency, in the units of `opts`.
    pub shift: ShiftBreakdown,
    /// Shifted over bare transition frequency.
    pub frequency_ratio: f64,
    pub iterations: usize,
}

/// Solves `w' = w + delta_omega(w')` by fixed-point iteration from the bare
/// frequency `w`. The rate unit scales as `w'^3` and the height as `w'`.
pub fn self_consistent_shift(
    t: &Transition,
    z: f64,
    medium: &HalfSpaceMedium,
    opts: &EvalOptions,
    sc: &SelfConsistency,
) -> Result<SelfConsistentShift> {
    if sc.max_iter == 0 {
        return Err(invalid("max_iter", "must be at least 1"));
    }
    let gamma = match (sc.coupling, opts.units) {
        (Some(g), _) => g,
        (None, UnitsPolicy::Si) => t.scale().coupling(),
        (None, UnitsPolicy::Scaled) => return Err(invalid("coupling", "required in scaled units")),
    };
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(invalid("coupling", format!("expected >= 0, got {gamma}")));
    }
    let zeta = scaled_height(t, z, opts.units)?;
    let unit = rate_unit(t, opts.units);
    let scaled = EvalOptions {
        units: UnitsPolicy::Scaled,
        ..*opts
    };
    let probe = Transition::new(*t.dipole(), 1.0)?;
    let mut x = 1.0;
    let mut last_change = f64::INFINITY;
    for i in 1..=sc.max_iter {
        let s = total_shift(&probe, zeta * x, medium, &scaled)?;
        let x3 = x * x * x;
        let next = 1.0 + gamma * x3 * s.total();
        last_change = (next - x).abs();
        let shift = ShiftBreakdown {
            resonant: s.resonant * x3 * unit,
            nonresonant: s.nonresonant * x3 * unit,
        };
        if last_change < sc.tol || i == sc.max_iter && sc.max_iter == 1 {
            return Ok(SelfConsistentShift {
                shift,
                frequency_ratio: next,
                iterations: i,
            });
        }
        if !(next.is_finite() && next > 0.0) {
            break;
        }
        x = next;
    }
    Err(Error::IterationLimit {
        iterations: sc.max_iter,
        last_change,
    })
}
