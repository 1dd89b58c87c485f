//! Spontaneous decay rates and Casimir-Polder frequency shifts of an atom
//! above a planar half-space: perfect conductor, perfect nonreciprocal mirror
//! and axion-coupled dielectric (topological insulator).
//!
//! Internally all quantities are in scaled units: `c = 1`, frequencies and
//! inverse lengths in units of the transition frequency, rates and shifts in
//! units of the free-space decay rate.

pub mod atom;
pub mod atomics;
pub mod error;
pub mod greens;
pub mod media;
pub mod quadrature;
pub mod units;

pub use atom::{circular_dipole, free_space_rate, AtomModel, Dipole, Handedness, Transition};
pub use atomics::{
    asymptotic, axion_difference, decay_rate, evolve_populations, nonresonant_shift, resonant_shift,
    self_consistent_shift, total_shift, EvalOptions, PopulationState, RateTable, ShiftBreakdown,
};
pub use error::{Error, Result};
pub use greens::{
    generalized_im, generalized_re, greens_closed_form, greens_nonreciprocal_mirror, greens_perfect_conductor,
    scattering_greens_estimate, scattering_greens_numeric, ComplexDyadic, EvaluationPoint, GreensEstimate,
};
pub use media::{
    delta, nonretarded_limit_coefficients, perpendicular_wavenumber, reflection, retarded_limit_coefficients,
    AxionMedium, HalfSpaceMedium, MirrorSign, Polarization, ReflectionMatrix, ReflectionModel,
};
pub use quadrature::QuadratureConfig;
pub use units::{Scale, UnitsPolicy};
