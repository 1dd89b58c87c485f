//! Decay rates, Casimir-Polder shifts, their limiting laws and population dynamics.

mod asymptotic;
mod dynamics;
mod shifts;

pub use asymptotic::{asymptotic, axion_difference, AsymptoticCase, AsymptoticMedium, Quantity, Regime};
pub use dynamics::{evolve_populations, PopulationState, RateTable};
pub use shifts::{
    decay_rate, decay_rate_split, nonresonant_channels, nonresonant_shift, nonresonant_terms, resonant_quantities,
    resonant_shift, resonant_shift_split, self_consistent_shift, total_shift, ChannelSplit, EvalOptions,
    NonresonantChannels, NonresonantTerms, ResonantQuantities, Route, SelfConsistency, SelfConsistentShift,
    ShiftBreakdown,
};
