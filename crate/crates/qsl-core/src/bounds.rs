//! Lower bounds on the passage time and the exact two-level results.
//!
//! The passage time of a state is the first t > 0 with a(t) = 0. Two
//! inequalities constrain it from below:
//!
//! * the dispersion bound τ ≥ πħ/(2ΔH), and
//! * the mean-energy bound τ ≥ πħ/(2⟨Ĥ−E_min⟩), with the spectrum floored at
//!   the lowest occupied level so the bound is shift-invariant.
//!
//! Equal-weight two-level states saturate both: they pass through an
//! orthogonal state at exactly πħ/ΔE, and again at every odd multiple.

use crate::state::EnergyState;
use std::fmt;
use thiserror::Error;

/// Slack allowed when comparing the two bounds in a [`BoundsReport`].
pub const BOUND_COMPARISON_TOL: f64 = 1e-12;

/// A lower bound on a time, which may be infinite (no passage can occur).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeBound {
    Finite(f64),
    Unbounded,
}

impl TimeBound {
    pub fn is_finite(&self) -> bool {
        matches!(self, TimeBound::Finite(_))
    }

    /// The bound as a plain float, with `Unbounded` mapped to `+∞`.
    pub fn as_f64(&self) -> f64 {
        match self {
            TimeBound::Finite(v) => *v,
            TimeBound::Unbounded => f64::INFINITY,
        }
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            TimeBound::Finite(v) => Some(*v),
            TimeBound::Unbounded => None,
        }
    }
}

impl fmt::Display for TimeBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeBound::Finite(v) => write!(f, "{v}"),
            TimeBound::Unbounded => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum BoundsError {
    #[error("state is not an equal-weight two-level superposition")]
    NotTwoLevelEqual,
    #[error("passage times form an odd-multiple family; k = {k} is even")]
    EvenK { k: u64 },
}

/// Dispersion bound τ ≥ πħ/(2ΔH).
///
/// An eigenstate has ΔH = 0 and never reaches an orthogonal state, so the
/// bound degenerates to `Unbounded`.
pub fn fleming_bound(state: &EnergyState) -> TimeBound {
    let dh = state.energy_dispersion();
    if state.is_eigenstate() || dh <= 0.0 {
        TimeBound::Unbounded
    } else {
        TimeBound::Finite(std::f64::consts::PI * state.hbar() / (2.0 * dh))
    }
}

/// Mean-energy bound τ ≥ πħ/(2⟨Ĥ − E_floor⟩), where E_floor is the lowest
/// level carrying weight.
///
/// Flooring makes the bound invariant under energy shifts, and as tight as
/// this family of bounds allows. A state concentrated on its lowest occupied
/// level has zero mean above the floor, so the bound is `Unbounded`.
pub fn margolus_levitin_bound(state: &EnergyState) -> TimeBound {
    let floor = state
        .probabilities()
        .iter()
        .zip(state.energies())
        .filter(|(&p, _)| p > crate::state::EFFECTIVE_WEIGHT_TOL)
        .map(|(_, &e)| e)
        .fold(f64::INFINITY, f64::min);
    let mean_above = state.energy_mean() - floor;
    if state.is_eigenstate() || mean_above <= 0.0 {
        TimeBound::Unbounded
    } else {
        TimeBound::Finite(std::f64::consts::PI * state.hbar() / (2.0 * mean_above))
    }
}

/// Exact passage time πħ/(E₂−E₁) of an equal-weight two-level state.
pub fn two_level_passage(state: &EnergyState) -> Result<f64, BoundsError> {
    if !state.is_equal_two_level() {
        return Err(BoundsError::NotTwoLevelEqual);
    }
    let gap = state.energies()[1] - state.energies()[0];
    Ok(std::f64::consts::PI * state.hbar() / gap)
}

/// The k-th orthogonal passage kπħ/(E₂−E₁) of an equal-weight two-level
/// state; the survival amplitude vanishes exactly at the odd multiples.
pub fn passage_time_family(state: &EnergyState, k: u64) -> Result<f64, BoundsError> {
    if k.is_multiple_of(2) {
        return Err(BoundsError::EvenK { k });
    }
    Ok(k as f64 * two_level_passage(state)?)
}

/// Both bounds side by side for one state.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    /// Energy dispersion ΔH.
    pub dispersion: f64,
    /// Dispersion bound πħ/(2ΔH).
    pub fleming: TimeBound,
    /// Mean-energy bound πħ/(2⟨Ĥ − E_floor⟩).
    pub margolus_levitin: TimeBound,
    /// Exact passage time when the state is an equal-weight two-level
    /// superposition.
    pub two_level_passage: Option<f64>,
    /// True when the mean-energy bound did not beat the dispersion bound on
    /// this state (it never does for two-level states; it can for broader
    /// spectra).
    pub ml_never_sharper: bool,
}

/// Evaluates every bound on `state`.
pub fn bounds_report(state: &EnergyState) -> BoundsReport {
    let fleming = fleming_bound(state);
    let ml = margolus_levitin_bound(state);
    let ml_never_sharper = match (ml, fleming) {
        (TimeBound::Finite(m), TimeBound::Finite(f)) => m <= f + BOUND_COMPARISON_TOL,
        _ => true,
    };
    BoundsReport {
        dispersion: state.energy_dispersion(),
        fleming,
        margolus_levitin: ml,
        two_level_passage: two_level_passage(state).ok(),
        ml_never_sharper,
    }
}
