//! State-space geometry: the Fubini–Study metric on rays, evolution speed,
//! path lengths, and geodesic tests.
//!
//! Distances here are angles, normalised so orthogonal states sit π apart.
//! Time evolution then moves a state at the constant speed 2ΔH/ħ, so the
//! curve it traces from a state to its first orthogonal partner has length
//! 2ΔH·τ_P/ħ ≥ π — with equality exactly when that curve is a geodesic.
//! Equal-weight two-level states are the states that achieve it.

use crate::bounds::two_level_passage;
use crate::minimize::brent_min;
use crate::state::{EnergyState, ZERO_NORM_TOL};
use num_complex::Complex64;
use thiserror::Error;

/// Default tolerance on the length excess for [`geodesic_check`].
pub const DEFAULT_GEODESIC_TOL: f64 = 1e-6;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("a projective point needs a vector with nonzero norm")]
    ZeroVector,
    #[error("time span must be a positive finite number, got {t}")]
    InvalidWindow { t: f64 },
    #[error("a path needs at least {min} segments, got {n}")]
    InvalidSampleCount { n: usize, min: usize },
    #[error("state is not an equal-weight two-level superposition")]
    NotTwoLevelEqual,
}

/// A ray in state space: a unit vector identified up to global phase.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectivePoint {
    components: Vec<Complex64>,
}

impl ProjectivePoint {
    /// Normalises `components` into a ray; rejects (near-)zero vectors.
    pub fn new(components: Vec<Complex64>) -> Result<Self, GeometryError> {
        let norm = components.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm < ZERO_NORM_TOL {
            return Err(GeometryError::ZeroVector);
        }
        Ok(Self {
            components: components.into_iter().map(|c| c / norm).collect(),
        })
    }

    pub fn components(&self) -> &[Complex64] {
        &self.components
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    /// ⟨self|other⟩ with the physics convention (conjugate-linear in self).
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(
            self.dim(),
            other.dim(),
            "projective points of different dimension"
        );
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// Fubini–Study distance 2·arccos|⟨x|y⟩| ∈ [0, π].
///
/// Zero for the same ray regardless of phase and scale of the input vectors,
/// π for orthogonal rays. Panics when the dimensions differ.
///
/// Mathematically this is 2·arccos(|⟨x|y⟩|), but that expression loses
/// relative accuracy once the overlap modulus approaches 1 (the angle is
/// then quantized at ~√ε). Instead the second ray is phase-aligned so the
/// overlap is real and nonnegative, and the angle comes from the
/// half-angle identity α = 2·atan2(‖x−y‖, ‖x+y‖), which is uniformly
/// accurate over the whole range — nearby rays included.
pub fn fs_distance(x: &ProjectivePoint, y: &ProjectivePoint) -> f64 {
    let overlap = x.inner(y);
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        // orthogonal rays: every alignment gives the same (maximal) angle
        Complex64::new(1.0, 0.0)
    };
    let mut diff_sq = 0.0;
    let mut sum_sq = 0.0;
    for (&a, &b) in x.components().iter().zip(y.components()) {
        let b_aligned = phase.conj() * b;
        diff_sq += (a - b_aligned).norm_sqr();
        sum_sq += (a + b_aligned).norm_sqr();
    }
    4.0 * diff_sq.sqrt().atan2(sum_sq.sqrt())
}

/// Instantaneous speed of time evolution in the metric above: 2ΔH/ħ,
/// constant along the whole trajectory.
pub fn aa_speed(state: &EnergyState) -> f64 {
    2.0 * state.energy_dispersion() / state.hbar()
}

/// The ray occupied at time t: amplitudes c_l e^(−iE_l t/ħ).
pub fn evolve(state: &EnergyState, t: f64) -> ProjectivePoint {
    let components = state
        .amplitudes()
        .iter()
        .zip(state.energies())
        .map(|(&c, &e)| c * Complex64::from_polar(1.0, -e * t / state.hbar()))
        .collect();
    ProjectivePoint { components }
}

/// Length of the evolution curve over [0, t_end], as a sum of `segments`
/// chords.
///
/// Chords shorten an arc by (Δθ)³/24 each, so the total error falls off as
/// 1/segments²: with the speed ω = 2ΔH/ħ it is about (ω·t_end)³/(24·n²).
pub fn path_length(state: &EnergyState, t_end: f64, segments: usize) -> Result<f64, GeometryError> {
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(GeometryError::InvalidWindow { t: t_end });
    }
    if segments < 1 {
        return Err(GeometryError::InvalidSampleCount {
            n: segments,
            min: 1,
        });
    }
    let dt = t_end / segments as f64;
    let mut prev = evolve(state, 0.0);
    let mut total = 0.0;
    for i in 1..=segments {
        let t = if i == segments { t_end } else { i as f64 * dt };
        let next = evolve(state, t);
        total += fs_distance(&prev, &next);
        prev = next;
    }
    Ok(total)
}

/// Number of chords that keeps the discretisation error of [`path_length`]
/// an order of magnitude below `tol`.
fn segments_for(arc: f64, tol: f64) -> usize {
    let n = (10.0 * arc.powi(3) / (24.0 * tol)).sqrt().ceil();
    (n as usize).clamp(1_000, 2_000_000)
}

/// Does the state move along a minimal geodesic over [0, t]?
///
/// Compares the length of the traced curve with the direct Fubini–Study
/// distance between its endpoints; they agree (within `tol`, relative for
/// long curves) precisely on minimal geodesic segments. Equal-weight
/// two-level states pass all the way to their passage time; any state passes
/// as t → 0; wrapping past the antipodal point or curving at all fails.
pub fn geodesic_check(state: &EnergyState, t: f64, tol: f64) -> Result<bool, GeometryError> {
    if !(t.is_finite() && t > 0.0) {
        return Err(GeometryError::InvalidWindow { t });
    }
    let arc = aa_speed(state) * t;
    let length = path_length(state, t, segments_for(arc, tol))?;
    let direct = fs_distance(&evolve(state, 0.0), &evolve(state, t));
    Ok(length - direct <= tol * length.max(1.0))
}

/// The eigenstate pair recovered from an equal-weight two-level passage.
#[derive(Debug, Clone)]
pub struct EquatorConstruction {
    /// Relative phase φ for which the superpositions collapse onto the
    /// energy eigenstates.
    pub phi: f64,
    /// (ψ₀ + e^{iφ}η)/√2 — coincides with the lower-energy eigenstate ray.
    pub u_plus: ProjectivePoint,
    /// (ψ₀ − e^{iφ}η)/√2 — coincides with the higher-energy eigenstate ray.
    pub u_minus: ProjectivePoint,
    /// Worst distance between the constructed rays and the two eigenstate
    /// rays; ≈ 0 certifies the construction.
    pub max_distance: f64,
    /// The passage time τ of the state.
    pub passage_time: f64,
}

const EQUATOR_COARSE_GRID: usize = 512;

/// Recovers the poles of the Bloch sphere from two equator points: the
/// initial equal-weight superposition ψ₀ and its orthogonal passage partner
/// η = ψ(τ) both sit on the equator whose poles are the energy eigenstates,
/// and for the right relative phase the rays u± = (ψ₀ ± e^{iφ}η)/√2 are
/// exactly those eigenstates.
///
/// Both u± are unit for every φ (since ⟨ψ₀|η⟩ = 0) and mutually orthogonal;
/// the phase controls where on the sphere the pair points. φ is recovered
/// numerically by a 1-D search that drives u± onto the eigenstate rays.
pub fn equator_construction(state: &EnergyState) -> Result<EquatorConstruction, GeometryError> {
    let tau = two_level_passage(state).map_err(|_| GeometryError::NotTwoLevelEqual)?;
    let psi0 = evolve(state, 0.0);
    let eta = evolve(state, tau);
    let pole_low = ProjectivePoint {
        components: vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
    };
    let pole_high = ProjectivePoint {
        components: vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
    };

    let superpose = |phi: f64, sign: f64| {
        let rot = Complex64::from_polar(sign / std::f64::consts::SQRT_2, phi);
        let components: Vec<Complex64> = psi0
            .components()
            .iter()
            .zip(eta.components())
            .map(|(&a, &b)| a / std::f64::consts::SQRT_2 + rot * b)
            .collect();
        ProjectivePoint { components }
    };
    // φ and φ+π swap u+ and u−, so scanning a full turn also covers the
    // opposite pairing of rays to poles
    let objective = |phi: f64| {
        fs_distance(&superpose(phi, 1.0), &pole_low)
            .max(fs_distance(&superpose(phi, -1.0), &pole_high))
    };

    let step = 2.0 * std::f64::consts::PI / EQUATOR_COARSE_GRID as f64;
    let coarse_best = (0..EQUATOR_COARSE_GRID)
        .map(|k| k as f64 * step)
        .min_by(|&a, &b| objective(a).total_cmp(&objective(b)))
        .unwrap();
    let (phi, max_distance) = brent_min(
        objective,
        coarse_best - step,
        coarse_best + step,
        1e-13,
        200,
    );
    let phi = phi.rem_euclid(2.0 * std::f64::consts::PI);

    Ok(EquatorConstruction {
        phi,
        u_plus: superpose(phi, 1.0),
        u_minus: superpose(phi, -1.0),
        max_distance,
        passage_time: tau,
    })
}
