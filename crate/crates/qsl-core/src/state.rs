//! Finite-level quantum states in the energy eigenbasis.
//!
//! A state is a list of energy levels with complex amplitudes. Everything else
//! in this crate is driven by its survival amplitude
//! a(t) = Σ_l p_l e^(−iE_l t/ħ), the overlap between the state and its own
//! time evolution.

use num_complex::Complex64;
use thiserror::Error;

/// Levels closer than this (relative to the spectral scale) are merged.
pub const DEGENERACY_TOL: f64 = 1e-12;
/// Input vectors with norm below this are rejected instead of renormalised.
pub const ZERO_NORM_TOL: f64 = 1e-9;
/// Probability below which a level is considered absent from the dynamics.
pub const EFFECTIVE_WEIGHT_TOL: f64 = 1e-15;
/// Tolerance on |p − 1/2| for the equal-weight two-level check.
pub const EQUAL_WEIGHT_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum StateError {
    #[error("state needs at least one level")]
    EmptyState,
    #[error("state vector has (near-)zero norm")]
    ZeroNorm,
    #[error("expected {expected} amplitudes for {expected} energies, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("energies and amplitudes must be finite")]
    NonFinite,
    #[error("hbar must be a positive finite number")]
    NonPositiveHbar,
}

/// A normalised pure state over a strictly increasing, non-degenerate
/// energy spectrum.
///
/// Degenerate input levels are merged at construction: their probability
/// weights add, and the merged amplitude is the root of the summed squared
/// moduli (relative phase inside a degenerate level is unobservable here,
/// since every quantity computed downstream depends only on per-eigenvalue
/// weight). Inputs are renormalised unless the norm is below
/// [`ZERO_NORM_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyState {
    energies: Vec<f64>,
    amplitudes: Vec<Complex64>,
    probabilities: Vec<f64>,
    hbar: f64,
}

impl EnergyState {
    /// Builds a state in natural units (ħ = 1).
    pub fn new(energies: Vec<f64>, amplitudes: Vec<Complex64>) -> Result<Self, StateError> {
        Self::with_hbar(energies, amplitudes, 1.0)
    }

    /// Builds a state with an explicit ħ; every returned time scales as τ ∝ ħ.
    pub fn with_hbar(
        energies: Vec<f64>,
        amplitudes: Vec<Complex64>,
        hbar: f64,
    ) -> Result<Self, StateError> {
        if energies.is_empty() {
            return Err(StateError::EmptyState);
        }
        if energies.len() != amplitudes.len() {
            return Err(StateError::LengthMismatch {
                expected: energies.len(),
                got: amplitudes.len(),
            });
        }
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(StateError::NonPositiveHbar);
        }
        let finite = energies.iter().all(|e| e.is_finite())
            && amplitudes
                .iter()
                .all(|c| c.re.is_finite() && c.im.is_finite());
        if !finite {
            return Err(StateError::NonFinite);
        }

        let mut order: Vec<usize> = (0..energies.len()).collect();
        order.sort_by(|&i, &j| energies[i].total_cmp(&energies[j]));

        let scale = energies.iter().fold(1.0_f64, |m, e| m.max(e.abs()));
        let merge_tol = DEGENERACY_TOL * scale;

        let mut es: Vec<f64> = Vec::with_capacity(energies.len());
        let mut cs: Vec<Complex64> = Vec::with_capacity(energies.len());
        for &i in &order {
            match es.last() {
                Some(&prev) if energies[i] - prev <= merge_tol => {
                    let last = cs.len() - 1;
                    let w = cs[last].norm_sqr() + amplitudes[i].norm_sqr();
                    cs[last] = Complex64::new(w.sqrt(), 0.0);
                }
                _ => {
                    es.push(energies[i]);
                    cs.push(amplitudes[i]);
                }
            }
        }

        let norm = cs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm < ZERO_NORM_TOL {
            return Err(StateError::ZeroNorm);
        }
        for c in &mut cs {
            *c /= norm;
        }
        let mut ps: Vec<f64> = cs.iter().map(|c| c.norm_sqr()).collect();
        let total: f64 = ps.iter().sum();
        for p in &mut ps {
            *p /= total;
        }

        Ok(Self {
            energies: es,
            amplitudes: cs,
            probabilities: ps,
            hbar,
        })
    }

    /// Equal-weight superposition of two levels, (|E_a⟩ + e^{iφ}|E_b⟩)/√2.
    pub fn equal_pair(e_a: f64, e_b: f64, phase: f64, hbar: f64) -> Result<Self, StateError> {
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        Self::with_hbar(
            vec![e_a, e_b],
            vec![Complex64::new(inv, 0.0), Complex64::from_polar(inv, phase)],
            hbar,
        )
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Level weights p_l = |c_l|², summing to one.
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Number of (merged, distinct) levels.
    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    /// Number of levels that actually carry weight.
    pub fn effective_levels(&self) -> usize {
        self.probabilities
            .iter()
            .filter(|&&p| p > EFFECTIVE_WEIGHT_TOL)
            .count()
    }

    /// True when all weight sits on a single level, so a(t) never leaves the
    /// unit circle and no passage exists.
    pub fn is_eigenstate(&self) -> bool {
        self.effective_levels() <= 1
    }

    /// True for a two-level state with weights (1/2, 1/2) within
    /// [`EQUAL_WEIGHT_TOL`].
    pub fn is_equal_two_level(&self) -> bool {
        self.dim() == 2 && (self.probabilities[0] - 0.5).abs() <= EQUAL_WEIGHT_TOL
    }

    /// Survival amplitude a(t) = Σ_l p_l e^(−iE_l t/ħ).
    pub fn survival_amplitude(&self, t: f64) -> Complex64 {
        self.probabilities
            .iter()
            .zip(&self.energies)
            .map(|(&p, &e)| Complex64::from_polar(p, -e * t / self.hbar))
            .sum()
    }

    /// |a(t)|², the probability of still finding the initial state.
    pub fn survival_probability(&self, t: f64) -> f64 {
        self.survival_amplitude(t).norm_sqr()
    }

    /// ⟨Ĥ⟩ = Σ p_l E_l.
    pub fn energy_mean(&self) -> f64 {
        self.probabilities
            .iter()
            .zip(&self.energies)
            .map(|(&p, &e)| p * e)
            .sum()
    }

    /// ΔH = sqrt(⟨(Ĥ−⟨Ĥ⟩)²⟩), computed in centred form for stability.
    pub fn energy_dispersion(&self) -> f64 {
        let mean = self.energy_mean();
        let var: f64 = self
            .probabilities
            .iter()
            .zip(&self.energies)
            .map(|(&p, &e)| p * (e - mean) * (e - mean))
            .sum();
        var.max(0.0).sqrt()
    }

    /// Same state with every energy shifted by `c` (a(t) changes only by a
    /// global phase).
    pub fn shifted(&self, c: f64) -> Self {
        let mut out = self.clone();
        for e in &mut out.energies {
            *e += c;
        }
        out
    }

    /// Same state with every energy scaled by `lambda` > 0 (times scale as
    /// 1/λ).
    pub fn scaled(&self, lambda: f64) -> Self {
        let mut out = self.clone();
        for e in &mut out.energies {
            *e *= lambda;
        }
        out
    }
}

/// One point of a survival-amplitude trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurvivalSample {
    pub t: f64,
    pub amplitude: Complex64,
    /// |amplitude|², kept alongside so consumers never recompute it
    /// inconsistently.
    pub probability: f64,
}
