//! Certified search for the earliest passage time.
//!
//! The passage time is the first t > 0 with a(t) = 0. Two families admit
//! closed forms:
//!
//! * equal-weight two-level states — zeros at odd multiples of πħ/ΔE;
//! * three-level states with weights {1/2, 1/4, 1/4} — writing the two gaps
//!   from the half-weight level as g_min ≤ g_max, a zero requires both
//!   quarter-weight phasors to reach −1 simultaneously, which happens iff
//!   g_max/g_min = p/q with p, q both odd, and then first at t = qπħ/g_min.
//!
//! Everything else is handled numerically: scan a window at 16 samples per
//! period of the fastest oscillation, refine every bracketed local minimum of
//! |a| with Brent's method, and promote near-zeros to a multiplicity-aware
//! Newton polish (tangential zeros make |a| quartic around its minimum, where
//! derivative-free refinement alone stalls). A passage is reported only when
//! the final residual |a(t)| actually beats the zero tolerance — the closed
//! forms are verified the same way before they are trusted, so nearly-equal
//! weights fall through to the honest numeric answer.

use crate::bounds::fleming_bound;
use crate::minimize::brent_min;
use crate::rational::{analyze_with, approximate_rational};
use crate::state::{EnergyState, SurvivalSample, EFFECTIVE_WEIGHT_TOL, EQUAL_WEIGHT_TOL};
use num_complex::Complex64;
use thiserror::Error;

/// A time is accepted as a zero of a(t) only if |a(t)| falls below this.
pub const DEFAULT_ZERO_TOL: f64 = 1e-10;
/// Default tolerance on |fleming_ratio − 1| for attainment classification.
pub const DEFAULT_ATTAINMENT_TOL: f64 = 1e-6;
/// Refined minima below this are worth a Newton polish.
const PROMOTE_TOL: f64 = 1e-6;
/// Hard cap on scan-grid size; longer windows are truncated, not thinned.
const MAX_GRID_STEPS: usize = 20_000_000;
/// Windows searched when the spectrum has no recurrence period, in units of
/// the dispersion bound.
const APERIODIC_WINDOW_FLEMINGS: f64 = 100.0;

#[derive(Debug, Error, PartialEq)]
pub enum SolverError {
    #[error("an eigenstate never evolves to an orthogonal state")]
    EigenstateInput,
    #[error("search window must be a positive finite time, got {t_max}")]
    InvalidWindow { t_max: f64 },
    #[error("a scan needs at least two samples, got {n}")]
    InvalidSampleCount { n: usize },
}

/// How a passage time (or its absence) was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Closed form for equal-weight two-level states.
    ExactTwoLevel,
    /// Closed form for {1/2, 1/4, 1/4} three-level states.
    ExactSymmetric,
    /// Scan + refine + polish over a finite window.
    Numeric,
}

/// Where the passage time sits relative to the dispersion bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Attainment {
    /// The bound is met with equality (up to tolerance).
    Attains,
    /// A passage exists but takes strictly longer than the bound.
    Exceeds,
    /// No passage was found.
    NoPassage,
}

#[derive(Debug, Clone)]
pub struct SolverOptions {
    /// Upper end of the searched window; `None` lets the solver pick one
    /// period of the motion (or a multiple of the dispersion bound when the
    /// spectrum never recurs).
    pub t_max: Option<f64>,
    /// Residual below which a time counts as an exact zero.
    pub zero_tol: f64,
    /// Allow the closed-form shortcuts before falling back to numerics.
    pub fast_paths: bool,
    /// Tolerance for rational detection of frequency ratios.
    pub rational_tol: f64,
    /// Denominator cap for rational detection.
    pub max_denominator: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            t_max: None,
            zero_tol: DEFAULT_ZERO_TOL,
            fast_paths: true,
            rational_tol: crate::rational::DEFAULT_TOL,
            max_denominator: crate::rational::DEFAULT_MAX_DENOMINATOR,
        }
    }
}

/// Outcome of a passage search.
#[derive(Debug, Clone, PartialEq)]
pub struct PassageResult {
    /// True when a certified zero of a(t) was found in the window.
    pub found: bool,
    /// The passage time, present iff `found`.
    pub time: Option<f64>,
    /// |a| at the passage time when found; otherwise the smallest |a| seen
    /// anywhere in the window.
    pub residual: f64,
    /// Where that smallest |a| sits (equals `time` when found).
    pub min_location: f64,
    /// Extent of time actually certified, [0, window].
    pub window: f64,
    /// Which route produced the answer.
    pub method: Method,
    /// time ÷ dispersion bound, present iff `found`.
    pub fleming_ratio: Option<f64>,
}

/// Finds the earliest time at which the state becomes orthogonal to itself.
///
/// Returns `found = false` (with the global minimum of |a| as evidence) when
/// no zero exists in the window — lopsided weights, even-ratio spectra, and
/// incommensurate spectra all end up there.
pub fn find_passage(
    state: &EnergyState,
    opts: &SolverOptions,
) -> Result<PassageResult, SolverError> {
    if state.is_eigenstate() {
        return Err(SolverError::EigenstateInput);
    }
    if let Some(tm) = opts.t_max {
        if !(tm.is_finite() && tm > 0.0) {
            return Err(SolverError::InvalidWindow { t_max: tm });
        }
    }
    let fleming = fleming_bound(state).as_f64();

    if opts.fast_paths {
        if let Some(result) = exact_two_level(state, opts, fleming) {
            return Ok(result);
        }
        if let Some(result) = exact_symmetric(state, opts, fleming) {
            return Ok(result);
        }
    }
    numeric_search(state, opts, fleming)
}

/// Closed form for equal-weight two-level states: t = πħ/ΔE.
fn exact_two_level(
    state: &EnergyState,
    opts: &SolverOptions,
    fleming: f64,
) -> Option<PassageResult> {
    if !state.is_equal_two_level() {
        return None;
    }
    let gap = state.energies()[1] - state.energies()[0];
    let t = std::f64::consts::PI * state.hbar() / gap;
    certify_exact(state, t, opts, fleming, Method::ExactTwoLevel)
}

/// Closed form for three-level states with weights {1/2, 1/4, 1/4} in any
/// arrangement: both quarter phasors must hit −1 together, which needs the
/// gap ratio odd/odd and first happens at t = qπħ/g_min.
fn exact_symmetric(
    state: &EnergyState,
    opts: &SolverOptions,
    fleming: f64,
) -> Option<PassageResult> {
    let occupied: Vec<(f64, f64)> = state
        .probabilities()
        .iter()
        .zip(state.energies())
        .filter(|(&p, _)| p > EFFECTIVE_WEIGHT_TOL)
        .map(|(&p, &e)| (p, e))
        .collect();
    if occupied.len() != 3 {
        return None;
    }
    let half = occupied
        .iter()
        .position(|&(p, _)| (p - 0.5).abs() <= EQUAL_WEIGHT_TOL)?;
    let quarters: Vec<f64> = occupied
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != half)
        .map(|(_, &(p, e))| {
            if (p - 0.25).abs() <= EQUAL_WEIGHT_TOL {
                Some(e)
            } else {
                None
            }
        })
        .collect::<Option<Vec<f64>>>()?;
    let e_half = occupied[half].1;
    let g1 = (quarters[0] - e_half).abs();
    let g2 = (quarters[1] - e_half).abs();
    let (g_min, g_max) = if g1 <= g2 { (g1, g2) } else { (g2, g1) };

    let (p, q) = approximate_rational(g_max / g_min, opts.rational_tol, opts.max_denominator)?;
    if p % 2 == 0 || q % 2 == 0 {
        // provably no simultaneous −1 alignment for exactly symmetric
        // weights; the numeric path reports the honest minimum instead
        return None;
    }
    let t = q as f64 * std::f64::consts::PI * state.hbar() / g_min;
    certify_exact(state, t, opts, fleming, Method::ExactSymmetric)
}

/// Accepts a closed-form candidate only when it fits the window and its
/// residual verifies; otherwise the caller falls back to numerics.
fn certify_exact(
    state: &EnergyState,
    t: f64,
    opts: &SolverOptions,
    fleming: f64,
    method: Method,
) -> Option<PassageResult> {
    if let Some(tm) = opts.t_max {
        if t > tm {
            return None;
        }
    }
    let residual = state.survival_amplitude(t).norm();
    if residual >= opts.zero_tol {
        return None;
    }
    Some(PassageResult {
        found: true,
        time: Some(t),
        residual,
        min_location: t,
        window: t,
        method,
        fleming_ratio: Some(t / fleming),
    })
}

/// Occupied levels in a form convenient for the numeric scan: raw energies
/// for the amplitude, mean-centred frequencies for the polish derivatives.
struct Occupied {
    energies: Vec<f64>,
    probs: Vec<f64>,
    hbar: f64,
    nu: Vec<f64>,
    omega_ref: f64,
}

impl Occupied {
    fn of(state: &EnergyState) -> Self {
        let pairs: Vec<(f64, f64)> = state
            .probabilities()
            .iter()
            .zip(state.energies())
            .filter(|(&p, _)| p > EFFECTIVE_WEIGHT_TOL)
            .map(|(&p, &e)| (p, e))
            .collect();
        let probs: Vec<f64> = pairs.iter().map(|&(p, _)| p).collect();
        let energies: Vec<f64> = pairs.iter().map(|&(_, e)| e).collect();
        let hbar = state.hbar();
        let mean: f64 = probs.iter().zip(&energies).map(|(&p, &e)| p * e).sum();
        let nu: Vec<f64> = energies.iter().map(|&e| (e - mean) / hbar).collect();
        let omega_ref = nu.iter().fold(0.0_f64, |m, &v| m.max(v.abs()));
        Self {
            energies,
            probs,
            hbar,
            nu,
            omega_ref,
        }
    }

    fn amp_norm(&self, t: f64) -> f64 {
        self.probs
            .iter()
            .zip(&self.energies)
            .map(|(&p, &e)| Complex64::from_polar(p, -e * t / self.hbar))
            .sum::<Complex64>()
            .norm()
    }

    /// k-th derivative of the phase-reduced amplitude
    /// b(t) = Σ p_l e^(−iν_l t); |b| = |a| and its zeros coincide with a's.
    fn b_deriv(&self, t: f64, k: u32) -> Complex64 {
        self.probs
            .iter()
            .zip(&self.nu)
            .map(|(&p, &nu)| Complex64::new(0.0, -nu).powu(k) * Complex64::from_polar(p, -nu * t))
            .sum()
    }
}

fn numeric_search(
    state: &EnergyState,
    opts: &SolverOptions,
    fleming: f64,
) -> Result<PassageResult, SolverError> {
    let occ = Occupied::of(state);
    let width = occ.energies.last().unwrap() - occ.energies.first().unwrap();
    let structure = analyze_with(state, opts.rational_tol, opts.max_denominator);

    // one recurrence period certifies all time; otherwise the caller's
    // window, or a fixed multiple of the dispersion bound
    let mut window = match (opts.t_max, structure.period) {
        (Some(tm), Some(period)) => tm.min(period),
        (Some(tm), None) => tm,
        (None, Some(period)) => period,
        (None, None) => APERIODIC_WINDOW_FLEMINGS * fleming,
    };

    // 16 samples per period of the fastest oscillation of |a|²
    let dt_target = std::f64::consts::PI * occ.hbar / (8.0 * width);
    let mut steps = (window / dt_target).ceil() as usize;
    if steps > MAX_GRID_STEPS {
        steps = MAX_GRID_STEPS;
        window = dt_target * steps as f64;
    }
    let steps = steps.max(16);
    let dt = window / steps as f64;

    let f = |t: f64| occ.amp_norm(t);
    let zero_tol = opts.zero_tol;
    let promote = PROMOTE_TOL.max(zero_tol);

    let mut f_km2 = f(0.0);
    let mut f_km1 = f(dt);
    let (mut best_t, mut best_f) = (0.0, f_km2);
    if f_km1 < best_f {
        (best_t, best_f) = (dt, f_km1);
    }

    for k in 2..=steps {
        let t_k = k as f64 * dt;
        let f_k = f(t_k);
        if f_k < best_f {
            (best_t, best_f) = (t_k, f_k);
        }
        if f_km1 <= f_km2 && f_km1 <= f_k {
            let lo = t_k - 2.0 * dt;
            let (mut x, mut fx) = brent_min(f, lo, t_k, 1e-14 * t_k.max(1.0), 120);
            if fx < promote {
                if let Some((xp, fxp)) =
                    newton_polish(&occ, x, (lo - dt).max(0.0), (t_k + dt).min(window), fx)
                {
                    (x, fx) = (xp, fxp);
                }
            }
            if fx < best_f {
                (best_t, best_f) = (x, fx);
            }
            if fx < zero_tol {
                return Ok(PassageResult {
                    found: true,
                    time: Some(x),
                    residual: fx,
                    min_location: x,
                    window,
                    method: Method::Numeric,
                    fleming_ratio: Some(x / fleming),
                });
            }
        }
        (f_km2, f_km1) = (f_km1, f_k);
    }

    Ok(PassageResult {
        found: false,
        time: None,
        residual: best_f,
        min_location: best_t,
        window,
        method: Method::Numeric,
        fleming_ratio: None,
    })
}

/// Threshold on |b^(k)|/ω_ref^k above which the k-th derivative counts as
/// nonzero when reading off the multiplicity of a candidate zero.
const MULTIPLICITY_TOL: f64 = 1e-4;
const MAX_MULTIPLICITY: u32 = 4;
const NEWTON_ITERS: usize = 12;

/// Newton refinement of a near-zero of |a|.
///
/// A zero of multiplicity m (m = 2 wherever the amplitude touches zero
/// tangentially) is a *simple* zero of b^(m−1), so Newton steps
/// t ← t − Re(b^(m−1)/b^(m)) converge quadratically where direct
/// minimisation of |a| flattens out. Returns the polished point only when it
/// stays inside [lo, hi] and strictly improves the residual.
fn newton_polish(occ: &Occupied, t0: f64, lo: f64, hi: f64, f0: f64) -> Option<(f64, f64)> {
    if occ.omega_ref <= 0.0 {
        return None;
    }
    let mut m = 0;
    for k in 1..=MAX_MULTIPLICITY {
        if occ.b_deriv(t0, k).norm() / occ.omega_ref.powi(k as i32) > MULTIPLICITY_TOL {
            m = k;
            break;
        }
    }
    if m == 0 {
        return None;
    }

    let mut t = t0;
    for _ in 0..NEWTON_ITERS {
        let num = occ.b_deriv(t, m - 1);
        let den = occ.b_deriv(t, m);
        if den.norm() / occ.omega_ref.powi(m as i32) < 1e-12 {
            return None;
        }
        let step = (num / den).re;
        t -= step;
        if !(lo..=hi).contains(&t) {
            return None;
        }
        if step.abs() <= 1e-16 * t.abs().max(1.0) {
            break;
        }
    }
    let residual = occ.amp_norm(t);
    if residual < f0 {
        Some((t, residual))
    } else {
        None
    }
}

/// Compares a found passage time against the dispersion bound.
pub fn classify_attainment(result: &PassageResult, tol: f64) -> Attainment {
    if !result.found {
        return Attainment::NoPassage;
    }
    match result.fleming_ratio {
        Some(r) if (r - 1.0).abs() < tol => Attainment::Attains,
        Some(r) if r > 1.0 + tol => Attainment::Exceeds,
        _ => Attainment::NoPassage,
    }
}

/// Uniformly samples the survival amplitude on [0, t_max] (n points,
/// endpoints included).
pub fn survival_scan(
    state: &EnergyState,
    t_max: f64,
    n: usize,
) -> Result<Vec<SurvivalSample>, SolverError> {
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(SolverError::InvalidWindow { t_max });
    }
    if n < 2 {
        return Err(SolverError::InvalidSampleCount { n });
    }
    let dt = t_max / (n - 1) as f64;
    Ok((0..n)
        .map(|i| {
            let t = if i + 1 == n { t_max } else { i as f64 * dt };
            let amplitude = state.survival_amplitude(t);
            SurvivalSample {
                t,
                amplitude,
                probability: amplitude.norm_sqr(),
            }
        })
        .collect())
}
