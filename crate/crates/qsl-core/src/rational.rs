//! Commensurability analysis of a discrete spectrum.
//!
//! The survival amplitude of a state over energies E_1 < … < E_N is a
//! trigonometric sum in the shifted frequencies ω_l = E_l − E_1. When all
//! ratios ω_l/ω_2 are rational the motion is periodic, and exact zeros can be
//! ruled in or out by arithmetic alone; when some ratio is irrational the sum
//! is quasi-periodic and only approximate recurrences exist.
//!
//! For an equal-weight two-level pair the zeros sit at odd multiples of
//! πħ/ΔE. Whether several such pairs can vanish *simultaneously* therefore
//! reduces to whether their frequency ratios are odd/odd rationals — hence
//! [`odd_odd_ratio`] and the `odd_odd` flag on [`RationalStructure`].

use crate::state::EnergyState;

/// Default tolerance for accepting a rational approximation to a ratio.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Default cap on the denominator of a detected ratio.
pub const DEFAULT_MAX_DENOMINATOR: u64 = 1_000_000;

/// Largest partial quotient before the continued fraction is treated as
/// terminated (the remainder is numerically indistinguishable from zero).
const HUGE_QUOTIENT: f64 = 1e15;
const MAX_CF_ITER: usize = 64;
/// Quality gate distinguishing "is this rational" from "is this near a
/// rational": a convergent is trusted only when its error is this far below
/// the ~1/q² error an irrational shows at the same denominator.
const IRRATIONALITY_MARGIN: f64 = 1e-3;

/// Detects whether `x` is a rational p/q with q ≤ `max_den`, returning the
/// fraction in lowest terms.
///
/// Walks the continued-fraction convergents of `x` and returns the first one
/// (hence smallest denominator) that passes two gates: the absolute error
/// |x − p/q| must be at most `tol`, and it must also sit well below the
/// 1/q² scale — a genuinely irrational `x` has convergent errors of order
/// 1/q², so errors near that scale mean "incidentally close", not "equal".
/// Without the second gate every real would pass: π is within 5.8e-10 of
/// 103993/33102, √2 within 1.6e-12 of 665857/470832. Both are rejected here
/// (quality ≈ 0.6 and 0.35 respectively, against a cutoff of 10⁻³), while a
/// float that *is* p/q carries only rounding error ~1e-16 and sails through.
///
/// Returns `None` for non-positive or non-finite `x`, or when no convergent
/// with q ≤ `max_den` passes both gates.
pub fn approximate_rational(x: f64, tol: f64, max_den: u64) -> Option<(u64, u64)> {
    if !x.is_finite() || x <= 0.0 {
        return None;
    }
    let quality_scale = IRRATIONALITY_MARGIN * x.max(1.0);
    // convergent recurrence: h_n = a_n h_{n-1} + h_{n-2}, same for k,
    // seeded with (h_{-2}, h_{-1}) = (0, 1) and (k_{-2}, k_{-1}) = (1, 0)
    let (mut h_prev, mut h) = (0u64, 1u64);
    let (mut k_prev, mut k) = (1u64, 0u64);
    let mut xi = x;
    for _ in 0..MAX_CF_ITER {
        if !(0.0..HUGE_QUOTIENT).contains(&xi.floor()) {
            return None;
        }
        let a = xi.floor();
        let a_int = a as u64;
        let h_next = a_int.checked_mul(h)?.checked_add(h_prev)?;
        let k_next = a_int.checked_mul(k)?.checked_add(k_prev)?;
        if k_next > max_den {
            return None;
        }
        (h_prev, h) = (h, h_next);
        (k_prev, k) = (k, k_next);
        if h > 0 {
            let err = (x - h as f64 / k as f64).abs();
            if err <= tol && err * (k as f64) * (k as f64) <= quality_scale {
                return Some((h, k));
            }
        }
        let frac = xi - a;
        if frac <= 1e-15 * xi.max(1.0) {
            // x is exactly this convergent, and it wasn't accepted
            return None;
        }
        xi = 1.0 / frac;
    }
    None
}

/// Tests whether two frequencies stand in an odd/odd rational ratio
/// ω_num/ω_den = p/q = (2m−1)/(2n−1), returning (m, n); `None` when the
/// ratio is irrational (within the detection parameters) or either side of
/// the reduced fraction is even.
///
/// Simultaneous zeros of two equal-weight pairs with these frequencies exist
/// precisely when this returns a value.
pub fn odd_odd_ratio(omega_num: f64, omega_den: f64, tol: f64, max_den: u64) -> Option<(u64, u64)> {
    if !(omega_num > 0.0 && omega_den > 0.0) {
        return None;
    }
    let (p, q) = approximate_rational(omega_num / omega_den, tol, max_den)?;
    if p % 2 == 1 && q % 2 == 1 {
        Some((p.div_ceil(2), q.div_ceil(2)))
    } else {
        None
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm_u128(a: u128, b: u128) -> Option<u128> {
    (a / gcd_u128(a, b)).checked_mul(b)
}

/// What the frequency ratios of a spectrum look like arithmetically.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalStructure {
    /// Shifted frequencies ω_l = E_l − E_min for the second level onward.
    pub frequencies: Vec<f64>,
    /// Detected reduced ratios ω_l/ω_2, one per frequency; the first entry is
    /// the trivial (1, 1). `None` marks a ratio with no rational
    /// approximation within tolerance.
    pub ratios: Vec<Option<(u64, u64)>>,
    /// True when every ratio was detected as rational.
    pub all_commensurate: bool,
    /// Recurrence period of the survival probability, 2πħ/ω_gcd, when the
    /// spectrum is commensurate and the exact integer arithmetic does not
    /// overflow. (The amplitude itself recurs up to a global phase.)
    pub period: Option<f64>,
    /// True when every detected ratio is odd/odd in lowest terms.
    pub odd_odd: bool,
}

/// Analyses a raw list of energies (deduplicated and sorted internally).
pub fn analyze_spectrum(energies: &[f64], hbar: f64, tol: f64, max_den: u64) -> RationalStructure {
    let mut es: Vec<f64> = energies.to_vec();
    es.sort_by(f64::total_cmp);
    let scale = es.iter().fold(1.0_f64, |m, e| m.max(e.abs()));
    es.dedup_by(|b, a| *b - *a <= crate::state::DEGENERACY_TOL * scale);

    let frequencies: Vec<f64> = es.iter().skip(1).map(|&e| e - es[0]).collect();
    if frequencies.is_empty() {
        return RationalStructure {
            frequencies,
            ratios: Vec::new(),
            all_commensurate: true,
            period: None,
            odd_odd: true,
        };
    }

    let base = frequencies[0];
    let ratios: Vec<Option<(u64, u64)>> = frequencies
        .iter()
        .map(|&w| approximate_rational(w / base, tol, max_den))
        .collect();
    let all_commensurate = ratios.iter().all(Option::is_some);
    let odd_odd = all_commensurate
        && ratios
            .iter()
            .flatten()
            .all(|&(p, q)| p % 2 == 1 && q % 2 == 1);

    let period = if all_commensurate {
        period_from_ratios(ratios.iter().map(|r| r.unwrap()), base, hbar)
    } else {
        None
    };

    RationalStructure {
        frequencies,
        ratios,
        all_commensurate,
        period,
        odd_odd,
    }
}

/// Analyses the occupied spectrum of a state with the default tolerances.
pub fn analyze(state: &EnergyState) -> RationalStructure {
    analyze_with(state, DEFAULT_TOL, DEFAULT_MAX_DENOMINATOR)
}

/// Analyses the occupied spectrum of a state; levels with negligible weight
/// do not influence the dynamics and are ignored.
pub fn analyze_with(state: &EnergyState, tol: f64, max_den: u64) -> RationalStructure {
    let occupied: Vec<f64> = state
        .probabilities()
        .iter()
        .zip(state.energies())
        .filter(|(&p, _)| p > crate::state::EFFECTIVE_WEIGHT_TOL)
        .map(|(_, &e)| e)
        .collect();
    analyze_spectrum(&occupied, state.hbar(), tol, max_den)
}

/// Exact period from the detected ratios: with ω_l = (p_l/q_l)·ω_2, the
/// common divisor of all frequencies is (G/L)·ω_2 for L = lcm(q_l) and
/// G = gcd(p_l·L/q_l), giving a survival-probability period 2πħL/(G·ω_2).
fn period_from_ratios(
    ratios: impl Iterator<Item = (u64, u64)>,
    base: f64,
    hbar: f64,
) -> Option<f64> {
    let pairs: Vec<(u128, u128)> = ratios.map(|(p, q)| (p as u128, q as u128)).collect();
    let mut l: u128 = 1;
    for &(_, q) in &pairs {
        l = lcm_u128(l, q)?;
    }
    let mut g: u128 = 0;
    for &(p, q) in &pairs {
        let n = p.checked_mul(l / q)?;
        g = gcd_u128(g, n);
    }
    let cycles = l / g; // exact: g divides the first entry p=q=1 ⇒ n=L
    Some(2.0 * std::f64::consts::PI * hbar * cycles as f64 / base)
}
