//! Simultaneous passage for statistical mixtures of two-level states.
//!
//! Each member of an ensemble is an equal-weight two-level state, so its own
//! zeros sit at the odd multiples of πħ/ΔE. A time at which *every* member is
//! orthogonal to where it started therefore exists iff the gap ratios are
//! rational with odd numerator and odd denominator, and the earliest one is
//! found by walking odd multiples of the first member's passage time.
//!
//! The mixture itself is tracked as a density matrix over the union of the
//! members' levels; unitary evolution only rotates its off-diagonal entries,
//! so trace, hermiticity, and positivity are conserved and easy to audit.

use crate::rational::approximate_rational;
use crate::state::EnergyState;
use num_complex::Complex64;
use thiserror::Error;

/// Allowed deviation of ensemble weights from summing to one.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;
/// Default cap on the odd multiples tried for a simultaneous passage.
pub const DEFAULT_K_MAX: u64 = 10_000;
/// Shift added to the diagonal before the positivity check, absorbing
/// harmless rounding in eigenvalues at zero.
pub const PSD_SHIFT: f64 = 1e-10;

#[derive(Debug, Error, PartialEq)]
pub enum EnsembleError {
    #[error("ensemble needs at least one member")]
    EmptyEnsemble,
    #[error("member weights must be positive and sum to 1, got sum {sum}")]
    InvalidWeights { sum: f64 },
    #[error("ensemble members must be equal-weight two-level states")]
    NotTwoLevelEqual,
    #[error("members must share one hbar")]
    MixedHbar,
    #[error("member gap ratios are not all rational; no simultaneous passage time exists")]
    IncommensurateEnsemble,
}

/// One mixture component: an equal-weight two-level state and its
/// statistical weight.
#[derive(Debug, Clone)]
pub struct EnsembleMember {
    pub state: EnergyState,
    pub weight: f64,
}

impl EnsembleMember {
    /// Builds a member (|E_a⟩ + e^{iφ}|E_b⟩)/√2 with the given weight.
    pub fn new(
        e_a: f64,
        e_b: f64,
        phase: f64,
        weight: f64,
        hbar: f64,
    ) -> Result<Self, crate::state::StateError> {
        Ok(Self {
            state: EnergyState::equal_pair(e_a, e_b, phase, hbar)?,
            weight,
        })
    }
}

/// A normalised mixture of equal-weight two-level states.
#[derive(Debug, Clone)]
pub struct Ensemble {
    members: Vec<EnsembleMember>,
    hbar: f64,
}

impl Ensemble {
    pub fn new(members: Vec<EnsembleMember>) -> Result<Self, EnsembleError> {
        if members.is_empty() {
            return Err(EnsembleError::EmptyEnsemble);
        }
        let sum: f64 = members.iter().map(|m| m.weight).sum();
        if members
            .iter()
            .any(|m| !(m.weight.is_finite() && m.weight > 0.0))
            || (sum - 1.0).abs() > WEIGHT_SUM_TOL
        {
            return Err(EnsembleError::InvalidWeights { sum });
        }
        if members.iter().any(|m| !m.state.is_equal_two_level()) {
            return Err(EnsembleError::NotTwoLevelEqual);
        }
        let hbar = members[0].state.hbar();
        if members.iter().any(|m| m.state.hbar() != hbar) {
            return Err(EnsembleError::MixedHbar);
        }
        Ok(Self { members, hbar })
    }

    pub fn members(&self) -> &[EnsembleMember] {
        &self.members
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Energy gap of each member.
    fn gaps(&self) -> Vec<f64> {
        self.members
            .iter()
            .map(|m| m.state.energies()[1] - m.state.energies()[0])
            .collect()
    }
}

/// Earliest time at which every member of the ensemble is orthogonal to its
/// own initial state.
///
/// Member m vanishes exactly at t = k·πħ/Δ_m for odd k. Writing each gap
/// ratio Δ_m/Δ_1 = p_m/q_m in lowest terms, a time k₁πħ/Δ_1 works iff
/// q_m divides k₁p_m with an odd quotient for every m — which has solutions
/// precisely when all ratios are odd/odd, the smallest being
/// k₁ = lcm(q_m). Odd k₁ up to `k_max` are tried in order, so the returned
/// time is minimal; `Ok(None)` reports a parity obstruction (no simultaneous
/// passage at any time), and an irrational gap ratio is an error.
pub fn ensemble_passage_time(
    ensemble: &Ensemble,
    k_max: u64,
) -> Result<Option<f64>, EnsembleError> {
    let gaps = ensemble.gaps();
    let base = gaps[0];
    let ratios: Vec<(u64, u64)> = gaps
        .iter()
        .map(|&g| {
            approximate_rational(
                g / base,
                crate::rational::DEFAULT_TOL,
                crate::rational::DEFAULT_MAX_DENOMINATOR,
            )
            .ok_or(EnsembleError::IncommensurateEnsemble)
        })
        .collect::<Result<_, _>>()?;

    let mut k1: u64 = 1;
    while k1 <= k_max {
        let simultaneous = ratios.iter().all(|&(p, q)| {
            let kp = k1 * p;
            kp.is_multiple_of(q) && (kp / q) % 2 == 1
        });
        if simultaneous {
            return Ok(Some(
                k1 as f64 * std::f64::consts::PI * ensemble.hbar() / base,
            ));
        }
        k1 += 2;
    }
    Ok(None)
}

/// |a_m(t)| for each member: all ≈ 0 exactly at a simultaneous passage.
pub fn verify_member_orthogonality(ensemble: &Ensemble, t: f64) -> Vec<f64> {
    ensemble
        .members
        .iter()
        .map(|m| m.state.survival_amplitude(t).norm())
        .collect()
}

/// A mixture state over a merged level basis, stored dense row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    energies: Vec<f64>,
    elements: Vec<Complex64>,
    hbar: f64,
}

impl DensityMatrix {
    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn element(&self, i: usize, j: usize) -> Complex64 {
        self.elements[i * self.dim() + j]
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.element(i, i).re).collect()
    }

    pub fn trace(&self) -> f64 {
        self.diagonal().iter().sum()
    }

    /// Largest entry of |ρ − ρ†|.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.element(i, j) - self.element(j, i).conj()).norm());
            }
        }
        worst
    }

    /// Positive semidefiniteness via a Cholesky factorisation of ρ + shift·I:
    /// it succeeds iff that shifted matrix is positive definite, so rank
    /// deficiency and rounding at zero are tolerated up to `shift`.
    pub fn is_positive_semidefinite(&self, shift: f64) -> bool {
        let n = self.dim();
        let mut l = vec![Complex64::new(0.0, 0.0); n * n];
        for j in 0..n {
            let mut d = self.element(j, j).re + shift;
            for k in 0..j {
                d -= l[j * n + k].norm_sqr();
            }
            if d <= 0.0 {
                return false;
            }
            let djj = d.sqrt();
            l[j * n + j] = Complex64::new(djj, 0.0);
            for i in (j + 1)..n {
                let mut s = self.element(i, j);
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k].conj();
                }
                l[i * n + j] = s / djj;
            }
        }
        true
    }
}

/// Merge tolerance when unioning member levels into one basis.
const BASIS_MERGE_TOL: f64 = 1e-12;

/// Assembles ρ = Σ_m w_m |ψ_m⟩⟨ψ_m| over the union of all member levels.
pub fn density_matrix(ensemble: &Ensemble) -> DensityMatrix {
    let mut energies: Vec<f64> = ensemble
        .members
        .iter()
        .flat_map(|m| m.state.energies().iter().copied())
        .collect();
    energies.sort_by(f64::total_cmp);
    let scale = energies.iter().fold(1.0_f64, |m, e| m.max(e.abs()));
    energies.dedup_by(|b, a| *b - *a <= BASIS_MERGE_TOL * scale);

    let index_of = |e: f64| -> usize {
        energies
            .iter()
            .position(|&u| (u - e).abs() <= BASIS_MERGE_TOL * scale)
            .expect("member level missing from union basis")
    };

    let n = energies.len();
    let mut elements = vec![Complex64::new(0.0, 0.0); n * n];
    for m in &ensemble.members {
        let idx: Vec<usize> = m.state.energies().iter().map(|&e| index_of(e)).collect();
        let amps = m.state.amplitudes();
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                elements[i * n + j] += m.weight * amps[a] * amps[b].conj();
            }
        }
    }
    DensityMatrix {
        energies,
        elements,
        hbar: ensemble.hbar,
    }
}

/// Evolves ρ for time t: ρ_kl ↦ ρ_kl e^(−i(E_k−E_l)t/ħ). Diagonal entries —
/// and with them trace and level populations — are exactly invariant.
pub fn evolve_density(rho: &DensityMatrix, t: f64) -> DensityMatrix {
    let n = rho.dim();
    let mut out = rho.clone();
    for k in 0..n {
        for l in 0..n {
            let phase =
                Complex64::from_polar(1.0, -(rho.energies[k] - rho.energies[l]) * t / rho.hbar);
            out.elements[k * n + l] = rho.elements[k * n + l] * phase;
        }
    }
    out
}
