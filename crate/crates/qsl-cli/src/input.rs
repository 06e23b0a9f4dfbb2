//! Problem documents: the JSON object every subcommand reads from a file or
//! standard input.

use qsl_core::{Complex64, EnergyState, Ensemble, EnsembleMember};
use serde::Deserialize;

/// The input document. Unknown fields are rejected so typos surface as
/// diagnostics instead of silently changing the problem.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    /// Scale of ħ; defaults to 1 (times then come out in units of
    /// ħ/energy-unit).
    pub hbar: Option<f64>,
    /// Energy eigenvalues.
    pub energies: Option<Vec<f64>>,
    /// Complex amplitudes as [re, im] pairs, one per energy. Optional for
    /// spectrum-only commands; the vector is normalized on load.
    pub amplitudes: Option<Vec<[f64; 2]>>,
    /// A statistical mixture of equal-weight two-level members.
    pub ensemble: Option<Vec<MemberSpec>>,
    /// Optional solver settings; command-line flags take precedence.
    pub solver: Option<SolverSpec>,
}

/// One mixture member (|E_a⟩ + e^{iφ}|E_b⟩)/√2 carrying `weight`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MemberSpec {
    pub weight: f64,
    pub energies: [f64; 2],
    /// Relative phase φ; defaults to 0.
    pub phase: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSpec {
    /// Cap on the searched or sampled time window.
    pub t_max: Option<f64>,
    /// Residual below which a minimum counts as an exact zero.
    pub zero_tol: Option<f64>,
    /// Tolerance for rational detection of frequency ratios.
    pub tol: Option<f64>,
    /// Denominator cap for rational detection.
    pub max_den: Option<u64>,
}

impl ProblemSpec {
    /// Reads and parses a document from `path`, or from standard input when
    /// the path is `-`.
    pub fn load(path: &str) -> Result<Self, String> {
        let text = if path == "-" {
            let mut buf = String::new();
            std::io::Read::read_to_string(&mut std::io::stdin(), &mut buf)
                .map_err(|e| format!("cannot read standard input: {e}"))?;
            buf
        } else {
            std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?
        };
        serde_json::from_str(&text).map_err(|e| format!("invalid problem document: {e}"))
    }

    pub fn hbar(&self) -> f64 {
        self.hbar.unwrap_or(1.0)
    }

    /// The pure state required by the bounds, passage, and trajectory
    /// commands.
    pub fn state(&self) -> Result<EnergyState, String> {
        let energies = self
            .energies
            .clone()
            .ok_or("the document has no `energies` field")?;
        let amplitudes: Vec<Complex64> = self
            .amplitudes
            .as_ref()
            .ok_or("the document has no `amplitudes` field (a list of [re, im] pairs)")?
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        EnergyState::with_hbar(energies, amplitudes, self.hbar())
            .map_err(|e| format!("invalid state: {e}"))
    }

    /// The mixture required by the ensemble command.
    pub fn ensemble(&self) -> Result<Ensemble, String> {
        let members = self
            .ensemble
            .as_ref()
            .ok_or("the document has no `ensemble` field")?
            .iter()
            .map(|m| {
                EnsembleMember::new(
                    m.energies[0],
                    m.energies[1],
                    m.phase.unwrap_or(0.0),
                    m.weight,
                    self.hbar(),
                )
                .map_err(|e| format!("invalid ensemble member: {e}"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ensemble::new(members).map_err(|e| format!("invalid ensemble: {e}"))
    }
}
