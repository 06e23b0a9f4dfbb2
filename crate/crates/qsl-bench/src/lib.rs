//! Shared fixtures for the benchmark suite.

use qsl_core::{Complex64, EnergyState, Ensemble, EnsembleMember};
use std::f64::consts::FRAC_1_SQRT_2;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Equal-weight two-level state with unit gap.
pub fn equal_pair() -> EnergyState {
    EnergyState::equal_pair(0.0, 1.0, 0.0, 1.0).unwrap()
}

/// Three levels at (−1, 0, 1) with weights (1/4, 1/2, 1/4).
pub fn spin1() -> EnergyState {
    EnergyState::new(
        vec![-1.0, 0.0, 1.0],
        vec![c(0.5, 0.0), c(FRAC_1_SQRT_2, 0.0), c(0.5, 0.0)],
    )
    .unwrap()
}

/// Five commensurate levels with generic complex weights; its passage
/// search exercises the full scan-and-refine pipeline.
pub fn five_level() -> EnergyState {
    let energies = vec![0.0, 1.0, 3.0, 4.0, 6.0];
    let amplitudes = vec![
        Complex64::from_polar(0.6, 0.1),
        Complex64::from_polar(0.4, 1.3),
        Complex64::from_polar(0.5, 2.1),
        Complex64::from_polar(0.3, 4.0),
        Complex64::from_polar(0.4, 5.5),
    ];
    EnergyState::new(energies, amplitudes).unwrap()
}

/// Four-member mixture with odd gaps, so a simultaneous passage exists.
pub fn odd_gap_ensemble() -> Ensemble {
    let gaps = [1.0, 3.0, 5.0, 9.0];
    let members = gaps
        .iter()
        .map(|&g| EnsembleMember::new(0.0, g, 0.0, 0.25, 1.0).unwrap())
        .collect();
    Ensemble::new(members).unwrap()
}
