//! Passage times, speed-limit bounds, and state-space geometry for
//! finite-level quantum systems.
//!
//! The central question: given a pure state expanded over energy eigenstates,
//! how long until it first evolves into something orthogonal to itself — and
//! how close is that time to the fundamental bounds set by the energy spread
//! and the mean energy?
//!
//! * [`state`] — states over a discrete spectrum and their survival amplitude.
//! * [`bounds`] — Fleming and Margolus–Levitin lower bounds, exact two-level
//!   passage times.
//! * [`rational`] — commensurability analysis of the spectrum: rational
//!   frequency ratios, recurrence period, odd/odd structure.
//! * [`solver`] — certified earliest-passage search (exact closed forms where
//!   available, verified numerics elsewhere).
//! * [`geometry`] — Fubini–Study distances, evolution speed, path lengths,
//!   geodesic tests.
//! * [`ensemble`] — simultaneous passage for mixtures of two-level states.

#![forbid(unsafe_code)]

pub mod bounds;
pub mod ensemble;
pub mod geometry;
mod minimize;
pub mod rational;
pub mod solver;
pub mod state;

pub use bounds::{BoundsError, BoundsReport, TimeBound};
pub use ensemble::{DensityMatrix, Ensemble, EnsembleError, EnsembleMember};
pub use geometry::{EquatorConstruction, GeometryError, ProjectivePoint};
pub use num_complex::Complex64;
pub use rational::RationalStructure;
pub use solver::{Attainment, Method, PassageResult, SolverError, SolverOptions};
pub use state::{EnergyState, StateError, SurvivalSample};
