//! Quantum dynamics of a charged particle in a time-dependent magnetic
//! field, reduced to a complex auxiliary oscillator.
//!
//! The crate integrates the auxiliary equation d2(eps)/dt2 + omega^2(t) eps = 0
//! for a configurable Larmor frequency profile omega(t), extracts Bogoliubov
//! coefficients at frequency zero crossings, and evaluates the resulting
//! quantum observables: Fock-to-Fock transition distributions, energy and
//! magnetic-moment statistics, and Gaussian (invariant) state evolution at
//! the covariance-matrix level.
//!
//! All core types are generic over the floating-point scalar via [`scalar::Real`];
//! `f64` aliases are re-exported at the crate root.

pub mod adiabatic;
pub mod error;
pub mod evolver;
pub mod observables;
pub mod profiles;
pub mod quad;
pub mod scalar;
pub mod scenario;
pub mod selftest;
pub mod specfun;
pub mod spectra;

pub use error::{Error, Result};

/// `f64` convenience aliases for the main generic types.
pub type Profile64 = profiles::FrequencyProfile<f64>;
pub type Trajectory64 = evolver::Trajectory<f64>;
pub type OscillatorState64 = evolver::OscillatorState<f64>;
pub type Bogoliubov64 = adiabatic::BogoliubovPair<f64>;
pub type Distribution64 = spectra::SpectralDistribution<f64>;
pub type Covariance64 = observables::CovarianceState<f64>;

/// `f32` aliases, available for quick low-precision scans.
pub type Profile32 = profiles::FrequencyProfile<f32>;
pub type Trajectory32 = evolver::Trajectory<f32>;
pub type OscillatorState32 = evolver::OscillatorState<f32>;
pub type Bogoliubov32 = adiabatic::BogoliubovPair<f32>;
