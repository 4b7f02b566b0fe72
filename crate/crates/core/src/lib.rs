//! High-harmonic spectra of one-electron atoms in the strong-field
//! approximation, evaluated in the Kramers–Henneberger frame.
//!
//! All quantities are in Hartree atomic units with electron charge q = −1
//! and mass m = 1. Fourier transforms use the symmetric (2π)^{-3/2}
//! normalisation throughout (see [`potentials`]).

// NaN-rejecting checks are written as !(x > 0.0) on purpose
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod dipole;
pub mod error;
pub mod numerics;
pub mod potentials;
pub mod pulse;
pub mod run;
pub mod spectrum;
pub mod tfa;
pub mod units;

pub use config::{Diagnostic, RunConfig, Scenario};
pub use dipole::{
    accel_hydrogen_exact, accel_kspace, accel_peaking, accel_series, c0_overlap,
    AccelerationSeries, Engine, Target,
};
pub use error::{Error, Result};
pub use numerics::{QuadratureSpec, TailTreatment};
pub use potentials::{RadialFormFactor, RadialPotential};
pub use pulse::{QuiverTrajectory, Vec3};
pub use spectrum::{
    longpulse_amplitude, longpulse_spectrum, spectrum_from_series, twocolor_amplitude,
    HarmonicAmplitude, Normalization, Spectrum,
};
pub use tfa::{emission_times, gabor, GaborMap};
pub use units::LaserParams;
