//! Special functions, quadrature, interpolation and the discrete Fourier transform.

mod bessel;
mod dft;
mod quadrature;
mod spline;

pub use bessel::{bessel_jn, bessel_jn_all, bessel_jn_signed, spherical_j1};
pub use dft::{dft, dft_real, padded_len, DftResult};
pub use quadrature::{
    gauss_legendre, integrate_interval, integrate_radial, QuadResult, QuadratureSpec, TailTreatment,
};
pub use spline::CubicSpline;
