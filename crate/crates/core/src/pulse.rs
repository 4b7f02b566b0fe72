//! Quiver trajectories α(t) of a free electron in the driving field.
//!
//! The trajectory is the primary description of the laser here: the
//! Kramers–Henneberger potential is V(r + (q/m) α(t)), so neither the vector
//! potential nor the electric field is needed explicitly.

use std::f64::consts::{PI, TAU};

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::LaserParams;

pub type Vec3 = Vector3<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PulseKind {
    /// α₀ sin²(πt/T) sin(ω_L t) on [0, T].
    FiniteSin2,
    /// α₀ sin(ω_L t), the infinitely long pulse.
    Monochromatic,
    /// α₀₁ sin(ω_L t) + α₀₂ sin(2ω_L t + φ).
    TwoColor,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuiverTrajectory {
    kind: PulseKind,
    alpha0: Vec3,
    alpha0_second: Vec3,
    omega: f64,
    /// Pulse length for finite pulses; sampling window for periodic ones.
    duration: f64,
    n_cycles: u32,
    phi: f64,
    ellipticity: f64,
    minor_axis: Vec3,
}

fn check_omega(omega: f64) -> Result<()> {
    if omega.is_finite() && omega > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("omega_L must be > 0, got {omega}")))
    }
}

fn check_vec(name: &str, v: &Vec3) -> Result<()> {
    if v.iter().all(|c| c.is_finite()) {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be finite")))
    }
}

/// A unit vector perpendicular to `major`, as close to x̂ as possible.
fn perpendicular(major: &Vec3) -> Vec3 {
    let n = major.norm();
    if n == 0.0 {
        return Vec3::x();
    }
    let u = major / n;
    for trial in [Vec3::x(), Vec3::y(), Vec3::z()] {
        let p = trial - u * u.dot(&trial);
        if p.norm() > 1e-8 {
            return p.normalize();
        }
    }
    unreachable!("three axes cannot all be parallel to one vector")
}

impl QuiverTrajectory {
    fn base(kind: PulseKind, alpha0: Vec3, omega: f64, n_cycles: u32) -> Result<Self> {
        check_omega(omega)?;
        check_vec("alpha0", &alpha0)?;
        if n_cycles == 0 {
            return Err(Error::domain("n_cycles must be ≥ 1"));
        }
        Ok(QuiverTrajectory {
            kind,
            alpha0,
            alpha0_second: Vec3::zeros(),
            omega,
            duration: f64::from(n_cycles) * TAU / omega,
            n_cycles,
            phi: 0.0,
            ellipticity: 0.0,
            minor_axis: perpendicular(&alpha0),
        })
    }

    /// Finite pulse with a sin² envelope lasting `n_cycles` optical periods.
    pub fn finite_sin2(alpha0: Vec3, omega: f64, n_cycles: u32) -> Result<Self> {
        Self::base(PulseKind::FiniteSin2, alpha0, omega, n_cycles)
    }

    /// Linearly polarised (along ẑ) sin² pulse for the given laser parameters.
    pub fn from_laser(params: &LaserParams) -> Result<Self> {
        let a0 = params.quiver_amplitude()?;
        Self::finite_sin2(a0 * Vec3::z(), params.omega()?, params.n_cycles)
    }

    /// Infinitely long pulse; `n_cycles` only sets the sampling window.
    pub fn monochromatic(alpha0: Vec3, omega: f64, n_cycles: u32) -> Result<Self> {
        Self::base(PulseKind::Monochromatic, alpha0, omega, n_cycles)
    }

    /// ω + 2ω field. The two amplitudes are independent inputs.
    pub fn two_color(
        alpha01: Vec3,
        alpha02: Vec3,
        omega: f64,
        phi: f64,
        n_cycles: u32,
    ) -> Result<Self> {
        check_vec("alpha0_second", &alpha02)?;
        if !phi.is_finite() {
            return Err(Error::domain("two-color phase must be finite"));
        }
        let mut t = Self::base(PulseKind::TwoColor, alpha01, omega, n_cycles)?;
        t.alpha0_second = alpha02;
        t.phi = phi;
        Ok(t)
    }

    /// Elliptical polarisation with ε ∈ [0, 1]:
    /// α(t) = f(t) [α₀ sin(ω_L t) + ε |α₀| ê cos(ω_L t)] / √(1+ε²),
    /// with ê ⟂ α₀. ε = 0 is the linear pulse, ε = 1 circular.
    pub fn with_ellipticity(mut self, ellipticity: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&ellipticity) {
            return Err(Error::domain(format!(
                "ellipticity must lie in [0, 1], got {ellipticity}"
            )));
        }
        if self.kind == PulseKind::TwoColor && ellipticity != 0.0 {
            return Err(Error::domain(
                "two-color trajectories are linearly polarised",
            ));
        }
        self.ellipticity = ellipticity;
        Ok(self)
    }

    pub fn kind(&self) -> PulseKind {
        self.kind
    }

    pub fn alpha0(&self) -> Vec3 {
        self.alpha0
    }

    pub fn alpha0_second(&self) -> Vec3 {
        self.alpha0_second
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn n_cycles(&self) -> u32 {
        self.n_cycles
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn ellipticity(&self) -> f64 {
        self.ellipticity
    }

    /// Upper bound on |α(t)|.
    pub fn peak_bound(&self) -> f64 {
        self.alpha0.norm() + self.alpha0_second.norm()
    }

    pub fn envelope(&self, t: f64) -> f64 {
        match self.kind {
            PulseKind::FiniteSin2 => (PI * t / self.duration).sin().powi(2),
            _ => 1.0,
        }
    }

    /// α(t). Finite pulses are only defined on [0, T].
    pub fn alpha(&self, t: f64) -> Result<Vec3> {
        if self.kind == PulseKind::FiniteSin2 {
            let slack = 1e-12 * self.duration;
            if !(t >= -slack && t <= self.duration + slack) {
                return Err(Error::domain(format!(
                    "t = {t} outside the pulse [0, {}]",
                    self.duration
                )));
            }
        }
        Ok(self.alpha_at(t))
    }

    pub(crate) fn alpha_at(&self, t: f64) -> Vec3 {
        let phase = self.omega * t;
        match self.kind {
            PulseKind::TwoColor => {
                self.alpha0 * phase.sin() + self.alpha0_second * (2.0 * phase + self.phi).sin()
            }
            _ => {
                let f = self.envelope(t);
                let (s, c) = phase.sin_cos();
                if self.ellipticity == 0.0 {
                    self.alpha0 * (f * s)
                } else {
                    let e = self.ellipticity;
                    let minor = self.minor_axis * (e * self.alpha0.norm() * c);
                    (self.alpha0 * s + minor) * (f / (1.0 + e * e).sqrt())
                }
            }
        }
    }

    /// Uniform closed grid over [0, T] with `n_samples` points and α at each.
    pub fn sample_grid(&self, n_samples: usize) -> Result<(Vec<f64>, Vec<Vec3>)> {
        let t = uniform_grid(self.duration, n_samples)?;
        let a = t.iter().map(|&ti| self.alpha_at(ti)).collect();
        Ok((t, a))
    }

    /// Interior zeros t = jπ/ω_L, 0 < t < T, of a linearly polarised
    /// single-colour trajectory.
    pub fn interior_zeros(&self) -> Vec<f64> {
        let n = 2 * self.n_cycles;
        (1..n).map(|j| j as f64 * PI / self.omega).collect()
    }
}

/// Closed uniform grid {0, T/(n-1), …, T}.
pub fn uniform_grid(duration: f64, n_samples: usize) -> Result<Vec<f64>> {
    if n_samples < 2 {
        return Err(Error::domain(format!(
            "need at least two samples, got {n_samples}"
        )));
    }
    let last = (n_samples - 1) as f64;
    Ok((0..n_samples).map(|i| i as f64 / last * duration).collect())
}
