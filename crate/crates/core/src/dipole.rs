//! Leading-order dipole acceleration in the Kramers–Henneberger frame.
//!
//! To leading order the acceleration is the Coulomb force of the field-free
//! ground-state charge cloud on a point charge displaced by the quiver
//! amplitude. Three engines evaluate it: the hydrogen closed form, the
//! peaking approximation, and the general k-space integral.

use std::f64::consts::PI;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{integrate_radial, spherical_j1, QuadratureSpec};
use crate::potentials::{RadialFormFactor, RadialPotential};
use crate::pulse::{QuiverTrajectory, Vec3};
use crate::units::{CHARGE, MASS};

/// α̃ = |qα/m|·Z, the quiver excursion in units of the orbital radius.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct AlphaTilde(f64);

impl AlphaTilde {
    pub fn new(alpha: f64, z: f64) -> Self {
        AlphaTilde((CHARGE * alpha / MASS).abs() * z)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Below this α̃ the braces lose digits to cancellation and are summed as
/// a series instead.
const SERIES_SWITCH: f64 = 1.0;

/// {1 + e^{-2ã}[-2ã(ã+1) - 1]} / ã²
fn braces_over_sq(at: f64) -> f64 {
    if at < 1e-100 {
        return 4.0 / 3.0 * at;
    }
    let x = 2.0 * at;
    if at < SERIES_SWITCH {
        // braces = 1 − e^{-x}(1 + x + x²/2) = e^{-x} Σ_{k≥3} x^k/k!
        let mut term = x * x * x / 6.0;
        let mut sum = term;
        let mut k = 3.0;
        while term > 1e-17 * sum {
            k += 1.0;
            term *= x / k;
            sum += term;
        }
        (-x).exp() * sum / (at * at)
    } else {
        let e = (-x).exp();
        (1.0 + e * (-2.0 * at * (at + 1.0) - 1.0)) / (at * at)
    }
}

/// Hydrogen 1s closed form for the acceleration along α (a.u.):
/// q sgn(α) Z (m²/α²q²) {1 + e^{-2α̃}[-2α̃(α̃+1) - 1]}.
///
/// Slope at the origin is -(4/3)Z⁴ (Gauss's law inside a 1s cloud of
/// charge Z).
pub fn accel_hydrogen_exact(alpha_z: f64, z: f64) -> f64 {
    let at = AlphaTilde::new(alpha_z, z).value();
    if at == 0.0 {
        return 0.0;
    }
    // m²/(α²q²) = Z²/α̃² with α̃ = |qα/m| Z
    CHARGE * sgn(alpha_z) * z * z * z * braces_over_sq(at)
}

/// Peaking approximation -q·2·sgn(α)·e^{-2α̃}, with sgn(0) = 0. Defined
/// only up to an overall scale.
pub fn accel_peaking(alpha_z: f64, z: f64) -> f64 {
    let at = AlphaTilde::new(alpha_z, z).value();
    -CHARGE * 2.0 * sgn(alpha_z) * (-2.0 * at).exp()
}

/// General leading-order acceleration −iq∫d³k k Ṽ F₀ e^{i(q/m)k·α}, reduced
/// to α̂·4πq∫k³ Ṽ F₀ j₁(k(q/m)|α|) dk for isotropic targets.
pub fn accel_kspace(
    alpha: Vec3,
    potential: &RadialPotential,
    ff: &RadialFormFactor,
    spec: &QuadratureSpec,
) -> Result<Vec3> {
    let norm = alpha.norm();
    if norm == 0.0 {
        return Ok(Vec3::zeros());
    }
    let c = CHARGE / MASS * norm;
    let res = integrate_radial(
        |k| potential.force_kernel(k) * ff.f0(k) * spherical_j1(c * k),
        spec,
    )?;
    Ok(alpha / norm * (4.0 * PI * CHARGE * res.value))
}

/// Overlap ⟨ψ₀|ψ₀(· − (q/m)α)⟩ of displaced 1s states: e^{-α̃}(1 + α̃ + α̃²/3).
pub fn c0_overlap(alpha_z: f64, z: f64) -> f64 {
    let at = AlphaTilde::new(alpha_z, z).value();
    (-at).exp() * (1.0 + at + at * at / 3.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Exact,
    Peaking,
    Kspace,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Exact => "exact",
            Engine::Peaking => "peaking",
            Engine::Kspace => "kspace",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Engine::Exact),
            "peaking" => Ok(Engine::Peaking),
            "kspace" => Ok(Engine::Kspace),
            other => Err(Error::Config(format!(
                "unknown engine `{other}` (expected exact, peaking or kspace)"
            ))),
        }
    }
}

/// Binding potential together with the initial-state form factor.
#[derive(Debug, Clone)]
pub struct Target {
    pub potential: RadialPotential,
    pub form_factor: RadialFormFactor,
}

impl Target {
    pub fn hydrogen(z: f64) -> Result<Self> {
        Ok(Target {
            potential: RadialPotential::coulomb(z)?,
            form_factor: RadialFormFactor::hydrogen_1s(z)?,
        })
    }

    pub fn new(potential: RadialPotential, form_factor: RadialFormFactor) -> Self {
        Target {
            potential,
            form_factor,
        }
    }

    /// Z when potential and density are both the analytic hydrogenic pair.
    pub fn hydrogenic_charge(&self) -> Option<f64> {
        match (
            self.potential.charge(),
            self.form_factor.hydrogenic_charge(),
        ) {
            (Some(a), Some(b)) if a == b => Some(a),
            _ => None,
        }
    }

    /// Checks that `engine` can evaluate this target.
    pub fn check_engine(&self, engine: Engine) -> Result<()> {
        if engine != Engine::Kspace && self.hydrogenic_charge().is_none() {
            return Err(Error::Config(format!(
                "the {engine} engine requires a hydrogenic target; use kspace"
            )));
        }
        Ok(())
    }

    /// Acceleration vector at quiver amplitude `alpha`.
    pub fn acceleration(&self, engine: Engine, alpha: Vec3, spec: &QuadratureSpec) -> Result<Vec3> {
        match engine {
            Engine::Kspace => accel_kspace(alpha, &self.potential, &self.form_factor, spec),
            Engine::Exact | Engine::Peaking => {
                self.check_engine(engine)?;
                let z = self.hydrogenic_charge().unwrap_or(1.0);
                let n = alpha.norm();
                if n == 0.0 {
                    return Ok(Vec3::zeros());
                }
                let f = if engine == Engine::Exact {
                    accel_hydrogen_exact(n, z)
                } else {
                    accel_peaking(n, z)
                };
                Ok(alpha / n * f)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesMeta {
    pub engine: String,
    pub omega_l: f64,
    pub n_cycles: u32,
    pub description: String,
}

/// Sampled acceleration projected on one axis.
#[derive(Debug, Clone, PartialEq)]
pub struct AccelerationSeries {
    pub t: Vec<f64>,
    pub a: Vec<f64>,
    pub meta: SeriesMeta,
}

impl AccelerationSeries {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn dt(&self) -> f64 {
        if self.t.len() < 2 {
            0.0
        } else {
            self.t[1] - self.t[0]
        }
    }

    /// Checks uniform spacing and finite values.
    pub fn validate(&self) -> Result<()> {
        if self.t.len() != self.a.len() {
            return Err(Error::validation("t and a differ in length"));
        }
        if self.t.len() < 2 {
            return Err(Error::validation("series needs at least two samples"));
        }
        let dt = self.dt();
        if !(dt > 0.0) {
            return Err(Error::validation("time grid must be increasing"));
        }
        let span = self.t[self.t.len() - 1] - self.t[0];
        for (i, w) in self.t.windows(2).enumerate() {
            if ((w[1] - w[0]) - dt).abs() > 1e-9 * span.max(dt) {
                return Err(Error::validation(format!(
                    "time grid not uniform at sample {i}"
                )));
            }
        }
        if self.a.iter().any(|v| !v.is_finite()) {
            return Err(Error::validation("acceleration contains non-finite values"));
        }
        Ok(())
    }

    /// Writes `t_au,accel_au` with `#` metadata lines.
    pub fn write_csv(&self, out: &mut impl Write, header: &[String]) -> Result<()> {
        for line in header {
            writeln!(out, "# {line}")?;
        }
        writeln!(out, "# engine = {}", self.meta.engine)?;
        writeln!(out, "# omega_l_au = {:e}", self.meta.omega_l)?;
        writeln!(out, "# n_cycles = {}", self.meta.n_cycles)?;
        writeln!(out, "# pulse = {}", self.meta.description)?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t_au", "accel_au"])?;
        for (t, a) in self.t.iter().zip(&self.a) {
            w.write_record([format!("{t:.17e}"), format!("{a:.17e}")])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self> {
        let text = fs::read_to_string(path.as_ref())?;
        let mut meta = SeriesMeta {
            engine: String::new(),
            omega_l: 0.0,
            n_cycles: 0,
            description: String::new(),
        };
        for line in text.lines().filter_map(|l| l.strip_prefix("# ")) {
            if let Some((k, v)) = line.split_once(" = ") {
                match k {
                    "engine" => meta.engine = v.to_string(),
                    "omega_l_au" => {
                        meta.omega_l = v
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad omega_l_au `{v}`")))?
                    }
                    "n_cycles" => {
                        meta.n_cycles = v
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad n_cycles `{v}`")))?
                    }
                    "pulse" => meta.description = v.to_string(),
                    _ => {}
                }
            }
        }
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let headers = rdr.headers()?.clone();
        if headers.iter().collect::<Vec<_>>() != ["t_au", "accel_au"] {
            return Err(Error::Parse(
                "acceleration CSV header must be `t_au,accel_au`".into(),
            ));
        }
        let (mut t, mut a) = (Vec::new(), Vec::new());
        for rec in rdr.records() {
            let rec = rec?;
            let num = |j: usize| -> Result<f64> {
                rec[j]
                    .parse()
                    .map_err(|_| Error::Parse(format!("not a number: `{}`", &rec[j])))
            };
            t.push(num(0)?);
            a.push(num(1)?);
        }
        Ok(AccelerationSeries { t, a, meta })
    }
}

fn describe(traj: &QuiverTrajectory) -> String {
    let a0 = traj.alpha0();
    let mut s = format!(
        "{:?} alpha0=({:.6},{:.6},{:.6}) omega={:.8} cycles={}",
        traj.kind(),
        a0.x,
        a0.y,
        a0.z,
        traj.omega(),
        traj.n_cycles()
    );
    if traj.ellipticity() != 0.0 {
        s.push_str(&format!(" ellipticity={}", traj.ellipticity()));
    }
    if traj.kind() == crate::pulse::PulseKind::TwoColor {
        let b = traj.alpha0_second();
        s.push_str(&format!(
            " alpha02=({:.6},{:.6},{:.6}) phi={}",
            b.x,
            b.y,
            b.z,
            traj.phi()
        ));
    }
    s
}

/// Samples the chosen engine on a closed uniform grid over the trajectory
/// and projects on the major axis α̂₀ (ẑ for a zero-amplitude pulse).
pub fn accel_series(
    traj: &QuiverTrajectory,
    engine: Engine,
    target: &Target,
    n_samples: usize,
    spec: &QuadratureSpec,
) -> Result<AccelerationSeries> {
    let a0 = traj.alpha0();
    let axis = if a0.norm() > 0.0 {
        a0.normalize()
    } else {
        Vec3::z()
    };
    accel_series_projected(traj, engine, target, n_samples, spec, axis)
}

/// As [`accel_series`] with an explicit projection axis.
pub fn accel_series_projected(
    traj: &QuiverTrajectory,
    engine: Engine,
    target: &Target,
    n_samples: usize,
    spec: &QuadratureSpec,
    axis: Vec3,
) -> Result<AccelerationSeries> {
    target.check_engine(engine)?;
    spec.validate()?;
    let min = 4 * traj.n_cycles() as usize;
    if n_samples < min.max(2) {
        return Err(Error::validation(format!(
            "{n_samples} samples is below two per half-cycle ({min} for {} cycles)",
            traj.n_cycles()
        )));
    }
    let an = axis.norm();
    if !(an > 0.0 && an.is_finite()) {
        return Err(Error::domain("projection axis must be a non-zero vector"));
    }
    let axis = axis / an;
    let (t, alphas) = traj.sample_grid(n_samples)?;
    let a = alphas
        .par_iter()
        .map(|&al| target.acceleration(engine, al, spec).map(|v| v.dot(&axis)))
        .collect::<Result<Vec<f64>>>()?;
    Ok(AccelerationSeries {
        t,
        a,
        meta: SeriesMeta {
            engine: engine.name().to_string(),
            omega_l: traj.omega(),
            n_cycles: traj.n_cycles(),
            description: describe(traj),
        },
    })
}
