//! Isotropic potentials Ṽ(k) and initial-state form factors F₀(k).
//!
//! Fourier convention: both Ṽ and F₀ carry the symmetric (2π)^{-3/2}
//! normalisation, Ṽ(k) = (2π)^{-3/2} ∫ d³r e^{-ik·r} V(r) and
//! F₀(k) = (2π)^{-3/2} ∫ d³r e^{ik·r} ρ₀(r). Mixing conventions silently
//! rescales every acceleration by powers of 2π.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::numerics::{gauss_legendre, CubicSpline};
use crate::pulse::Vec3;

/// (2π)^{-3/2}
pub fn fourier_norm() -> f64 {
    (2.0 * PI).powf(-1.5)
}

pub type RadialFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Ṽ(k) = −Z (4π/k²) (2π)^{-3/2}.
pub fn coulomb_vk(z: f64, k: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::domain(format!("charge Z must be > 0, got {z}")));
    }
    if k == 0.0 {
        return Err(Error::Singular(
            "the Coulomb transform diverges at k = 0".into(),
        ));
    }
    if !(k > 0.0) {
        return Err(Error::domain(format!("k must be > 0, got {k}")));
    }
    Ok(-z * 4.0 * PI / (k * k) * fourier_norm())
}

/// 1s form factor 16 / (4 + (k/Z)²)² · (2π)^{-3/2}.
pub fn hydrogen_f0(z: f64, k: f64) -> f64 {
    let x = k / z;
    16.0 / (4.0 + x * x).powi(2) * fourier_norm()
}

/// 1s density Z³/π e^{-2Zr}.
pub fn hydrogen_density(z: f64, r: f64) -> f64 {
    z * z * z / PI * (-2.0 * z * r).exp()
}

#[derive(Clone)]
enum PotentialKind {
    Coulomb { z: f64 },
    Custom { vk: RadialFn, vr: Option<RadialFn> },
}

/// Spherically symmetric binding potential.
#[derive(Clone)]
pub struct RadialPotential {
    kind: PotentialKind,
}

impl fmt::Debug for RadialPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            PotentialKind::Coulomb { z } => write!(f, "RadialPotential::Coulomb(Z = {z})"),
            PotentialKind::Custom { .. } => write!(f, "RadialPotential::Custom"),
        }
    }
}

impl RadialPotential {
    pub fn coulomb(z: f64) -> Result<Self> {
        if !(z > 0.0 && z.is_finite()) {
            return Err(Error::domain(format!("charge Z must be > 0, got {z}")));
        }
        Ok(RadialPotential {
            kind: PotentialKind::Coulomb { z },
        })
    }

    /// A user-supplied Ṽ(k) (already in the (2π)^{-3/2} convention).
    /// k³ Ṽ(k) must stay finite as k → 0.
    pub fn custom(vk: RadialFn, vr: Option<RadialFn>) -> Self {
        RadialPotential {
            kind: PotentialKind::Custom { vk, vr },
        }
    }

    /// Effective charge of a Coulomb potential.
    pub fn charge(&self) -> Option<f64> {
        match self.kind {
            PotentialKind::Coulomb { z } => Some(z),
            PotentialKind::Custom { .. } => None,
        }
    }

    pub fn vk(&self, k: f64) -> Result<f64> {
        match &self.kind {
            PotentialKind::Coulomb { z } => coulomb_vk(*z, k),
            PotentialKind::Custom { vk, .. } => Ok(vk(k)),
        }
    }

    pub fn vr(&self, r: f64) -> Option<f64> {
        match &self.kind {
            PotentialKind::Coulomb { z } => Some(-z / r),
            PotentialKind::Custom { vr, .. } => vr.as_ref().map(|f| f(r)),
        }
    }

    /// k³ Ṽ(k): the Jacobian-and-force factor every radial k-integral
    /// carries. Finite at k = 0 for the Coulomb potential.
    pub fn force_kernel(&self, k: f64) -> f64 {
        match &self.kind {
            PotentialKind::Coulomb { z } => -z * 4.0 * PI * k * fourier_norm(),
            PotentialKind::Custom { vk, .. } => {
                if k == 0.0 {
                    0.0
                } else {
                    k * k * k * vk(k)
                }
            }
        }
    }
}

#[derive(Clone)]
enum FormFactorKind {
    Hydrogen1s {
        z: f64,
    },
    Tabulated(Arc<TabulatedDensity>),
    Custom {
        f0: RadialFn,
        rho0: Option<RadialFn>,
    },
}

/// Radial form factor F₀(k) of an isotropic initial-state density.
#[derive(Clone)]
pub struct RadialFormFactor {
    kind: FormFactorKind,
    warnings: Vec<String>,
}

impl fmt::Debug for RadialFormFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            FormFactorKind::Hydrogen1s { z } => write!(f, "RadialFormFactor::Hydrogen1s(Z = {z})"),
            FormFactorKind::Tabulated(t) => write!(
                f,
                "RadialFormFactor::Tabulated({} samples, norm {:.6})",
                t.spline.knots().len(),
                t.norm
            ),
            FormFactorKind::Custom { .. } => write!(f, "RadialFormFactor::Custom"),
        }
    }
}

impl RadialFormFactor {
    pub fn hydrogen_1s(z: f64) -> Result<Self> {
        if !(z > 0.0 && z.is_finite()) {
            return Err(Error::domain(format!("charge Z must be > 0, got {z}")));
        }
        Ok(RadialFormFactor {
            kind: FormFactorKind::Hydrogen1s { z },
            warnings: Vec::new(),
        })
    }

    pub fn custom(f0: RadialFn, rho0: Option<RadialFn>) -> Self {
        RadialFormFactor {
            kind: FormFactorKind::Custom { f0, rho0 },
            warnings: Vec::new(),
        }
    }

    /// Charge of the analytic hydrogenic instance, `None` otherwise.
    pub fn hydrogenic_charge(&self) -> Option<f64> {
        match self.kind {
            FormFactorKind::Hydrogen1s { z } => Some(z),
            _ => None,
        }
    }

    pub fn f0(&self, k: f64) -> f64 {
        match &self.kind {
            FormFactorKind::Hydrogen1s { z } => hydrogen_f0(*z, k),
            FormFactorKind::Tabulated(t) => t.f0(k.abs()),
            FormFactorKind::Custom { f0, .. } => f0(k),
        }
    }

    pub fn rho0(&self, r: f64) -> Option<f64> {
        match &self.kind {
            FormFactorKind::Hydrogen1s { z } => Some(hydrogen_density(*z, r)),
            FormFactorKind::Tabulated(t) => Some(t.density(r)),
            FormFactorKind::Custom { rho0, .. } => rho0.as_ref().map(|f| f(r)),
        }
    }

    /// Tabulated density only: ∫ρ₀ d³r of the interpolated table.
    pub fn normalization(&self) -> Option<f64> {
        match &self.kind {
            FormFactorKind::Tabulated(t) => Some(t.norm),
            _ => None,
        }
    }

    /// Non-fatal issues found while building the form factor.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }
}

/// Radial density interpolated by a natural cubic spline with an
/// exponential tail A e^{-βr} fitted to the outermost samples.
struct TabulatedDensity {
    spline: CubicSpline,
    tail_amp: f64,
    tail_rate: f64,
    norm: f64,
    gl_x: Vec<f64>,
    gl_w: Vec<f64>,
    f0_cache: OnceLock<(CubicSpline, f64)>,
}

/// Largest k represented in the cached F₀ table; beyond it F₀ ∝ k⁻⁴.
const F0_TABLE_KMAX: f64 = 400.0;

impl TabulatedDensity {
    fn density(&self, r: f64) -> f64 {
        let r = r.abs();
        if r > self.spline.x_max() {
            self.tail_amp * (-self.tail_rate * r).exp()
        } else {
            self.spline.eval(r).max(0.0)
        }
    }

    /// ∫₀^R w(r) ρ(r) dr over the spline range, Gauss–Legendre per knot
    /// interval with panel count scaled to the oscillation of `w`.
    fn integrate_table(&self, k: f64, w: impl Fn(f64) -> f64) -> f64 {
        let knots = self.spline.knots();
        let mut total = 0.0;
        let mut edges = Vec::with_capacity(knots.len() + 1);
        if knots[0] > 0.0 {
            edges.push(0.0);
        }
        edges.extend_from_slice(knots);
        for pair in edges.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let panels = ((k * (b - a)) / 2.0).ceil().max(1.0) as usize;
            let h = (b - a) / panels as f64;
            for p in 0..panels {
                let a0 = a + p as f64 * h;
                let mid = a0 + 0.5 * h;
                let mut s = 0.0;
                for (x, wt) in self.gl_x.iter().zip(&self.gl_w) {
                    let r = mid + 0.5 * h * x;
                    s += wt * w(r) * self.spline.eval(r).max(0.0);
                }
                total += 0.5 * h * s;
            }
        }
        total
    }

    /// Direct quadrature of F₀(k); used to build the cached table.
    fn f0_direct(&self, k: f64) -> f64 {
        let r_end = self.spline.x_max();
        let (a, beta) = (self.tail_amp, self.tail_rate);
        if k == 0.0 {
            let inner = self.integrate_table(0.0, |r| r * r);
            let tail = if a > 0.0 {
                a * (-beta * r_end).exp()
                    * (r_end * r_end / beta + 2.0 * r_end / (beta * beta) + 2.0 / beta.powi(3))
            } else {
                0.0
            };
            return fourier_norm() * 4.0 * PI * (inner + tail);
        }
        let inner = self.integrate_table(k, |r| r * (k * r).sin());
        let tail = if a > 0.0 {
            // Im ∫_R^∞ r A e^{-(β - ik) r} dr = A Im[e^{-sR}(R/s + 1/s²)], s = β - ik
            let s = num_complex::Complex64::new(beta, -k);
            let v = (-s * r_end).exp() * (r_end / s + 1.0 / (s * s));
            a * v.im
        } else {
            0.0
        };
        fourier_norm() * 4.0 * PI / k * (inner + tail)
    }

    fn f0_table(&self) -> &(CubicSpline, f64) {
        self.f0_cache.get_or_init(|| {
            let mut ks: Vec<f64> = (0..=1000).map(|i| i as f64 * 0.02).collect();
            let n_log = 300;
            for i in 1..=n_log {
                ks.push(20.0 * (F0_TABLE_KMAX / 20.0).powf(i as f64 / n_log as f64));
            }
            let vals: Vec<f64> = ks.iter().map(|&k| self.f0_direct(k)).collect();
            let last = *vals.last().unwrap();
            let spline = CubicSpline::new(ks, vals).expect("k grid is strictly increasing");
            (spline, last)
        })
    }

    fn f0(&self, k: f64) -> f64 {
        let (spline, last) = self.f0_table();
        if k > F0_TABLE_KMAX {
            last * (F0_TABLE_KMAX / k).powi(4)
        } else {
            spline.eval(k)
        }
    }
}

/// Build a form factor from sampled radial density ρ₀(r) (a.u.).
///
/// The grid must be strictly increasing with r ≥ 0 and ρ₀ ≥ 0. A warning is
/// recorded when ∫ρ₀ d³r differs from 1 by more than 10⁻³.
pub fn tabulated_form_factor(r: &[f64], rho: &[f64]) -> Result<RadialFormFactor> {
    if r.len() != rho.len() {
        return Err(Error::validation("r and rho columns differ in length"));
    }
    if r.len() < 4 {
        return Err(Error::validation(
            "density table needs at least four samples",
        ));
    }
    if r.iter().chain(rho).any(|v| !v.is_finite()) {
        return Err(Error::validation(
            "density table contains non-finite values",
        ));
    }
    if r[0] < 0.0 {
        return Err(Error::validation("radii must be non-negative"));
    }
    if let Some(i) = r.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(Error::validation(format!(
            "radial grid not strictly increasing at row {}",
            i + 1
        )));
    }
    if let Some(i) = rho.iter().position(|&v| v < 0.0) {
        return Err(Error::validation(format!("negative density at row {i}")));
    }

    let spline = CubicSpline::new(r.to_vec(), rho.to_vec())?;
    let (tail_amp, tail_rate) = fit_exponential_tail(r, rho);
    let (gl_x, gl_w) = gauss_legendre(8);
    let table = TabulatedDensity {
        spline,
        tail_amp,
        tail_rate,
        norm: 0.0,
        gl_x,
        gl_w,
        f0_cache: OnceLock::new(),
    };
    let norm = table.f0_direct(0.0) / fourier_norm();
    let table = TabulatedDensity { norm, ..table };

    let mut warnings = Vec::new();
    if (norm - 1.0).abs() > 1e-3 {
        warnings.push(format!(
            "density normalisation ∫ρ₀ d³r = {norm:.6} deviates from 1 by more than 1e-3"
        ));
    }
    Ok(RadialFormFactor {
        kind: FormFactorKind::Tabulated(Arc::new(table)),
        warnings,
    })
}

/// Least-squares fit of ln ρ = ln A − βr over the last tenth of the table
/// (at least ten samples). Returns (0, 0) when no decaying tail is found.
fn fit_exponential_tail(r: &[f64], rho: &[f64]) -> (f64, f64) {
    let n = r.len();
    let m = (n / 10).max(10).min(n);
    let pts: Vec<(f64, f64)> = r[n - m..]
        .iter()
        .zip(&rho[n - m..])
        .filter(|(_, &y)| y > 0.0)
        .map(|(&x, &y)| (x, y.ln()))
        .collect();
    if pts.len() < 2 {
        return (0.0, 0.0);
    }
    let np = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / np;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / np;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return (0.0, 0.0);
    }
    let slope = sxy / sxx;
    if !(slope < 0.0) {
        return (0.0, 0.0);
    }
    let beta = -slope;
    // anchor the amplitude on the last sample so the tail is continuous
    let r_end = r[n - 1];
    let amp = rho[n - 1] * (beta * r_end).exp();
    if amp.is_finite() {
        (amp, beta)
    } else {
        (0.0, 0.0)
    }
}

/// Reads a two-column density table with header `r_au,rho_au`.
pub fn read_density_csv(path: impl AsRef<Path>) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path.as_ref())?;
    let headers = rdr.headers()?.clone();
    if headers.len() != 2 || &headers[0] != "r_au" || &headers[1] != "rho_au" {
        return Err(Error::Parse(format!(
            "density table header must be `r_au,rho_au`, found `{}`",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut r = Vec::new();
    let mut rho = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let parse = |j: usize| -> Result<f64> {
            rec.get(j)
                .and_then(|s| s.parse::<f64>().ok())
                .ok_or_else(|| {
                    Error::Parse(format!("row {}: column {} is not a number", i + 2, j + 1))
                })
        };
        r.push(parse(0)?);
        rho.push(parse(1)?);
    }
    Ok((r, rho))
}

/// ρ₀(|r − shift|): the initial density displaced by `shift`.
pub fn density_shifted(ff: &RadialFormFactor, r: Vec3, shift: Vec3) -> Result<f64> {
    ff.rho0((r - shift).norm())
        .ok_or_else(|| Error::Config("form factor carries no real-space density".into()))
}
