//! Harmonic spectra S(ω) = |D̈(ω)|²/ω² from sampled accelerations, and the
//! long-pulse Bessel-function amplitudes for one- and two-colour drives.

use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dipole::{AccelerationSeries, Target};
use crate::error::{Error, Result};
use crate::numerics::{
    bessel_jn_all, dft_real, integrate_interval, integrate_radial, QuadratureSpec, TailTreatment,
};
use crate::potentials::fourier_norm;
use crate::pulse::Vec3;
use crate::units::{CHARGE, MASS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    Raw,
    #[default]
    Max,
}

impl std::str::FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "raw" => Ok(Normalization::Raw),
            "max" => Ok(Normalization::Max),
            other => Err(Error::Config(format!(
                "unknown normalization `{other}` (expected max or raw)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumOptions {
    pub normalization: Normalization,
    /// Lowest harmonic order kept. The 1/ω² factor turns the slow envelope
    /// content below the fundamental into a large hump; cutting it keeps
    /// max-normalisation tied to the harmonic structure.
    pub order_min: f64,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions {
            normalization: Normalization::Max,
            order_min: 0.5,
        }
    }
}

/// Half-width (in harmonic orders) of the window used for peak readings.
pub const PEAK_HALF_WIDTH: f64 = 0.25;

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub omega: Vec<f64>,
    pub harmonic_order: Vec<f64>,
    pub s_raw: Vec<f64>,
    /// s_raw divided by its maximum (left at zero for a zero spectrum).
    pub s_normalized: Vec<f64>,
    pub normalization: Normalization,
    pub omega_l: f64,
}

impl Spectrum {
    fn from_raw(
        omega: Vec<f64>,
        s_raw: Vec<f64>,
        omega_l: f64,
        normalization: Normalization,
    ) -> Self {
        let max = s_raw.iter().cloned().fold(0.0, f64::max);
        let s_normalized = if max > 0.0 {
            s_raw.iter().map(|v| v / max).collect()
        } else {
            vec![0.0; s_raw.len()]
        };
        let harmonic_order = omega.iter().map(|w| w / omega_l).collect();
        Spectrum {
            omega,
            harmonic_order,
            s_raw,
            s_normalized,
            normalization,
            omega_l,
        }
    }

    /// Discrete comb S(Nω_L) = |A_N|²/(Nω_L)², max-normalised.
    pub fn from_amplitudes(amps: &[HarmonicAmplitude], omega_l: f64) -> Self {
        let omega: Vec<f64> = amps.iter().map(|a| a.n as f64 * omega_l).collect();
        let s = amps
            .iter()
            .zip(&omega)
            .map(|(a, w)| a.amplitude.norm_sqr() / (w * w))
            .collect();
        Spectrum::from_raw(omega, s, omega_l, Normalization::Max)
    }

    /// Values in the requested normalisation.
    pub fn values(&self) -> &[f64] {
        match self.normalization {
            Normalization::Raw => &self.s_raw,
            Normalization::Max => &self.s_normalized,
        }
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    pub fn with_normalization(mut self, n: Normalization) -> Self {
        self.normalization = n;
        self
    }

    fn window(&self, order: f64) -> impl Iterator<Item = usize> + '_ {
        self.harmonic_order
            .iter()
            .enumerate()
            .filter(move |(_, &h)| (h - order).abs() <= PEAK_HALF_WIDTH)
            .map(|(i, _)| i)
    }

    /// Max of the selected values within ±0.25 orders of `order`.
    pub fn peak_height(&self, order: f64) -> f64 {
        let v = self.values();
        self.window(order).map(|i| v[i]).fold(0.0, f64::max)
    }

    /// Sum of the selected values within ±0.25 orders of `order`.
    pub fn band_power(&self, order: f64) -> f64 {
        let v = self.values();
        self.window(order).map(|i| v[i]).sum()
    }

    /// Even-order band power over odd-order band power, orders 1..=max_order.
    pub fn even_odd_ratio(&self, max_order: u32) -> f64 {
        let (mut even, mut odd) = (0.0, 0.0);
        for n in 1..=max_order {
            let p = self.band_power(n as f64);
            if n % 2 == 0 {
                even += p;
            } else {
                odd += p;
            }
        }
        even / odd
    }

    /// Writes `harmonic_order,omega_au,S_normalized` (plus `S_raw` for raw
    /// normalisation) with `#` metadata lines.
    pub fn write_csv(&self, out: &mut impl Write, header: &[String]) -> Result<()> {
        for line in header {
            writeln!(out, "# {line}")?;
        }
        writeln!(out, "# omega_l_au = {:e}", self.omega_l)?;
        let raw = self.normalization == Normalization::Raw;
        writeln!(out, "# normalization = {}", if raw { "raw" } else { "max" })?;
        let mut w = csv::Writer::from_writer(out);
        if raw {
            w.write_record(["harmonic_order", "omega_au", "S_normalized", "S_raw"])?;
        } else {
            w.write_record(["harmonic_order", "omega_au", "S_normalized"])?;
        }
        for i in 0..self.len() {
            let mut rec = vec![
                format!("{:.17e}", self.harmonic_order[i]),
                format!("{:.17e}", self.omega[i]),
                format!("{:.17e}", self.s_normalized[i]),
            ];
            if raw {
                rec.push(format!("{:.17e}", self.s_raw[i]));
            }
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Parses a file written by [`Spectrum::write_csv`]. Without an `S_raw`
    /// column the normalised values stand in for the raw ones.
    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self> {
        let text = fs::read_to_string(path.as_ref())?;
        let mut omega_l = f64::NAN;
        for line in text.lines().filter_map(|l| l.strip_prefix("# ")) {
            if let Some(v) = line.strip_prefix("omega_l_au = ") {
                omega_l = v
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad omega_l_au `{v}`")))?;
            }
        }
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let headers: Vec<String> = rdr.headers()?.iter().map(String::from).collect();
        let raw = match headers.iter().map(String::as_str).collect::<Vec<_>>()[..] {
            ["harmonic_order", "omega_au", "S_normalized"] => false,
            ["harmonic_order", "omega_au", "S_normalized", "S_raw"] => true,
            _ => {
                return Err(Error::Parse(format!(
                    "unexpected spectrum header `{}`",
                    headers.join(",")
                )))
            }
        };
        let (mut h, mut om, mut sn, mut sr) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        for rec in rdr.records() {
            let rec = rec?;
            let num = |j: usize| -> Result<f64> {
                rec[j]
                    .parse()
                    .map_err(|_| Error::Parse(format!("not a number: `{}`", &rec[j])))
            };
            h.push(num(0)?);
            om.push(num(1)?);
            sn.push(num(2)?);
            if raw {
                sr.push(num(3)?);
            }
        }
        if !omega_l.is_finite() {
            omega_l = if h.is_empty() { 1.0 } else { om[0] / h[0] };
        }
        Ok(Spectrum {
            omega: om,
            harmonic_order: h,
            s_raw: if raw { sr } else { sn.clone() },
            s_normalized: sn,
            normalization: if raw {
                Normalization::Raw
            } else {
                Normalization::Max
            },
            omega_l,
        })
    }
}

/// Minimum samples per laser cycle accepted by [`spectrum_from_series`].
pub const MIN_SAMPLES_PER_CYCLE: f64 = 16.0;

/// Spectrum of a sampled acceleration with default options (max-normalised,
/// orders ≥ 0.5).
pub fn spectrum_from_series(series: &AccelerationSeries) -> Result<Spectrum> {
    spectrum_from_series_with(series, &SpectrumOptions::default())
}

pub fn spectrum_from_series_with(
    series: &AccelerationSeries,
    opts: &SpectrumOptions,
) -> Result<Spectrum> {
    series.validate()?;
    let omega_l = series.meta.omega_l;
    if !(omega_l > 0.0 && omega_l.is_finite()) {
        return Err(Error::validation("series carries no laser frequency"));
    }
    let dt = series.dt();
    let per_cycle = 2.0 * PI / (omega_l * dt);
    if per_cycle < MIN_SAMPLES_PER_CYCLE {
        return Err(Error::validation(format!(
            "series has {per_cycle:.1} samples per laser cycle, need at least {MIN_SAMPLES_PER_CYCLE}"
        )));
    }
    if !(opts.order_min > 0.0) {
        return Err(Error::validation("order_min must be > 0"));
    }
    let ft = dft_real(&series.a, dt)?;
    let w_min = opts.order_min * omega_l;
    let (mut omega, mut s) = (Vec::new(), Vec::new());
    for j in ft.positive_range() {
        let w = ft.omega[j];
        if w >= w_min {
            omega.push(w);
            s.push(ft.amplitude[j].norm_sqr() / (w * w));
        }
    }
    Ok(Spectrum::from_raw(omega, s, omega_l, opts.normalization))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicAmplitude {
    pub n: i64,
    pub amplitude: Complex64,
}

/// ∫_{-1}^{1} μ J_N(bμ) dμ = (K_N(b) − K_N(−b))/b² with
/// K_N(x) = ∫₀^x t J_N(t) dt = x J_{N+1}(x) + 2N Σ_{j≥0} J_{N+2+2j}(x).
pub fn mu_moment(n: u32, b: f64) -> f64 {
    if b == 0.0 {
        return 0.0;
    }
    let n = n as usize;
    let ab = b.abs();
    let top = (n + 2).max(ab as usize) + (15.0 * ab.cbrt()) as usize + 30;
    let jp = bessel_jn_all(top, ab);
    let k = |sign: f64| {
        // J_m(−x) = (−1)^m J_m(x)
        let par = |m: usize| if sign < 0.0 && m % 2 == 1 { -1.0 } else { 1.0 };
        let x = sign * ab;
        let mut tail = 0.0;
        let mut m = n + 2;
        while m <= top {
            tail += par(m) * jp[m];
            m += 2;
        }
        x * par(n + 1) * jp[n + 1] + 2.0 * n as f64 * tail
    };
    (k(b.signum()) - k(-b.signum())) / (b * b)
}

/// Component along α̂₀ of −iq∫d³k J_N((q/m)α₀·k) k Ṽ F₀, reduced to
/// −iq·2π∫dk k³ Ṽ F₀ ∫dμ μ J_N((q/m)|α₀|kμ).
pub fn longpulse_amplitude(
    n: u32,
    alpha0: Vec3,
    target: &Target,
    spec: &QuadratureSpec,
) -> Result<HarmonicAmplitude> {
    if n < 1 {
        return Err(Error::domain("harmonic order must be ≥ 1"));
    }
    let a = alpha0.norm();
    if a == 0.0 {
        return Ok(HarmonicAmplitude {
            n: n as i64,
            amplitude: Complex64::new(0.0, 0.0),
        });
    }
    let c = CHARGE / MASS * a;
    let spec = spec.with_tail(TailTreatment::Truncated);
    let res = integrate_radial(
        |k| target.potential.force_kernel(k) * target.form_factor.f0(k) * mu_moment(n, c * k),
        &spec,
    )?;
    Ok(HarmonicAmplitude {
        n: n as i64,
        amplitude: Complex64::new(0.0, -CHARGE) * (2.0 * PI * res.value),
    })
}

/// Harmonic comb S(Nω_L) ∝ |A_N|²/(Nω_L)² for N = 1..=n_max.
pub fn longpulse_spectrum(
    n_max: u32,
    alpha0: Vec3,
    omega_l: f64,
    target: &Target,
    spec: &QuadratureSpec,
) -> Result<Spectrum> {
    let amps: Vec<HarmonicAmplitude> = (1..=n_max)
        .into_par_iter()
        .map(|n| longpulse_amplitude(n, alpha0, target, spec))
        .collect::<Result<_>>()?;
    Ok(Spectrum::from_amplitudes(&amps, omega_l))
}

/// h(q) = 2π∫_{|q|}^∞ k Ṽ(k) F₀(k) dk: the kernel left after integrating
/// over the momentum plane perpendicular to the polarisation axis.
pub struct ProjectedKernel<'a> {
    target: &'a Target,
    spec: QuadratureSpec,
}

impl<'a> ProjectedKernel<'a> {
    pub fn new(target: &'a Target, spec: &QuadratureSpec) -> Self {
        ProjectedKernel {
            target,
            spec: *spec,
        }
    }

    pub fn eval(&self, q: f64) -> Result<f64> {
        let q = q.abs();
        if let Some(z) = self.target.hydrogenic_charge() {
            return Ok(hydrogen_projected_kernel(z, q));
        }
        if q == 0.0 {
            return Err(Error::Singular("projected kernel diverges at q = 0".into()));
        }
        let t = self.target;
        // k Ṽ F₀ = force_kernel · F₀ / k²
        let g = |k: f64| t.potential.force_kernel(k) * t.form_factor.f0(k) / (k * k);
        let mut total = 0.0;
        let mut a = q;
        let mut b = (2.0 * q).max(q + 1.0);
        // geometric panels out to where the integrand is negligible
        for _ in 0..80 {
            let r = integrate_interval(
                g,
                a,
                b,
                self.spec.rel_tol,
                self.spec.abs_tol * 1e-3,
                self.spec.max_subdivisions,
            )?;
            total += r.value;
            if r.value.abs() <= 1e-3 * self.spec.rel_tol * total.abs() && b > self.spec.k_max {
                break;
            }
            a = b;
            b *= 2.0;
        }
        Ok(2.0 * PI * total)
    }
}

/// Projected kernel of the hydrogenic pair in closed form.
fn hydrogen_projected_kernel(z: f64, q: f64) -> f64 {
    // k Ṽ F₀ = −64πZ / ((2π)³ k (4 + k²/Z²)²); with u = q²/Z²,
    // ∫_q^∞ dk / (k (4 + k²/Z²)²) = [ln((4 + u)/u) − 4/(4 + u)] / 32
    let pref = -64.0 * PI * z * fourier_norm() * fourier_norm();
    let u = q * q / (z * z);
    let inner = if u == 0.0 {
        f64::INFINITY
    } else {
        ((4.0 + u) / u).ln() - 4.0 / (4.0 + u)
    };
    2.0 * PI * pref * inner / 32.0
}

/// Smallest l_max for which |J_l(x)| < tol for every l > l_max and |x| ≤ x_max.
pub fn twocolor_l_bound(x_max: f64, tol: f64) -> i64 {
    let x = x_max.abs();
    let t = (1.06 * (1.0 / tol).ln()).powf(2.0 / 3.0);
    (x + t * x.cbrt() + 10.0).ceil() as i64
}

fn collinear_axis(a1: Vec3, a2: Vec3) -> Result<(Vec3, f64, f64)> {
    let (n1, n2) = (a1.norm(), a2.norm());
    let axis = if n1 > 0.0 {
        a1 / n1
    } else if n2 > 0.0 {
        a2 / n2
    } else {
        return Ok((Vec3::z(), 0.0, 0.0));
    };
    let p2 = a2.dot(&axis);
    if (a2 - axis * p2).norm() > 1e-12 * n2.max(n1) {
        return Err(Error::Config(
            "two-colour amplitudes require collinear quiver amplitudes".into(),
        ));
    }
    Ok((axis, a1.dot(&axis), p2))
}

/// Contributions of l ∈ `ls` to the two-colour amplitude along the common
/// polarisation axis:
/// −iq Σ_l e^{ilφ} ∫d³k J_{N−2l}((q/m)α₀₁·k) J_l((q/m)α₀₂·k) k Ṽ F₀,
/// evaluated as a line integral over k∥ against the projected kernel.
pub fn twocolor_partial(
    n: i64,
    alpha01: Vec3,
    alpha02: Vec3,
    phi: f64,
    ls: std::ops::RangeInclusive<i64>,
    target: &Target,
    spec: &QuadratureSpec,
) -> Result<HarmonicAmplitude> {
    let (_, a1, a2) = collinear_axis(alpha01, alpha02)?;
    let c = CHARGE / MASS;
    let kernel = ProjectedKernel::new(target, spec);
    let (l_lo, l_hi) = (*ls.start(), *ls.end());
    let n_top1 = (n.abs() + 2 * l_lo.abs().max(l_hi.abs())) as usize + 2;
    let n_top2 = l_lo.abs().max(l_hi.abs()) as usize + 2;
    // Re and Im of Σ_l e^{ilφ} J_{N−2l}(x1) J_l(x2), integrated over k∥ ∈ ℝ
    let sum = |k: f64, part: usize| -> f64 {
        let mut total = 0.0;
        for kk in [k, -k] {
            let x1 = c * a1 * kk;
            let x2 = c * a2 * kk;
            let j1 = bessel_jn_all(n_top1, x1);
            let j2 = bessel_jn_all(n_top2, x2);
            let signed = |j: &[f64], m: i64| {
                let v = j[m.unsigned_abs() as usize];
                if m < 0 && m % 2 != 0 {
                    -v
                } else {
                    v
                }
            };
            let mut s = 0.0;
            for l in l_lo..=l_hi {
                let w = if part == 0 {
                    (l as f64 * phi).cos()
                } else {
                    (l as f64 * phi).sin()
                };
                if w == 0.0 {
                    continue;
                }
                s += w * signed(&j1, n - 2 * l) * signed(&j2, l);
            }
            total += kk * s;
        }
        total
    };
    let spec_t = spec.with_tail(TailTreatment::Truncated);
    let mut parts = [0.0; 2];
    for (p, out) in parts.iter_mut().enumerate() {
        let err = std::cell::RefCell::new(None);
        let r = integrate_radial(
            |k| {
                if k == 0.0 {
                    return 0.0;
                }
                match kernel.eval(k) {
                    Ok(h) => sum(k, p) * h,
                    Err(e) => {
                        err.borrow_mut().get_or_insert(e);
                        0.0
                    }
                }
            },
            &spec_t,
        );
        if let Some(e) = err.into_inner() {
            return Err(e);
        }
        *out = r?.value;
    }
    Ok(HarmonicAmplitude {
        n,
        amplitude: Complex64::new(0.0, -CHARGE) * Complex64::new(parts[0], parts[1]),
    })
}

/// Two-colour amplitude summed over |l| ≤ l_max. `None` picks the smallest
/// l_max meeting the spec's relative tolerance; an explicit value below
/// that bound is rejected.
#[allow(clippy::too_many_arguments)]
pub fn twocolor_amplitude(
    n: i64,
    alpha01: Vec3,
    alpha02: Vec3,
    phi: f64,
    l_max: Option<i64>,
    target: &Target,
    spec: &QuadratureSpec,
) -> Result<HarmonicAmplitude> {
    let (_, _, a2) = collinear_axis(alpha01, alpha02)?;
    let need = if a2 == 0.0 {
        0
    } else {
        twocolor_l_bound((CHARGE / MASS * a2).abs() * spec.k_max, spec.rel_tol)
    };
    let l_max = match l_max {
        None => need,
        Some(l) if l < need => {
            return Err(Error::validation(format!(
                "l_max = {l} truncates J_l above tolerance for arguments up to {:.1}; use l_max ≥ {need}",
                (a2 * spec.k_max).abs()
            )))
        }
        Some(l) => l,
    };
    twocolor_partial(n, alpha01, alpha02, phi, -l_max..=l_max, target, spec)
}

/// Two-colour comb for N = 1..=n_max.
#[allow(clippy::too_many_arguments)]
pub fn twocolor_spectrum(
    n_max: u32,
    alpha01: Vec3,
    alpha02: Vec3,
    phi: f64,
    l_max: Option<i64>,
    omega_l: f64,
    target: &Target,
    spec: &QuadratureSpec,
) -> Result<Spectrum> {
    let amps: Vec<HarmonicAmplitude> = (1..=n_max as i64)
        .into_par_iter()
        .map(|n| twocolor_amplitude(n, alpha01, alpha02, phi, l_max, target, spec))
        .collect::<Result<_>>()?;
    Ok(Spectrum::from_amplitudes(&amps, omega_l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dipole::{accel_hydrogen_exact, accel_series, Engine, SeriesMeta};
    use crate::numerics::gauss_legendre;
    use crate::pulse::QuiverTrajectory;
    use crate::units::omega_au;

    fn series(a: Vec<f64>, dt: f64, omega_l: f64) -> AccelerationSeries {
        AccelerationSeries {
            t: (0..a.len()).map(|i| i as f64 * dt).collect(),
            a,
            meta: SeriesMeta {
                engine: "test".into(),
                omega_l,
                n_cycles: 0,
                description: String::new(),
            },
        }
    }

    #[test]
    fn pure_third_harmonic() {
        let w = 0.057;
        let n = 4096;
        let dt = 20.0 * 2.0 * PI / w / n as f64;
        let a = (0..n).map(|i| (3.0 * w * i as f64 * dt).cos()).collect();
        let s = spectrum_from_series(&series(a, dt, w)).unwrap();
        let imax = (0..s.len())
            .max_by(|&i, &j| s.s_raw[i].total_cmp(&s.s_raw[j]))
            .unwrap();
        assert!((s.harmonic_order[imax] - 3.0).abs() < 0.05);
        assert!((s.s_normalized.iter().cloned().fold(0.0, f64::max) - 1.0).abs() < 1e-15);
        assert!(s.harmonic_order.windows(2).all(|p| p[1] > p[0]));
        assert!(s.harmonic_order[0] >= 0.5);
    }

    #[test]
    fn zero_series_zero_spectrum() {
        let s = spectrum_from_series(&series(vec![0.0; 512], 1.0, 0.05)).unwrap();
        assert!(s.s_raw.iter().chain(&s.s_normalized).all(|&v| v == 0.0));
    }

    #[test]
    fn undersampled_rejected() {
        let w = 0.057;
        let dt = 2.0 * PI / w / 10.0;
        assert!(matches!(
            spectrum_from_series(&series(vec![0.0; 512], dt, w)),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn mu_moment_against_gauss_legendre() {
        let (x, w) = gauss_legendre(400);
        for n in [1u32, 2, 3, 8, 15, 31] {
            for b in [0.05, 1.0, 7.0, 40.0, 150.0, -13.0] {
                let gl: f64 = x
                    .iter()
                    .zip(&w)
                    .map(|(m, wt)| wt * m * crate::numerics::bessel_jn(n, b * m))
                    .sum();
                let an = mu_moment(n, b);
                assert!((an - gl).abs() < 1e-12, "N = {n}, b = {b}: {an} vs {gl}");
            }
        }
        assert_eq!(mu_moment(3, 0.0), 0.0);
    }

    #[test]
    fn hydrogen_projected_kernel_matches_quadrature() {
        let t = Target::hydrogen(1.0).unwrap();
        for q in [0.01, 0.3, 1.0, 4.0, 30.0] {
            let g = |k: f64| t.potential.force_kernel(k) * t.form_factor.f0(k) / (k * k);
            let num = 2.0
                * PI
                * integrate_interval(g, q, q + 1e4, 1e-12, 1e-20, 4000)
                    .unwrap()
                    .value;
            let closed = hydrogen_projected_kernel(1.0, q);
            // tail beyond q + 1e4 is below 1e-17
            assert!(
                (num / closed - 1.0).abs() < 1e-9,
                "q = {q}: {num} vs {closed}"
            );
        }
    }

    /// A_N is the Fourier coefficient (1/T)∫ a(t) e^{-iNωt} dt of the
    /// periodic acceleration driven by α₀ sin ωt.
    #[test]
    fn longpulse_matches_fourier_coefficients_of_periodic_acceleration() {
        let t = Target::hydrogen(1.0).unwrap();
        let a0 = 3.0;
        let m = 4096;
        let samples: Vec<f64> = (0..m)
            .map(|i| accel_hydrogen_exact(a0 * (2.0 * PI * i as f64 / m as f64).sin(), 1.0))
            .collect();
        let spec = QuadratureSpec {
            rel_tol: 1e-10,
            ..QuadratureSpec::default()
        };
        for n in 1..=9u32 {
            let coef: Complex64 = samples
                .iter()
                .enumerate()
                .map(|(i, &a)| {
                    a * Complex64::from_polar(1.0, -2.0 * PI * (n as f64) * i as f64 / m as f64)
                })
                .sum::<Complex64>()
                / m as f64;
            let amp = longpulse_amplitude(n, a0 * Vec3::z(), &t, &spec)
                .unwrap()
                .amplitude;
            if n % 2 == 0 {
                assert_eq!(amp.norm(), 0.0);
                assert!(coef.norm() < 1e-12);
            } else {
                assert!(
                    (amp - coef).norm() < 1e-7 * coef.norm().max(1e-3),
                    "N = {n}: {amp} vs {coef}"
                );
                assert!(amp.re.abs() <= 1e-10 * amp.norm());
            }
        }
    }

    #[test]
    fn longpulse_zero_amplitude() {
        let t = Target::hydrogen(1.0).unwrap();
        for n in [1, 2, 7] {
            let a = longpulse_amplitude(n, Vec3::zeros(), &t, &QuadratureSpec::default()).unwrap();
            assert_eq!(a.amplitude.norm(), 0.0);
        }
    }

    #[test]
    fn twocolor_reduces_to_single_colour() {
        let t = Target::hydrogen(1.0).unwrap();
        let spec = QuadratureSpec {
            rel_tol: 1e-10,
            k_max: 400.0,
            ..QuadratureSpec::default()
        };
        let a1 = 2.0 * Vec3::z();
        for n in 1..=6 {
            let two = twocolor_amplitude(n, a1, Vec3::zeros(), 0.7, None, &t, &spec).unwrap();
            let one = longpulse_amplitude(n as u32, a1, &t, &spec).unwrap();
            if n % 2 == 0 {
                assert_eq!(two.amplitude.norm(), 0.0);
            } else {
                assert!(
                    (two.amplitude - one.amplitude).norm() < 1e-6 * one.amplitude.norm(),
                    "N = {n}: {} vs {}",
                    two.amplitude,
                    one.amplitude
                );
            }
        }
    }

    /// Direct time-domain Fourier coefficient for the two-colour drive.
    #[test]
    fn twocolor_matches_time_domain_coefficients() {
        let t = Target::hydrogen(1.0).unwrap();
        let (a1, a2, phi) = (2.0, 0.6, 0.4);
        let m = 4096;
        let samples: Vec<f64> = (0..m)
            .map(|i| {
                let th = 2.0 * PI * i as f64 / m as f64;
                accel_hydrogen_exact(a1 * th.sin() + a2 * (2.0 * th + phi).sin(), 1.0)
            })
            .collect();
        let spec = QuadratureSpec {
            rel_tol: 1e-9,
            k_max: 100.0,
            ..QuadratureSpec::default()
        };
        for n in 1..=6i64 {
            let coef: Complex64 = samples
                .iter()
                .enumerate()
                .map(|(i, &a)| {
                    a * Complex64::from_polar(1.0, -2.0 * PI * (n as f64) * i as f64 / m as f64)
                })
                .sum::<Complex64>()
                / m as f64;
            let amp = twocolor_amplitude(n, a1 * Vec3::z(), a2 * Vec3::z(), phi, None, &t, &spec)
                .unwrap()
                .amplitude;
            assert!(
                (amp - coef).norm() < 1e-6 * coef.norm(),
                "N = {n}: {amp} vs {coef}"
            );
        }
    }

    #[test]
    fn twocolor_parity_audit() {
        let t = Target::hydrogen(1.0).unwrap();
        let spec = QuadratureSpec {
            k_max: 60.0,
            ..QuadratureSpec::default()
        };
        let (a1, a2) = (2.0 * Vec3::z(), 0.6 * Vec3::z());
        for n in 1..=4i64 {
            for l in -3..=3i64 {
                let c = twocolor_partial(n, a1, a2, 0.3, l..=l, &t, &spec).unwrap();
                if (n + l) % 2 == 0 {
                    assert_eq!(c.amplitude.norm(), 0.0, "N = {n}, l = {l}");
                }
            }
        }
        let even = twocolor_partial(2, a1, a2, 0.3, 1..=1, &t, &spec).unwrap();
        assert!(even.amplitude.norm() > 0.0);
    }

    #[test]
    fn twocolor_l_truncation() {
        let t = Target::hydrogen(1.0).unwrap();
        let spec = QuadratureSpec {
            k_max: 40.0,
            ..QuadratureSpec::default()
        };
        let (a1, a2) = (2.0 * Vec3::z(), 0.6 * Vec3::z());
        let need = twocolor_l_bound(0.6 * 40.0, spec.rel_tol);
        let base = twocolor_amplitude(4, a1, a2, 0.0, Some(need), &t, &spec).unwrap();
        let double = twocolor_amplitude(4, a1, a2, 0.0, Some(2 * need), &t, &spec).unwrap();
        assert!(
            (base.amplitude.norm() - double.amplitude.norm()).abs()
                < spec.rel_tol * base.amplitude.norm()
        );
        assert!(matches!(
            twocolor_amplitude(4, a1, a2, 0.0, Some(need - 5), &t, &spec),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            twocolor_amplitude(4, a1, Vec3::x(), 0.0, None, &t, &spec),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn finite_pulse_peaks_and_csv_round_trip() {
        let w = omega_au(800.0).unwrap();
        let tr = QuiverTrajectory::finite_sin2(9.25 * Vec3::z(), w, 10).unwrap();
        let t = Target::hydrogen(1.0).unwrap();
        let se = accel_series(&tr, Engine::Exact, &t, 4096, &QuadratureSpec::default()).unwrap();
        let s = spectrum_from_series(&se).unwrap();
        for n in [1.0, 3.0, 5.0, 7.0] {
            assert!(
                s.peak_height(n) > 10.0 * s.peak_height(n + 1.0),
                "order {n}"
            );
        }
        let dir = tempfile::tempdir().unwrap();
        for norm in [Normalization::Max, Normalization::Raw] {
            let s = s.clone().with_normalization(norm);
            let p = dir.path().join("s.csv");
            let mut buf = Vec::new();
            s.write_csv(&mut buf, &[]).unwrap();
            std::fs::write(&p, buf).unwrap();
            let back = Spectrum::read_csv(&p).unwrap();
            assert_eq!(back.harmonic_order, s.harmonic_order);
            assert_eq!(back.s_normalized, s.s_normalized);
            if norm == Normalization::Raw {
                assert_eq!(back, s);
            }
        }
    }
}
