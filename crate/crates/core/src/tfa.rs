//! Gabor time-frequency analysis of a sampled acceleration.

use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;

use crate::dipole::AccelerationSeries;
use crate::error::{Error, Result};

/// Window width used for the emission-time analysis, 5π a.u.
pub const DEFAULT_TAU: f64 = 5.0 * PI;

/// The Gaussian window is cut at |t − t'| > 6τ (relative weight < 1e-7).
pub const WINDOW_CUTOFF: f64 = 6.0;

#[derive(Debug, Clone, PartialEq)]
pub struct GaborMap {
    pub t_grid: Vec<f64>,
    pub omega_grid: Vec<f64>,
    /// |G_τ(ω, t)|², row-major with one row per time.
    pub g2: Vec<f64>,
    pub tau: f64,
    pub omega_l: f64,
}

impl GaborMap {
    pub fn at(&self, it: usize, iw: usize) -> f64 {
        self.g2[it * self.omega_grid.len() + iw]
    }

    pub fn row(&self, it: usize) -> &[f64] {
        let n = self.omega_grid.len();
        &self.g2[it * n..(it + 1) * n]
    }

    /// g2 divided by its maximum.
    pub fn normalized(&self) -> Vec<f64> {
        let max = self.g2.iter().cloned().fold(0.0, f64::max);
        if max > 0.0 {
            self.g2.iter().map(|v| v / max).collect()
        } else {
            self.g2.clone()
        }
    }

    /// Long format `t_au,omega_au,G2` with max-normalised G2.
    pub fn write_csv(&self, out: &mut impl Write, header: &[String]) -> Result<()> {
        for line in header {
            writeln!(out, "# {line}")?;
        }
        writeln!(out, "# tau_au = {:e}", self.tau)?;
        writeln!(out, "# omega_l_au = {:e}", self.omega_l)?;
        writeln!(out, "# G2 normalised to its maximum")?;
        let norm = self.normalized();
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t_au", "omega_au", "G2"])?;
        for (it, t) in self.t_grid.iter().enumerate() {
            for (iw, om) in self.omega_grid.iter().enumerate() {
                w.write_record([
                    format!("{t:.17e}"),
                    format!("{om:.17e}"),
                    format!("{:.17e}", norm[it * self.omega_grid.len() + iw]),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// `n` equally spaced times spanning the series.
pub fn default_t_grid(series: &AccelerationSeries, n: usize) -> Vec<f64> {
    let (a, b) = (series.t[0], series.t[series.t.len() - 1]);
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n.max(2) - 1) as f64)
        .collect()
}

/// Harmonic orders 1..=31 in steps of 0.25, as angular frequencies.
pub fn default_omega_grid(omega_l: f64) -> Vec<f64> {
    (0..=120)
        .map(|i| (1.0 + 0.25 * i as f64) * omega_l)
        .collect()
}

/// G_τ(ω, t) = ∫dt' e^{−iωt' − (t−t')²/(2τ²)} a(t') by the trapezoid rule.
/// The acceleration is taken as zero outside the sampled interval, which
/// holds for pulses that switch on and off inside it; `t_grid` itself must
/// lie within the series.
pub fn gabor(
    series: &AccelerationSeries,
    tau: f64,
    t_grid: &[f64],
    omega_grid: &[f64],
) -> Result<GaborMap> {
    series.validate()?;
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::domain(format!("tau must be > 0, got {tau}")));
    }
    let (t0, t1) = (series.t[0], series.t[series.len() - 1]);
    let slack = 1e-9 * (t1 - t0);
    if let Some(t) = t_grid
        .iter()
        .find(|&&t| !(t >= t0 - slack && t <= t1 + slack))
    {
        return Err(Error::validation(format!(
            "t = {t} lies outside the series range [{t0}, {t1}]"
        )));
    }
    let dt = series.dt();
    let n = series.len();
    let reach = WINDOW_CUTOFF * tau;
    let rows: Vec<Vec<f64>> = t_grid
        .par_iter()
        .map(|&t| {
            let lo = (((t - reach - t0) / dt).floor().max(0.0)) as usize;
            let hi = ((((t + reach - t0) / dt).ceil()) as usize).min(n - 1);
            omega_grid
                .iter()
                .map(|&w| {
                    let (mut re, mut im) = (0.0, 0.0);
                    for j in lo..=hi {
                        let tp = series.t[j];
                        let d = t - tp;
                        // trapezoid end weights at the series edges
                        let edge = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
                        let g = edge * (-d * d / (2.0 * tau * tau)).exp() * series.a[j];
                        let (s, c) = (w * tp).sin_cos();
                        re += g * c;
                        im -= g * s;
                    }
                    (re * re + im * im) * dt * dt
                })
                .collect()
        })
        .collect();
    Ok(GaborMap {
        t_grid: t_grid.to_vec(),
        omega_grid: omega_grid.to_vec(),
        g2: rows.concat(),
        tau,
        omega_l: series.meta.omega_l,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakFilter {
    /// Minimum prominence as a fraction of the peak's own height.
    pub prominence: f64,
    /// Minimum height as a fraction of the band-power maximum.
    pub rel_height: f64,
}

impl Default for PeakFilter {
    fn default() -> Self {
        PeakFilter {
            prominence: 0.05,
            rel_height: 1e-5,
        }
    }
}

/// Frequency-integrated |G|² over harmonic orders [lo, hi], per time.
pub fn band_power(map: &GaborMap, order_range: (f64, f64)) -> Result<Vec<f64>> {
    let (lo, hi) = order_range;
    let idx: Vec<usize> = map
        .omega_grid
        .iter()
        .enumerate()
        .filter(|(_, &w)| {
            let o = w / map.omega_l;
            o >= lo - 1e-9 && o <= hi + 1e-9
        })
        .map(|(i, _)| i)
        .collect();
    if idx.is_empty() {
        return Err(Error::validation(format!(
            "no frequency in the grid falls in orders [{lo}, {hi}]"
        )));
    }
    Ok((0..map.t_grid.len())
        .map(|it| idx.iter().map(|&iw| map.at(it, iw)).sum())
        .collect())
}

/// Times of the local maxima of the band power, default peak filter.
pub fn emission_times(map: &GaborMap, order_range: (f64, f64)) -> Result<Vec<f64>> {
    emission_times_with(map, order_range, &PeakFilter::default())
}

pub fn emission_times_with(
    map: &GaborMap,
    order_range: (f64, f64),
    filter: &PeakFilter,
) -> Result<Vec<f64>> {
    let p = band_power(map, order_range)?;
    let idx = local_maxima(&p, filter);
    // quadratic refinement of each peak on the t grid
    Ok(idx
        .into_iter()
        .map(|i| {
            let t = &map.t_grid;
            if i == 0 || i + 1 >= p.len() {
                return t[i];
            }
            let (a, b, c) = (p[i - 1], p[i], p[i + 1]);
            let den = a - 2.0 * b + c;
            let shift = if den < 0.0 { 0.5 * (a - c) / den } else { 0.0 };
            t[i] + shift.clamp(-0.5, 0.5) * (t[i + 1] - t[i - 1]) / 2.0
        })
        .collect())
}

/// Indices of interior strict local maxima passing `filter`.
pub fn local_maxima(p: &[f64], filter: &PeakFilter) -> Vec<usize> {
    let max = p.iter().cloned().fold(0.0, f64::max);
    if !(max > 0.0) {
        return Vec::new();
    }
    let mut out = Vec::new();
    for i in 1..p.len().saturating_sub(1) {
        // plateaus count once, at their left edge
        if !(p[i] > p[i - 1] && p[i] >= p[i + 1]) {
            continue;
        }
        if p[i] < filter.rel_height * max {
            continue;
        }
        let base = |range: &mut dyn Iterator<Item = usize>| {
            let mut m = p[i];
            for j in range {
                if p[j] > p[i] {
                    break;
                }
                m = m.min(p[j]);
            }
            m
        };
        let left = base(&mut (0..i).rev());
        let right = base(&mut (i + 1..p.len()));
        if p[i] - left.max(right) >= filter.prominence * p[i] {
            out.push(i);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dipole::{accel_series, Engine, SeriesMeta, Target};
    use crate::numerics::QuadratureSpec;
    use crate::pulse::{QuiverTrajectory, Vec3};
    use crate::spectrum::spectrum_from_series;
    use crate::units::omega_au;

    fn series(f: impl Fn(f64) -> f64, t_end: f64, n: usize, omega_l: f64) -> AccelerationSeries {
        let t: Vec<f64> = (0..n).map(|i| t_end * i as f64 / (n - 1) as f64).collect();
        AccelerationSeries {
            a: t.iter().map(|&x| f(x)).collect(),
            t,
            meta: SeriesMeta {
                engine: "test".into(),
                omega_l,
                n_cycles: 0,
                description: String::new(),
            },
        }
    }

    fn base_series(n: usize) -> (QuiverTrajectory, AccelerationSeries) {
        let tr =
            QuiverTrajectory::finite_sin2(9.25 * Vec3::z(), omega_au(800.0).unwrap(), 10).unwrap();
        let s = accel_series(
            &tr,
            Engine::Exact,
            &Target::hydrogen(1.0).unwrap(),
            n,
            &QuadratureSpec::default(),
        )
        .unwrap();
        (tr, s)
    }

    #[test]
    fn constant_input_peaks_at_zero_frequency() {
        let s = series(|_| 1.0, 400.0, 2001, 0.5);
        let t = [150.0, 200.0, 250.0];
        let w: Vec<f64> = (0..40).map(|i| i as f64 * 0.05).collect();
        let m = gabor(&s, 10.0, &t, &w).unwrap();
        for it in 0..3 {
            let row = m.row(it);
            let imax = (0..w.len())
                .max_by(|&a, &b| row[a].total_cmp(&row[b]))
                .unwrap();
            assert_eq!(imax, 0);
        }
    }

    #[test]
    fn stationary_cosine_gives_flat_ridge() {
        let w0 = 1.3;
        let s = series(|t| (w0 * t).cos(), 600.0, 6001, 0.2);
        let t: Vec<f64> = (0..41).map(|i| 100.0 + 10.0 * i as f64).collect();
        let w: Vec<f64> = (0..81).map(|i| 0.9 + 0.01 * i as f64).collect();
        let m = gabor(&s, 10.0, &t, &w).unwrap();
        let ridge: Vec<f64> = (0..t.len())
            .map(|it| {
                let row = m.row(it);
                let imax = (0..w.len())
                    .max_by(|&a, &b| row[a].total_cmp(&row[b]))
                    .unwrap();
                assert!((w[imax] - w0).abs() < 0.011);
                row[imax]
            })
            .collect();
        let mean = ridge.iter().sum::<f64>() / ridge.len() as f64;
        assert!(ridge.iter().all(|r| (r / mean - 1.0).abs() < 0.01));
        let times = emission_times(&m, (0.9 / 0.2, 1.7 / 0.2)).unwrap();
        assert!(times.is_empty(), "{times:?}");
    }

    #[test]
    fn zero_series_has_no_emission_times() {
        let s = series(|_| 0.0, 100.0, 1001, 0.5);
        let m = gabor(&s, 5.0, &default_t_grid(&s, 64), &default_omega_grid(0.5)).unwrap();
        assert!(emission_times(&m, (5.0, 15.0)).unwrap().is_empty());
        assert!(m.g2.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn validation() {
        let s = series(|_| 0.0, 100.0, 1001, 0.5);
        assert!(gabor(&s, 0.0, &[50.0], &[1.0]).is_err());
        assert!(matches!(
            gabor(&s, 5.0, &[150.0], &[1.0]),
            Err(Error::Validation(_))
        ));
        let m = gabor(&s, 5.0, &[50.0], &[1.0]).unwrap();
        assert!(matches!(
            emission_times(&m, (5.0, 6.0)),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn emission_at_quiver_zeros_alternating_with_excursion_maxima() {
        let (tr, s) = base_series(4096);
        let t_grid = default_t_grid(&s, 512);
        let m = gabor(&s, DEFAULT_TAU, &t_grid, &default_omega_grid(tr.omega())).unwrap();
        let times = emission_times(&m, (5.0, 15.0)).unwrap();
        let zeros = tr.interior_zeros();
        let period = 2.0 * PI / tr.omega();
        assert_eq!(times.len(), zeros.len(), "{times:?}");
        for (t, z) in times.iter().zip(&zeros) {
            assert!((t - z).abs() < 0.05 * period, "{t} vs {z}");
        }
        // local maxima of |α(t)| on a fine grid
        let fine: Vec<f64> = (0..20001)
            .map(|i| tr.duration() * i as f64 / 20000.0)
            .collect();
        let amp: Vec<f64> = fine.iter().map(|&t| tr.alpha(t).unwrap().norm()).collect();
        let excursions: Vec<f64> = (1..amp.len() - 1)
            .filter(|&i| amp[i] > amp[i - 1] && amp[i] >= amp[i + 1])
            .map(|i| fine[i])
            .collect();
        for pair in times.windows(2) {
            let between = excursions
                .iter()
                .filter(|&&e| e > pair[0] && e < pair[1])
                .count();
            assert_eq!(between, 1, "between {} and {}", pair[0], pair[1]);
        }
    }

    #[test]
    fn whole_pulse_window_reproduces_global_spectrum() {
        let (tr, s) = base_series(4096);
        let w_l = tr.omega();
        let spec = spectrum_from_series(&s).unwrap();
        let orders: Vec<f64> = (0..=32).map(|i| 1.0 + 0.25 * i as f64).collect();
        let omegas: Vec<f64> = orders.iter().map(|o| o * w_l).collect();
        let mid = 0.5 * tr.duration();
        let m = gabor(&s, tr.duration(), &[mid], &omegas).unwrap();
        // global S(ω) at the same frequencies by direct summation
        let dt = s.dt();
        let glob: Vec<f64> = omegas
            .iter()
            .map(|&w| {
                let (re, im) = s.t.iter().zip(&s.a).fold((0.0, 0.0), |(re, im), (t, a)| {
                    (re + a * (w * t).cos(), im - a * (w * t).sin())
                });
                (re * re + im * im) * (dt / (2.0 * PI)).powi(2) / (w * w)
            })
            .collect();
        let _ = spec;
        let x: Vec<f64> = m
            .row(0)
            .iter()
            .zip(&omegas)
            .map(|(g, w)| (g / (w * w)).ln())
            .collect();
        let y: Vec<f64> = glob.iter().map(|v| v.ln()).collect();
        let r = correlation(&x, &y);
        assert!(r >= 0.95, "correlation {r}");
    }

    fn correlation(x: &[f64], y: &[f64]) -> f64 {
        let n = x.len() as f64;
        let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
        let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
        let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
        let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
        sxy / (sxx * syy).sqrt()
    }

    #[test]
    fn csv_is_long_format() {
        let s = series(|t| (0.5 * t).sin(), 100.0, 1001, 0.5);
        let m = gabor(&s, 5.0, &[20.0, 50.0], &[0.5, 1.0, 1.5]).unwrap();
        let mut buf = Vec::new();
        m.write_csv(&mut buf, &[]).unwrap();
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_reader(&buf[..]);
        assert_eq!(rdr.headers().unwrap(), vec!["t_au", "omega_au", "G2"]);
        let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
        assert_eq!(rows.len(), 6);
        let max = rows
            .iter()
            .map(|r| r[2].parse::<f64>().unwrap())
            .fold(0.0, f64::max);
        assert_eq!(max, 1.0);
    }
}
