//! Scenario orchestration: turns a [`RunConfig`] into CSV files.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use log::{info, warn};
use rayon::prelude::*;

use crate::config::{RunConfig, Scenario, TargetConfig};
use crate::dipole::{accel_series, AccelerationSeries, Engine, Target};
use crate::error::{Error, Result};
use crate::numerics::QuadratureSpec;
use crate::potentials::{
    density_shifted, read_density_csv, tabulated_form_factor, RadialPotential,
};
use crate::pulse::{QuiverTrajectory, Vec3};
use crate::spectrum::{
    longpulse_spectrum, spectrum_from_series_with, twocolor_amplitude, HarmonicAmplitude,
    Normalization, Spectrum, SpectrumOptions,
};
use crate::tfa::{emission_times, gabor};
use crate::units::{field_amplitude_au, omega_au, LaserParams, CHARGE, MASS};

/// Command-line overrides applied on top of a loaded configuration.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub output_dir: Option<PathBuf>,
    pub engine: Option<Engine>,
    pub normalize: Option<Normalization>,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut RunConfig) {
        if let Some(d) = &self.output_dir {
            cfg.output_dir = d.clone();
        }
        if let Some(e) = self.engine {
            cfg.engine = e;
        }
        if let Some(n) = self.normalize {
            cfg.normalize = n;
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunReport {
    pub files: Vec<PathBuf>,
    /// Non-fatal findings, e.g. density normalisation warnings.
    pub warnings: Vec<String>,
}

/// Time samples for a pulse: 4096 per ten cycles, raised so that α(t)
/// moves by at most ~1/(4Z) a.u. between samples (8πα₀Z per cycle).
pub fn default_n_samples(alpha0: f64, z: f64, n_cycles: u32) -> usize {
    let base = (4096 * n_cycles as usize).div_ceil(10);
    let per_cycle = (8.0 * std::f64::consts::PI * alpha0 * z).ceil() as usize;
    base.max(per_cycle * n_cycles as usize)
}

struct Ctx<'a> {
    cfg: &'a RunConfig,
    target: Target,
    spec: QuadratureSpec,
    header: Vec<String>,
    report: RunReport,
}

pub fn run(cfg: &RunConfig) -> Result<RunReport> {
    let diags = cfg.validate();
    if !diags.is_empty() {
        let list: Vec<String> = diags.iter().map(|d| d.to_string()).collect();
        return Err(Error::Config(list.join("; ")));
    }
    let mut report = RunReport::default();
    let target = build_target(&cfg.target, &mut report)?;
    fs::create_dir_all(&cfg.output_dir)?;
    let mut header = vec![
        format!("kh-hhg {}", env!("CARGO_PKG_VERSION")),
        format!("scenario = {}", cfg.scenario.name()),
    ];
    header.extend(
        cfg.to_toml()
            .lines()
            .filter(|l| !l.is_empty())
            .map(|l| format!("config: {l}")),
    );
    for w in &report.warnings {
        header.push(format!("warning: {w}"));
    }
    let mut ctx = Ctx {
        cfg,
        target,
        spec: cfg.numerics.quadrature(),
        header,
        report,
    };
    info!("running scenario {}", cfg.scenario.name());
    match cfg.scenario {
        Scenario::Fig1 => ctx.fig1()?,
        Scenario::Spectrum => ctx.spectrum()?,
        Scenario::Longpulse => ctx.longpulse()?,
        Scenario::Twocolor => ctx.twocolor()?,
        Scenario::Gabor => ctx.gabor()?,
        Scenario::EllipticityScan => ctx.ellipticity_scan()?,
        Scenario::WavelengthScan => ctx.wavelength_scan()?,
    }
    Ok(ctx.report)
}

fn build_target(t: &TargetConfig, report: &mut RunReport) -> Result<Target> {
    match t {
        TargetConfig::Hydrogen { z } => Target::hydrogen(*z),
        TargetConfig::DensityTable { path, z } => {
            let (r, rho) = read_density_csv(path)?;
            let ff = tabulated_form_factor(&r, &rho)?;
            for w in ff.warnings() {
                warn!("{}: {w}", path.display());
                report.warnings.push(w.clone());
            }
            Ok(Target::new(RadialPotential::coulomb(*z)?, ff))
        }
    }
}

/// Writes through a temporary sibling and renames it into place.
pub fn write_atomic(path: &Path, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    let name = path
        .file_name()
        .ok_or_else(|| Error::Config(format!("{} is not a file path", path.display())))?
        .to_string_lossy()
        .into_owned();
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    let res = (|| {
        let mut w = BufWriter::new(File::create(&tmp)?);
        body(&mut w)?;
        w.flush()?;
        w.into_inner().map_err(|e| e.into_error())?.sync_all()?;
        Ok(())
    })();
    match res {
        Ok(()) => {
            fs::rename(&tmp, path)?;
            Ok(())
        }
        Err(e) => {
            let _ = fs::remove_file(&tmp);
            Err(e)
        }
    }
}

impl Ctx<'_> {
    fn out(&self, name: &str) -> PathBuf {
        self.cfg.output_dir.join(name)
    }

    fn record(&mut self, p: PathBuf) {
        info!("wrote {}", p.display());
        self.report.files.push(p);
    }

    fn write_series(&mut self, name: &str, s: &AccelerationSeries) -> Result<()> {
        let p = self.out(name);
        write_atomic(&p, |w| s.write_csv(&mut { w }, &self.header))?;
        self.record(p);
        Ok(())
    }

    fn write_spectrum(&mut self, name: &str, s: &Spectrum, extra: &[String]) -> Result<()> {
        let p = self.out(name);
        let mut h = self.header.clone();
        h.extend_from_slice(extra);
        write_atomic(&p, |w| s.write_csv(&mut { w }, &h))?;
        self.record(p);
        Ok(())
    }

    fn write_table(
        &mut self,
        name: &str,
        cols: &[&str],
        rows: &[Vec<f64>],
        extra: &[String],
    ) -> Result<()> {
        let p = self.out(name);
        write_atomic(&p, |w| {
            for l in self.header.iter().chain(extra) {
                writeln!(w, "# {l}")?;
            }
            let mut c = csv::Writer::from_writer(w);
            c.write_record(cols)?;
            for r in rows {
                c.write_record(r.iter().map(|v| format!("{v:.17e}")))?;
            }
            c.flush()?;
            Ok(())
        })?;
        self.record(p);
        Ok(())
    }

    fn laser(&self, wavelength_nm: f64) -> Result<LaserParams> {
        let l = &self.cfg.laser;
        LaserParams::new(wavelength_nm, l.intensity_w_cm2, l.n_cycles)
    }

    fn trajectory(&self, params: &LaserParams, ellipticity: f64) -> Result<QuiverTrajectory> {
        QuiverTrajectory::from_laser(params)?.with_ellipticity(ellipticity)
    }

    fn n_samples(&self, traj: &QuiverTrajectory) -> usize {
        self.cfg.numerics.n_samples.unwrap_or_else(|| {
            default_n_samples(traj.peak_bound(), self.cfg.target.z(), traj.n_cycles())
        })
    }

    fn spectrum_options(&self) -> SpectrumOptions {
        SpectrumOptions {
            normalization: self.cfg.normalize,
            order_min: self.cfg.spectrum.order_min,
        }
    }

    fn series(&self, traj: &QuiverTrajectory, engine: Engine) -> Result<AccelerationSeries> {
        accel_series(traj, engine, &self.target, self.n_samples(traj), &self.spec)
    }

    fn fig1(&mut self) -> Result<()> {
        let f = self.cfg.fig1.clone();
        let z = self.cfg.target.z();
        let ff = self.target.form_factor.clone();
        let shift = |a: f64| Vec3::z() * (CHARGE / MASS * a);
        let mut rows = Vec::with_capacity(f.n_points);
        for i in 0..f.n_points {
            let zz =
                f.z_range[0] + (f.z_range[1] - f.z_range[0]) * i as f64 / (f.n_points - 1) as f64;
            let r = Vec3::new(f.x0, 0.0, zz);
            let v = -z / r.norm();
            let plus = density_shifted(&ff, r, shift(f.alpha))? * f.density_scale;
            let minus = density_shifted(&ff, r, shift(-f.alpha))? * f.density_scale;
            rows.push(vec![zz, v, plus, minus]);
        }
        let extra = vec![
            format!("x0_au = {}", f.x0),
            format!("alpha_au = ±{}", f.alpha),
            format!("densities multiplied by {}", f.density_scale),
        ];
        self.write_table(
            "fig1.csv",
            &[
                "z_au",
                "potential_au",
                "rho_alpha_plus_au",
                "rho_alpha_minus_au",
            ],
            &rows,
            &extra,
        )?;
        let mut force = Vec::new();
        for a in [f.alpha, -f.alpha] {
            let acc = self
                .target
                .acceleration(self.cfg.engine, Vec3::z() * a, &self.spec)?;
            force.push(vec![a, acc.z]);
        }
        self.write_table("fig1_force.csv", &["alpha_au", "accel_au"], &force, &[])
    }

    fn spectrum(&mut self) -> Result<()> {
        let params = self.laser(self.cfg.laser.wavelength_nm)?;
        let traj = self.trajectory(&params, self.cfg.laser.ellipticity)?;
        let series = self.series(&traj, self.cfg.engine)?;
        self.write_series("accel.csv", &series)?;
        let opts = self.spectrum_options();
        let s = spectrum_from_series_with(&series, &opts)?;
        self.write_spectrum(
            "spectrum.csv",
            &s,
            &[format!("engine = {}", self.cfg.engine)],
        )?;
        if self.cfg.spectrum.include_peaking {
            let ps = self.series(&traj, Engine::Peaking)?;
            let s = spectrum_from_series_with(&ps, &opts)?;
            self.write_spectrum("spectrum_peaking.csv", &s, &["engine = peaking".into()])?;
        }
        if self.cfg.spectrum.include_longpulse {
            self.longpulse()?;
        }
        Ok(())
    }

    fn longpulse(&mut self) -> Result<()> {
        let params = self.laser(self.cfg.laser.wavelength_nm)?;
        let a0 = params.quiver_amplitude()? * Vec3::z();
        let s = longpulse_spectrum(
            self.cfg.spectrum.n_max,
            a0,
            params.omega()?,
            &self.target,
            &self.spec,
        )?
        .with_normalization(self.cfg.normalize);
        self.write_spectrum(
            "longpulse.csv",
            &s,
            &["infinitely long pulse, discrete comb".into()],
        )
    }

    fn twocolor(&mut self) -> Result<()> {
        let params = self.laser(self.cfg.laser.wavelength_nm)?;
        let sc = self.cfg.laser.second_color.clone().expect("validated");
        let w = params.omega()?;
        let a01 = params.quiver_amplitude()?;
        let a02 = match (sc.alpha_ratio, sc.intensity_w_cm2) {
            (Some(r), _) => r * a01,
            (None, Some(i)) if i > 0.0 => field_amplitude_au(i)? / (4.0 * w * w),
            (None, Some(_)) => 0.0,
            (None, None) => unreachable!("validated"),
        };
        let (v1, v2) = (a01 * Vec3::z(), a02 * Vec3::z());
        let l_max = self.cfg.spectrum.l_max;
        let (target, spec) = (&self.target, &self.spec);
        let amps: Vec<HarmonicAmplitude> = (1..=self.cfg.spectrum.n_max as i64)
            .into_par_iter()
            .map(|n| twocolor_amplitude(n, v1, v2, sc.phi, l_max, target, spec))
            .collect::<Result<_>>()?;
        let s = Spectrum::from_amplitudes(&amps, w).with_normalization(self.cfg.normalize);
        let extra = vec![
            format!("alpha01_au = {a01}"),
            format!("alpha02_au = {a02}"),
            format!("phi = {}", sc.phi),
        ];
        self.write_spectrum("twocolor.csv", &s, &extra)?;
        let rows: Vec<Vec<f64>> = amps
            .iter()
            .map(|a| vec![a.n as f64, a.amplitude.re, a.amplitude.im])
            .collect();
        self.write_table(
            "twocolor_amplitudes.csv",
            &["harmonic_order", "re_amplitude_au", "im_amplitude_au"],
            &rows,
            &extra,
        )
    }

    fn gabor(&mut self) -> Result<()> {
        let params = self.laser(self.cfg.laser.wavelength_nm)?;
        let traj = self.trajectory(&params, self.cfg.laser.ellipticity)?;
        let series = self.series(&traj, self.cfg.engine)?;
        self.write_series("accel.csv", &series)?;
        let g = self.cfg.gabor.clone();
        let w = traj.omega();
        let t_grid = crate::tfa::default_t_grid(&series, g.n_times);
        let n_w = ((g.order_max - g.order_min) / g.order_step + 1e-9).floor() as usize + 1;
        let omega_grid: Vec<f64> = (0..n_w)
            .map(|i| (g.order_min + g.order_step * i as f64) * w)
            .collect();
        let map = gabor(&series, g.tau_au, &t_grid, &omega_grid)?;
        let p = self.out("gabor.csv");
        write_atomic(&p, |out| map.write_csv(&mut { out }, &self.header))?;
        self.record(p);
        let times = emission_times(&map, (g.band[0], g.band[1]))?;
        let period = 2.0 * std::f64::consts::PI / traj.omega();
        let rows: Vec<Vec<f64>> = times.iter().map(|&t| vec![t, t / period]).collect();
        self.write_table(
            "emission_times.csv",
            &["t_au", "t_cycles"],
            &rows,
            &[format!("band orders {} to {}", g.band[0], g.band[1])],
        )?;
        let peak = traj.peak_bound();
        let rows: Vec<Vec<f64>> = t_grid
            .iter()
            .map(|&t| vec![t, traj.alpha(t).map(|a| a.norm() / peak).unwrap_or(0.0)])
            .collect();
        self.write_table("quiver.csv", &["t_au", "alpha_abs_normalized"], &rows, &[])
    }

    fn ellipticity_scan(&mut self) -> Result<()> {
        let params = self.laser(self.cfg.laser.wavelength_nm)?;
        let order = self.cfg.spectrum.report_order;
        let mut rows = Vec::new();
        for eps in self.cfg.scan.ellipticities.clone() {
            let traj = self.trajectory(&params, eps)?;
            let series = self.series(&traj, self.cfg.engine)?;
            let s = spectrum_from_series_with(&series, &self.spectrum_options())?;
            self.write_spectrum(
                &format!("spectrum_eps{eps}.csv"),
                &s,
                &[format!("ellipticity = {eps}")],
            )?;
            let raw = s
                .clone()
                .with_normalization(Normalization::Raw)
                .peak_height(order);
            let norm = s.with_normalization(Normalization::Max).peak_height(order);
            rows.push(vec![eps, order, raw, norm]);
        }
        self.write_table(
            "scan.csv",
            &[
                "ellipticity",
                "harmonic_order",
                "peak_raw",
                "peak_normalized",
            ],
            &rows,
            &[],
        )
    }

    fn wavelength_scan(&mut self) -> Result<()> {
        let order = self.cfg.spectrum.report_order;
        let mut rows = Vec::new();
        for lambda in self.cfg.scan.wavelengths_nm.clone() {
            omega_au(lambda)?;
            let params = self.laser(lambda)?;
            let traj = self.trajectory(&params, self.cfg.laser.ellipticity)?;
            let series = self.series(&traj, self.cfg.engine)?;
            let s = spectrum_from_series_with(&series, &self.spectrum_options())?;
            self.write_spectrum(
                &format!("spectrum_{lambda}nm.csv"),
                &s,
                &[format!("wavelength_nm = {lambda}")],
            )?;
            let raw = s
                .clone()
                .with_normalization(Normalization::Raw)
                .peak_height(order);
            let norm = s.with_normalization(Normalization::Max).peak_height(order);
            rows.push(vec![lambda, order, raw, norm]);
        }
        self.write_table(
            "scan.csv",
            &[
                "wavelength_nm",
                "harmonic_order",
                "peak_raw",
                "peak_normalized",
            ],
            &rows,
            &[],
        )
    }
}
