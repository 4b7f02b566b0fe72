//! Run configuration: a TOML document describing one scenario.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dipole::Engine;
use crate::error::{Error, Result};
use crate::numerics::{QuadratureSpec, TailTreatment};
use crate::spectrum::Normalization;
use crate::units::LaserParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    Fig1,
    Spectrum,
    Longpulse,
    Twocolor,
    Gabor,
    EllipticityScan,
    WavelengthScan,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::Fig1 => "fig1",
            Scenario::Spectrum => "spectrum",
            Scenario::Longpulse => "longpulse",
            Scenario::Twocolor => "twocolor",
            Scenario::Gabor => "gabor",
            Scenario::EllipticityScan => "ellipticity_scan",
            Scenario::WavelengthScan => "wavelength_scan",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SecondColor {
    /// α₀₂/α₀₁ along the common polarisation axis.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_ratio: Option<f64>,
    /// Peak intensity of the 2ω field; α₀₂ = E₀₂/(2ω_L)².
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intensity_w_cm2: Option<f64>,
    #[serde(default)]
    pub phi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LaserConfig {
    pub wavelength_nm: f64,
    pub intensity_w_cm2: f64,
    pub n_cycles: u32,
    #[serde(default)]
    pub ellipticity: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub second_color: Option<SecondColor>,
}

impl LaserConfig {
    pub fn params(&self) -> Result<LaserParams> {
        LaserParams::new(self.wavelength_nm, self.intensity_w_cm2, self.n_cycles)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TargetConfig {
    Hydrogen {
        #[serde(default = "one")]
        z: f64,
    },
    /// Coulomb potential of charge `z` with a tabulated initial density.
    DensityTable {
        path: PathBuf,
        #[serde(default = "one")]
        z: f64,
    },
}

fn one() -> f64 {
    1.0
}

impl Default for TargetConfig {
    fn default() -> Self {
        TargetConfig::Hydrogen { z: 1.0 }
    }
}

impl TargetConfig {
    pub fn z(&self) -> f64 {
        match self {
            TargetConfig::Hydrogen { z } | TargetConfig::DensityTable { z, .. } => *z,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumericsConfig {
    #[serde(default = "d_rel")]
    pub rel_tol: f64,
    #[serde(default = "d_abs")]
    pub abs_tol: f64,
    #[serde(default = "d_kmax")]
    pub k_max: f64,
    #[serde(default = "d_sub")]
    pub max_subdivisions: usize,
    #[serde(default)]
    pub tail: TailTreatment,
    /// Time samples per pulse; derived from the pulse when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_samples: Option<usize>,
}

fn d_rel() -> f64 {
    QuadratureSpec::default().rel_tol
}
fn d_abs() -> f64 {
    QuadratureSpec::default().abs_tol
}
fn d_kmax() -> f64 {
    QuadratureSpec::default().k_max
}
fn d_sub() -> usize {
    QuadratureSpec::default().max_subdivisions
}

impl Default for NumericsConfig {
    fn default() -> Self {
        NumericsConfig {
            rel_tol: d_rel(),
            abs_tol: d_abs(),
            k_max: d_kmax(),
            max_subdivisions: d_sub(),
            tail: TailTreatment::default(),
            n_samples: None,
        }
    }
}

impl NumericsConfig {
    pub fn quadrature(&self) -> QuadratureSpec {
        QuadratureSpec {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            k_max: self.k_max,
            max_subdivisions: self.max_subdivisions,
            tail: self.tail,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    /// Also write the infinitely-long-pulse comb.
    #[serde(default)]
    pub include_longpulse: bool,
    /// Also write the peaking-approximation spectrum of the same pulse.
    #[serde(default)]
    pub include_peaking: bool,
    #[serde(default = "d_nmax")]
    pub n_max: u32,
    #[serde(default = "d_order_min")]
    pub order_min: f64,
    /// Order whose peak height is reported by the scans.
    #[serde(default = "d_report")]
    pub report_order: f64,
    /// Explicit |l| cut-off for two-colour sums; derived when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l_max: Option<i64>,
}

fn d_nmax() -> u32 {
    61
}
fn d_order_min() -> f64 {
    0.5
}
fn d_report() -> f64 {
    15.0
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        SpectrumConfig {
            include_longpulse: false,
            include_peaking: false,
            n_max: d_nmax(),
            order_min: d_order_min(),
            report_order: d_report(),
            l_max: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaborConfig {
    #[serde(default = "d_tau")]
    pub tau_au: f64,
    #[serde(default = "d_ntimes")]
    pub n_times: usize,
    #[serde(default = "d_omin")]
    pub order_min: f64,
    #[serde(default = "d_omax")]
    pub order_max: f64,
    #[serde(default = "d_ostep")]
    pub order_step: f64,
    /// Harmonic band whose power locates the emission times.
    #[serde(default = "d_band")]
    pub band: [f64; 2],
}

fn d_tau() -> f64 {
    crate::tfa::DEFAULT_TAU
}
fn d_ntimes() -> usize {
    512
}
fn d_omin() -> f64 {
    1.0
}
fn d_omax() -> f64 {
    31.0
}
fn d_ostep() -> f64 {
    0.25
}
fn d_band() -> [f64; 2] {
    [5.0, 15.0]
}

impl Default for GaborConfig {
    fn default() -> Self {
        GaborConfig {
            tau_au: d_tau(),
            n_times: d_ntimes(),
            order_min: d_omin(),
            order_max: d_omax(),
            order_step: d_ostep(),
            band: d_band(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fig1Config {
    #[serde(default = "d_x0")]
    pub x0: f64,
    #[serde(default = "d_alpha")]
    pub alpha: f64,
    #[serde(default = "d_scale")]
    pub density_scale: f64,
    #[serde(default = "d_zrange")]
    pub z_range: [f64; 2],
    #[serde(default = "d_npoints")]
    pub n_points: usize,
}

fn d_x0() -> f64 {
    0.2
}
fn d_alpha() -> f64 {
    5.0
}
fn d_scale() -> f64 {
    4.0
}
fn d_zrange() -> [f64; 2] {
    [-15.0, 15.0]
}
fn d_npoints() -> usize {
    601
}

impl Default for Fig1Config {
    fn default() -> Self {
        Fig1Config {
            x0: d_x0(),
            alpha: d_alpha(),
            density_scale: d_scale(),
            z_range: d_zrange(),
            n_points: d_npoints(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub wavelengths_nm: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ellipticities: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: Scenario,
    #[serde(default = "d_engine")]
    pub engine: Engine,
    #[serde(default = "d_out")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub normalize: Normalization,
    pub laser: LaserConfig,
    #[serde(default)]
    pub target: TargetConfig,
    #[serde(default)]
    pub numerics: NumericsConfig,
    #[serde(default)]
    pub spectrum: SpectrumConfig,
    #[serde(default)]
    pub gabor: GaborConfig,
    #[serde(default)]
    pub fig1: Fig1Config,
    #[serde(default)]
    pub scan: ScanConfig,
}

fn d_engine() -> Engine {
    Engine::Exact
}
fn d_out() -> PathBuf {
    PathBuf::from("out")
}

/// One problem found in a configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub field: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let mut cfg =
            Self::from_toml(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        // density tables are resolved relative to the config file
        if let TargetConfig::DensityTable { path: table, .. } = &mut cfg.target {
            if table.is_relative() {
                if let Some(dir) = path.parent() {
                    *table = dir.join(&*table);
                }
            }
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serialises")
    }

    /// Every violation found; empty iff a run would start.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let mut bad = |field: &str, message: String| {
            out.push(Diagnostic {
                field: field.to_string(),
                message,
            })
        };
        let pos = |v: f64| v.is_finite() && v > 0.0;

        let l = &self.laser;
        if !pos(l.wavelength_nm) {
            bad(
                "laser.wavelength_nm",
                format!("must be > 0, got {}", l.wavelength_nm),
            );
        }
        if !pos(l.intensity_w_cm2) {
            bad(
                "laser.intensity_w_cm2",
                format!("must be > 0, got {}", l.intensity_w_cm2),
            );
        }
        if l.n_cycles == 0 {
            bad("laser.n_cycles", "must be ≥ 1".into());
        }
        if !(0.0..=1.0).contains(&l.ellipticity) {
            bad(
                "laser.ellipticity",
                format!("must lie in [0, 1], got {}", l.ellipticity),
            );
        }
        if let Some(sc) = &l.second_color {
            match (sc.alpha_ratio, sc.intensity_w_cm2) {
                (Some(_), Some(_)) => bad(
                    "laser.second_color",
                    "give either alpha_ratio or intensity_w_cm2, not both".into(),
                ),
                (None, None) => bad(
                    "laser.second_color",
                    "needs alpha_ratio or intensity_w_cm2".into(),
                ),
                (Some(r), None) if !r.is_finite() => {
                    bad("laser.second_color.alpha_ratio", "must be finite".into())
                }
                (None, Some(i)) if !(i.is_finite() && i >= 0.0) => bad(
                    "laser.second_color.intensity_w_cm2",
                    format!("must be ≥ 0, got {i}"),
                ),
                _ => {}
            }
            if !sc.phi.is_finite() {
                bad("laser.second_color.phi", "must be finite".into());
            }
            if l.ellipticity != 0.0 {
                bad(
                    "laser.ellipticity",
                    "two-colour drives are linearly polarised".into(),
                );
            }
        }

        let z = self.target.z();
        if !pos(z) {
            bad("target.z", format!("must be > 0, got {z}"));
        }
        if let TargetConfig::DensityTable { path, .. } = &self.target {
            if self.engine != Engine::Kspace {
                bad(
                    "engine",
                    format!(
                        "the {} engine requires a hydrogenic target; density tables need kspace",
                        self.engine
                    ),
                );
            }
            if !path.exists() {
                bad("target.path", format!("{} does not exist", path.display()));
            }
        }

        let n = &self.numerics;
        if !pos(n.rel_tol) {
            bad(
                "numerics.rel_tol",
                format!("must be > 0, got {}", n.rel_tol),
            );
        }
        if !pos(n.abs_tol) {
            bad(
                "numerics.abs_tol",
                format!("must be > 0, got {}", n.abs_tol),
            );
        }
        if !pos(n.k_max) {
            bad("numerics.k_max", format!("must be > 0, got {}", n.k_max));
        }
        if n.max_subdivisions == 0 {
            bad("numerics.max_subdivisions", "must be ≥ 1".into());
        }
        if let Some(ns) = n.n_samples {
            let min = (l.n_cycles as usize * 16).max(4);
            if ns < min {
                bad(
                    "numerics.n_samples",
                    format!("{ns} is below 16 per laser cycle ({min})"),
                );
            }
        }

        let s = &self.spectrum;
        if s.n_max == 0 {
            bad("spectrum.n_max", "must be ≥ 1".into());
        }
        if !pos(s.order_min) {
            bad(
                "spectrum.order_min",
                format!("must be > 0, got {}", s.order_min),
            );
        }
        if !pos(s.report_order) {
            bad(
                "spectrum.report_order",
                format!("must be > 0, got {}", s.report_order),
            );
        }
        if let Some(lm) = s.l_max {
            if lm < 0 {
                bad("spectrum.l_max", format!("must be ≥ 0, got {lm}"));
            }
        }

        let g = &self.gabor;
        if !pos(g.tau_au) {
            bad("gabor.tau_au", format!("must be > 0, got {}", g.tau_au));
        }
        if g.n_times < 2 {
            bad("gabor.n_times", "must be ≥ 2".into());
        }
        if !(pos(g.order_min) && pos(g.order_step) && g.order_max > g.order_min) {
            bad(
                "gabor.order_min",
                "need 0 < order_min < order_max and order_step > 0".into(),
            );
        }
        if !(g.band[0] < g.band[1] && g.band[0] >= g.order_min && g.band[1] <= g.order_max) {
            bad(
                "gabor.band",
                format!(
                    "band {:?} must be increasing and lie within [{}, {}]",
                    g.band, g.order_min, g.order_max
                ),
            );
        }

        let f = &self.fig1;
        if !pos(f.x0) {
            bad("fig1.x0", format!("must be > 0, got {}", f.x0));
        }
        if !(f.z_range[0] < f.z_range[1]) || f.n_points < 2 {
            bad(
                "fig1.z_range",
                "need z_range[0] < z_range[1] and n_points ≥ 2".into(),
            );
        }

        match self.scenario {
            Scenario::Twocolor if l.second_color.is_none() => {
                bad("laser.second_color", "required by scenario twocolor".into())
            }
            Scenario::WavelengthScan if self.scan.wavelengths_nm.is_empty() => bad(
                "scan.wavelengths_nm",
                "required by scenario wavelength_scan".into(),
            ),
            Scenario::EllipticityScan if self.scan.ellipticities.is_empty() => bad(
                "scan.ellipticities",
                "required by scenario ellipticity_scan".into(),
            ),
            _ => {}
        }
        for (i, w) in self.scan.wavelengths_nm.iter().enumerate() {
            if !pos(*w) {
                bad(
                    &format!("scan.wavelengths_nm[{i}]"),
                    format!("must be > 0, got {w}"),
                );
            }
        }
        for (i, e) in self.scan.ellipticities.iter().enumerate() {
            if !(0.0..=1.0).contains(e) {
                bad(
                    &format!("scan.ellipticities[{i}]"),
                    format!("must lie in [0, 1], got {e}"),
                );
            }
        }
        if l.second_color.is_some() && self.scenario != Scenario::Twocolor {
            bad(
                "laser.second_color",
                format!("not used by scenario {}", self.scenario.name()),
            );
        }
        out
    }
}
