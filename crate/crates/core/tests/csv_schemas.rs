//! Every scenario's CSV files carry the documented columns and parse back.

use std::fs;
use std::path::Path;

use kh_hhg::run::run;
use kh_hhg::{AccelerationSeries, RunConfig, Spectrum};

fn config(scenario_block: &str, out: &Path) -> RunConfig {
    let text = format!(
        "{scenario_block}\n[laser]\nwavelength_nm = 800.0\nintensity_w_cm2 = 3.16e13\nn_cycles = 4\n"
    );
    let mut cfg = RunConfig::from_toml(&text).unwrap();
    cfg.output_dir = out.to_path_buf();
    cfg
}

/// Header line and data rows of a CSV with `#` metadata.
fn table(p: &Path) -> (Vec<String>, Vec<Vec<f64>>, Vec<String>) {
    let text = fs::read_to_string(p).unwrap();
    let meta: Vec<String> = text
        .lines()
        .filter(|l| l.starts_with('#'))
        .map(String::from)
        .collect();
    let mut rd = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let cols = rd.headers().unwrap().iter().map(String::from).collect();
    let rows = rd
        .records()
        .map(|r| {
            r.unwrap()
                .iter()
                .map(|v| v.parse::<f64>().unwrap())
                .collect()
        })
        .collect();
    (cols, rows, meta)
}

fn check(p: &Path, want: &[&str]) -> Vec<Vec<f64>> {
    let (cols, rows, meta) = table(p);
    assert_eq!(cols, want, "{}", p.display());
    assert!(!rows.is_empty(), "{} is empty", p.display());
    assert!(rows
        .iter()
        .all(|r| r.len() == want.len() && r.iter().all(|v| v.is_finite())));
    assert!(
        meta.iter().any(|l| l.starts_with("# kh-hhg ")),
        "{}: no version line",
        p.display()
    );
    assert!(
        meta.iter().any(|l| l.starts_with("# config: scenario")),
        "{}: no config echo",
        p.display()
    );
    rows
}

#[test]
fn spectrum_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(
        "scenario = \"spectrum\"\n[spectrum]\ninclude_longpulse = true\ninclude_peaking = true\nn_max = 9",
        dir.path(),
    );
    run(&cfg).unwrap();
    let d = dir.path();
    check(&d.join("accel.csv"), &["t_au", "accel_au"]);
    let spec = ["harmonic_order", "omega_au", "S_normalized"];
    for f in ["spectrum.csv", "spectrum_peaking.csv", "longpulse.csv"] {
        let rows = check(&d.join(f), &spec);
        let max = rows.iter().map(|r| r[2]).fold(0.0, f64::max);
        assert!((max - 1.0).abs() < 1e-12, "{f}: max {max}");
    }
    assert_eq!(check(&d.join("longpulse.csv"), &spec).len(), 9);

    let series = AccelerationSeries::read_csv(d.join("accel.csv")).unwrap();
    series.validate().unwrap();
    assert_eq!(series.meta.engine, "exact");
    let s = Spectrum::read_csv(d.join("spectrum.csv")).unwrap();
    assert!((s.peak_height(1.0) - 1.0).abs() < 1e-12);
}

#[test]
fn raw_spectrum_has_extra_column() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config(
        "scenario = \"longpulse\"\n[spectrum]\nn_max = 5",
        dir.path(),
    );
    cfg.normalize = kh_hhg::Normalization::Raw;
    run(&cfg).unwrap();
    let rows = check(
        &dir.path().join("longpulse.csv"),
        &["harmonic_order", "omega_au", "S_normalized", "S_raw"],
    );
    // S_normalized stays max-normalised; S_raw is proportional to it
    let k = rows[0][3] / rows[0][2];
    assert!(rows
        .iter()
        .all(|r| (r[3] - k * r[2]).abs() <= 1e-12 * r[3].abs().max(1e-300)));
    assert!((rows.iter().map(|r| r[2]).fold(0.0, f64::max) - 1.0).abs() < 1e-12);
}

#[test]
fn fig1_scenario() {
    let dir = tempfile::tempdir().unwrap();
    run(&config("scenario = \"fig1\"", dir.path())).unwrap();
    let rows = check(
        &dir.path().join("fig1.csv"),
        &[
            "z_au",
            "potential_au",
            "rho_alpha_plus_au",
            "rho_alpha_minus_au",
        ],
    );
    assert_eq!(rows.len(), 601);
    // ±α densities are mirror images
    for (r, m) in rows.iter().zip(rows.iter().rev()) {
        assert!((r[2] - m[3]).abs() < 1e-14);
    }
    let force = check(
        &dir.path().join("fig1_force.csv"),
        &["alpha_au", "accel_au"],
    );
    assert_eq!(force.len(), 2);
    assert!(force[0][1] < 0.0 && force[1][1] > 0.0);
}

#[test]
fn gabor_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(
        "scenario = \"gabor\"\n[gabor]\nn_times = 64\norder_step = 1.0",
        dir.path(),
    );
    run(&cfg).unwrap();
    let d = dir.path();
    let g = check(&d.join("gabor.csv"), &["t_au", "omega_au", "G2"]);
    assert_eq!(g.len(), 64 * 31);
    assert!((g.iter().map(|r| r[2]).fold(0.0, f64::max) - 1.0).abs() < 1e-12);
    check(&d.join("emission_times.csv"), &["t_au", "t_cycles"]);
    check(&d.join("quiver.csv"), &["t_au", "alpha_abs_normalized"]);
    check(&d.join("accel.csv"), &["t_au", "accel_au"]);
}

#[test]
fn twocolor_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(
        "scenario = \"twocolor\"\n[spectrum]\nn_max = 4\n[laser.second_color]\nalpha_ratio = 0.3",
        dir.path(),
    );
    run(&cfg).unwrap();
    check(
        &dir.path().join("twocolor.csv"),
        &["harmonic_order", "omega_au", "S_normalized"],
    );
    let amps = check(
        &dir.path().join("twocolor_amplitudes.csv"),
        &["harmonic_order", "re_amplitude_au", "im_amplitude_au"],
    );
    assert_eq!(amps.len(), 4);
}

#[test]
fn scan_scenarios() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(
        "scenario = \"ellipticity_scan\"\n[scan]\nellipticities = [0.0, 0.5]",
        &dir.path().join("eps"),
    );
    run(&cfg).unwrap();
    let rows = check(
        &dir.path().join("eps/scan.csv"),
        &[
            "ellipticity",
            "harmonic_order",
            "peak_raw",
            "peak_normalized",
        ],
    );
    assert_eq!(rows.len(), 2);
    assert!(dir.path().join("eps/spectrum_eps0.5.csv").exists());

    let cfg = config(
        "scenario = \"wavelength_scan\"\n[scan]\nwavelengths_nm = [800.0, 1600.0]",
        &dir.path().join("wl"),
    );
    run(&cfg).unwrap();
    check(
        &dir.path().join("wl/scan.csv"),
        &[
            "wavelength_nm",
            "harmonic_order",
            "peak_raw",
            "peak_normalized",
        ],
    );
    assert!(dir.path().join("wl/spectrum_1600nm.csv").exists());
}
