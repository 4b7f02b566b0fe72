//! Laboratory units (nm, W/cm², fs) to Hartree atomic units and back.
//!
//! Everything downstream works in atomic units with electron charge
//! q = -1 and mass m = 1.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// hc / E_h in nanometres (CODATA 2018: 45.563 352 53 nm). A photon of
/// wavelength λ has angular frequency `HC_OVER_HARTREE_NM / λ` in a.u.
pub const HC_OVER_HARTREE_NM: f64 = 45.563_352_53;

/// Intensity of a field with unit atomic field strength, I = ε₀ c E_au² / 2.
pub const ATOMIC_INTENSITY_W_CM2: f64 = 3.509_447_6e16;

/// Atomic unit of time in femtoseconds (CODATA 2018).
pub const ATOMIC_TIME_FS: f64 = 0.024_188_843_26;

/// Electron charge in atomic units.
pub const CHARGE: f64 = -1.0;

/// Electron mass in atomic units.
pub const MASS: f64 = 1.0;

fn positive(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::domain(format!(
            "{name} must be finite and > 0, got {v}"
        )))
    }
}

/// Angular frequency (a.u.) of light with the given vacuum wavelength.
pub fn omega_au(wavelength_nm: f64) -> Result<f64> {
    Ok(HC_OVER_HARTREE_NM / positive("wavelength_nm", wavelength_nm)?)
}

/// Inverse of [`omega_au`].
pub fn wavelength_nm(omega_au: f64) -> Result<f64> {
    Ok(HC_OVER_HARTREE_NM / positive("omega_au", omega_au)?)
}

/// Peak electric field (a.u.) for a peak intensity in W/cm².
pub fn field_amplitude_au(intensity_w_cm2: f64) -> Result<f64> {
    Ok((positive("intensity_w_cm2", intensity_w_cm2)? / ATOMIC_INTENSITY_W_CM2).sqrt())
}

/// Inverse of [`field_amplitude_au`].
pub fn intensity_w_cm2(field_au: f64) -> Result<f64> {
    let e = positive("field_au", field_au)?;
    Ok(e * e * ATOMIC_INTENSITY_W_CM2)
}

pub fn fs_to_au(t_fs: f64) -> f64 {
    t_fs / ATOMIC_TIME_FS
}

pub fn au_to_fs(t_au: f64) -> f64 {
    t_au * ATOMIC_TIME_FS
}

/// Driving-laser parameters in laboratory units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaserParams {
    pub wavelength_nm: f64,
    pub intensity_w_cm2: f64,
    pub n_cycles: u32,
}

impl LaserParams {
    pub fn new(wavelength_nm: f64, intensity_w_cm2: f64, n_cycles: u32) -> Result<Self> {
        let p = LaserParams {
            wavelength_nm,
            intensity_w_cm2,
            n_cycles,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        positive("wavelength_nm", self.wavelength_nm)?;
        positive("intensity_w_cm2", self.intensity_w_cm2)?;
        if self.n_cycles == 0 {
            return Err(Error::domain("n_cycles must be a positive integer"));
        }
        Ok(())
    }

    pub fn omega(&self) -> Result<f64> {
        omega_au(self.wavelength_nm)
    }

    pub fn field_amplitude(&self) -> Result<f64> {
        field_amplitude_au(self.intensity_w_cm2)
    }

    /// Optical period 2π/ω_L in a.u.
    pub fn period(&self) -> Result<f64> {
        Ok(std::f64::consts::TAU / self.omega()?)
    }

    /// Pulse duration T = n_cycles · 2π/ω_L in a.u.
    pub fn duration(&self) -> Result<f64> {
        Ok(f64::from(self.n_cycles) * self.period()?)
    }

    pub fn quiver_amplitude(&self) -> Result<f64> {
        quiver_amplitude_au(self)
    }
}

/// Peak free-electron excursion α₀ = E₀/ω_L² (a.u.).
pub fn quiver_amplitude_au(params: &LaserParams) -> Result<f64> {
    params.validate()?;
    let w = params.omega()?;
    Ok(params.field_amplitude()? / (w * w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn omega_at_800nm() {
        // independent: 45.5633525 / 800
        assert!((omega_au(800.0).unwrap() - 0.056954).abs() < 1e-5);
        assert_eq!(omega_au(1600.0).unwrap(), omega_au(800.0).unwrap() / 2.0);
        assert_eq!(omega_au(3200.0).unwrap(), omega_au(800.0).unwrap() / 4.0);
    }

    #[test]
    fn field_amplitude_examples() {
        let e = field_amplitude_au(3.16e13).unwrap();
        assert!((e - (3.16e13f64 / 3.50945e16).sqrt()).abs() < 1e-6);
        assert!((e - 0.03001).abs() < 1e-4);
        assert_relative_eq!(field_amplitude_au(ATOMIC_INTENSITY_W_CM2).unwrap(), 1.0);
        assert_relative_eq!(
            field_amplitude_au(4.0 * 3.16e13).unwrap(),
            2.0 * e,
            max_relative = 1e-15
        );
    }

    #[test]
    fn quiver_amplitude_examples() {
        let p800 = LaserParams::new(800.0, 3.16e13, 10).unwrap();
        let p1600 = LaserParams::new(1600.0, 3.16e13, 10).unwrap();
        let a800 = p800.quiver_amplitude().unwrap();
        assert!((a800 - 9.25).abs() < 0.02, "{a800}");
        assert_relative_eq!(
            p1600.quiver_amplitude().unwrap(),
            4.0 * a800,
            max_relative = 1e-14
        );
    }

    #[test]
    fn rejects_non_positive_inputs() {
        assert!(matches!(omega_au(0.0), Err(Error::Domain(_))));
        assert!(matches!(omega_au(-800.0), Err(Error::Domain(_))));
        assert!(matches!(field_amplitude_au(-1.0), Err(Error::Domain(_))));
        assert!(LaserParams::new(800.0, 1e14, 0).is_err());
        assert!(LaserParams::new(f64::NAN, 1e14, 1).is_err());
    }

    proptest! {
        #[test]
        fn lab_au_round_trip(lambda in 100.0f64..10_000.0, intensity in 1e10f64..1e17) {
            let w = omega_au(lambda).unwrap();
            prop_assert!((wavelength_nm(w).unwrap() / lambda - 1.0).abs() < 1e-12);
            let e = field_amplitude_au(intensity).unwrap();
            prop_assert!((intensity_w_cm2(e).unwrap() / intensity - 1.0).abs() < 1e-12);
            prop_assert!((au_to_fs(fs_to_au(lambda)) / lambda - 1.0).abs() < 1e-12);
        }

        #[test]
        fn quiver_amplitude_scaling(lambda in 200.0f64..5000.0, intensity in 1e11f64..1e15,
                                    s in 0.1f64..10.0) {
            let a = LaserParams::new(lambda, intensity, 1).unwrap().quiver_amplitude().unwrap();
            let b = LaserParams::new(lambda * s, intensity * s * s, 1).unwrap()
                .quiver_amplitude().unwrap();
            // α₀ ∝ λ² √I, so scaling λ→sλ and I→s²I multiplies it by s³
            prop_assert!((b / (a * s * s * s) - 1.0).abs() < 1e-12);
        }
    }
}
