//! Harmonic amplitudes of an infinitely long pulse; even orders vanish.

use kh_hhg::units::omega_au;
use kh_hhg::{longpulse_spectrum, LaserParams, QuadratureSpec, Target, Vec3};

fn main() -> kh_hhg::Result<()> {
    let laser = LaserParams::new(800.0, 3.16e13, 10)?;
    let alpha0 = Vec3::z() * laser.quiver_amplitude()?;
    let target = Target::hydrogen(1.0)?;
    let comb = longpulse_spectrum(
        25,
        alpha0,
        omega_au(800.0)?,
        &target,
        &QuadratureSpec::default(),
    )?;
    for (order, s) in comb.harmonic_order.iter().zip(comb.values()) {
        println!("{order:>4.0}  {s:.4e}");
    }
    Ok(())
}
