//! Finite-pulse HHG spectrum from the closed-form acceleration, printed at
//! each harmonic order.

use kh_hhg::run::default_n_samples;
use kh_hhg::spectrum::spectrum_from_series;
use kh_hhg::{accel_series, Engine, LaserParams, QuadratureSpec, QuiverTrajectory, Target};

fn main() -> kh_hhg::Result<()> {
    let laser = LaserParams::new(800.0, 3.16e13, 10)?;
    let traj = QuiverTrajectory::from_laser(&laser)?;
    let target = Target::hydrogen(1.0)?;
    let n = default_n_samples(traj.peak_bound(), 1.0, traj.n_cycles());
    let series = accel_series(&traj, Engine::Exact, &target, n, &QuadratureSpec::default())?;
    let s = spectrum_from_series(&series)?;

    println!("{n} samples, α₀ = {:.3} a.u.", traj.peak_bound());
    println!("order  log10 S/S_max");
    for order in 1..=31 {
        println!("{order:>5}  {:>8.3}", s.peak_height(order as f64).log10());
    }
    println!(
        "even/odd power ratio below order 31: {:.2e}",
        s.even_odd_ratio(31)
    );
    Ok(())
}
