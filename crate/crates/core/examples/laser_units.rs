//! Laboratory parameters to atomic units and the quiver trajectory.
//!
//!     cargo run --example laser_units -- 1600 3.16e13

use kh_hhg::units::{au_to_fs, omega_au};
use kh_hhg::{LaserParams, QuiverTrajectory};

fn main() -> kh_hhg::Result<()> {
    let args: Vec<f64> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let lambda = args.first().copied().unwrap_or(800.0);
    let intensity = args.get(1).copied().unwrap_or(3.16e13);

    let laser = LaserParams::new(lambda, intensity, 10)?;
    println!("λ = {lambda} nm, I = {intensity:e} W/cm²");
    println!("  ω_L = {:.6} a.u.", omega_au(lambda)?);
    println!("  E₀  = {:.6} a.u.", laser.field_amplitude()?);
    println!("  α₀  = {:.4} a.u.", laser.quiver_amplitude()?);
    println!(
        "  T   = {:.2} a.u. = {:.2} fs",
        laser.duration()?,
        au_to_fs(laser.duration()?)
    );

    let traj = QuiverTrajectory::from_laser(&laser)?;
    // quarter-cycle steps land on the crests
    println!("\n  t/T     f(t)    α_z(t)");
    for i in 0..=40 {
        let t = traj.duration() * i as f64 / 40.0;
        println!(
            "  {:.3}  {:.4}  {:>9.4}",
            i as f64 / 40.0,
            traj.envelope(t),
            traj.alpha(t)?.z
        );
    }
    println!("\n{} interior zeros of α(t)", traj.interior_zeros().len());
    Ok(())
}
