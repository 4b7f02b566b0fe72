//! Gabor time-frequency analysis and the emission times it reveals.

use kh_hhg::tfa::{default_omega_grid, default_t_grid, DEFAULT_TAU};
use kh_hhg::{
    accel_series, emission_times, gabor, Engine, LaserParams, QuadratureSpec, QuiverTrajectory,
    Target,
};

fn main() -> kh_hhg::Result<()> {
    let traj = QuiverTrajectory::from_laser(&LaserParams::new(800.0, 3.16e13, 10)?)?;
    let target = Target::hydrogen(1.0)?;
    let series = accel_series(
        &traj,
        Engine::Exact,
        &target,
        4096,
        &QuadratureSpec::default(),
    )?;
    let map = gabor(
        &series,
        DEFAULT_TAU,
        &default_t_grid(&series, 512),
        &default_omega_grid(traj.omega()),
    )?;

    let period = 2.0 * std::f64::consts::PI / traj.omega();
    let zeros = traj.interior_zeros();
    println!("emission time (cycles)   nearest zero of α(t)");
    for t in emission_times(&map, (5.0, 15.0))? {
        let z = zeros
            .iter()
            .copied()
            .min_by(|a, b| (a - t).abs().total_cmp(&(b - t).abs()))
            .unwrap_or(f64::NAN);
        println!("{:>10.4}               {:>8.4}", t / period, z / period);
    }
    Ok(())
}
