//! Peaking approximation against the closed form on the same pulse.

use kh_hhg::spectrum::spectrum_from_series;
use kh_hhg::{accel_series, Engine, LaserParams, QuadratureSpec, QuiverTrajectory, Target};

fn main() -> kh_hhg::Result<()> {
    let traj = QuiverTrajectory::from_laser(&LaserParams::new(800.0, 3.16e13, 10)?)?;
    let target = Target::hydrogen(1.0)?;
    let spec = QuadratureSpec::default();
    let exact = spectrum_from_series(&accel_series(&traj, Engine::Exact, &target, 4096, &spec)?)?;
    let pa = spectrum_from_series(&accel_series(&traj, Engine::Peaking, &target, 4096, &spec)?)?;

    println!("order   exact       PA          PA/exact");
    for order in (1..=19).step_by(2) {
        let (e, p) = (
            exact.peak_height(order as f64),
            pa.peak_height(order as f64),
        );
        println!("{order:>5}  {e:>10.3e}  {p:>10.3e}  {:>8.2}", p / e);
    }
    Ok(())
}
