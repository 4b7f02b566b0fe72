//! The three acceleration engines for hydrogen and the ground-state overlap c₀.

use kh_hhg::{
    accel_hydrogen_exact, accel_peaking, c0_overlap, Engine, QuadratureSpec, Target, Vec3,
};

fn main() -> kh_hhg::Result<()> {
    let target = Target::hydrogen(1.0)?;
    let spec = QuadratureSpec::default();
    println!(
        "{:>6} {:>14} {:>14} {:>10} {:>12} {:>10}",
        "α", "exact", "kspace", "rel err", "peaking", "c0"
    );
    for alpha in [0.1, 0.5, 1.0, 2.0, 5.0, 10.0] {
        let exact = accel_hydrogen_exact(alpha, 1.0);
        let ks = target
            .acceleration(Engine::Kspace, Vec3::z() * alpha, &spec)?
            .z;
        println!(
            "{alpha:>6} {exact:>14.8e} {ks:>14.8e} {:>10.2e} {:>12.4e} {:>10.6}",
            ((ks - exact) / exact).abs(),
            accel_peaking(alpha, 1.0),
            c0_overlap(alpha, 1.0),
        );
    }
    let h = 1e-7;
    let slope = (accel_hydrogen_exact(h, 1.0) - accel_hydrogen_exact(-h, 1.0)) / (2.0 * h);
    println!("\nslope at α = 0: {slope:.9} (−4/3 = {:.9})", -4.0 / 3.0);
    Ok(())
}
