//! A tabulated initial-state density driven through the k-space engine.
//! With a 1s table the result must match the closed form.

use kh_hhg::potentials::tabulated_form_factor;
use kh_hhg::{
    accel_hydrogen_exact, Engine, QuadratureSpec, RadialPotential, TailTreatment, Target, Vec3,
};

fn main() -> kh_hhg::Result<()> {
    let r: Vec<f64> = (0..=3000).map(|i| i as f64 * 0.01).collect();
    let rho: Vec<f64> = r
        .iter()
        .map(|r| (-2.0 * r).exp() / std::f64::consts::PI)
        .collect();
    let ff = tabulated_form_factor(&r, &rho)?;
    println!(
        "table normalisation: {:.8}",
        ff.normalization().unwrap_or(f64::NAN)
    );

    let target = Target::new(RadialPotential::coulomb(1.0)?, ff);
    let spec = QuadratureSpec {
        rel_tol: 1e-7,
        k_max: 100.0,
        tail: TailTreatment::Truncated,
        ..Default::default()
    };
    for alpha in [0.5, 2.0, 5.0] {
        let a = target
            .acceleration(Engine::Kspace, Vec3::z() * alpha, &spec)?
            .z;
        let e = accel_hydrogen_exact(alpha, 1.0);
        println!("α = {alpha}: table {a:.6e}, closed form {e:.6e}");
    }
    // the closed-form engines refuse a tabulated target
    println!("{}", target.check_engine(Engine::Exact).unwrap_err());
    Ok(())
}
