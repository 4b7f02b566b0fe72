//! Bessel functions, adaptive quadrature and the DFT on known answers.

use std::f64::consts::PI;

use kh_hhg::numerics::{bessel_jn_all, dft_real, integrate_radial, spherical_j1};
use kh_hhg::QuadratureSpec;

fn main() -> kh_hhg::Result<()> {
    let x = 7.5;
    let j = bessel_jn_all(40, x);
    let jacobi_anger: f64 = j[0] + 2.0 * j.iter().skip(2).step_by(2).sum::<f64>();
    println!("J_0..J_3({x}) = {:?}", &j[..4]);
    println!("J₀ + 2ΣJ_2k = {jacobi_anger:.15} (should be 1)");
    println!("j₁(1) = {:.15}", spherical_j1(1.0));

    let r = integrate_radial(|k| (-k * k).exp(), &QuadratureSpec::default())?;
    println!(
        "∫e^(-k²) = {:.15} (√π/2 = {:.15}), {} evaluations",
        r.value,
        PI.sqrt() / 2.0,
        r.evaluations
    );

    let dt = 0.01;
    let xs: Vec<f64> = (0..1000)
        .map(|i| (2.0 * PI * 5.0 * i as f64 * dt).sin())
        .collect();
    let spec = dft_real(&xs, dt)?;
    let peak = spec
        .positive_range()
        .max_by(|&a, &b| {
            spec.amplitude[a]
                .norm()
                .total_cmp(&spec.amplitude[b].norm())
        })
        .unwrap();
    println!(
        "DFT peak at ω = {:.4} (2π·5 = {:.4})",
        spec.omega[peak],
        2.0 * PI * 5.0
    );
    Ok(())
}
