//! ω + 2ω drive: a second colour breaks the half-cycle symmetry and lets
//! even harmonics through.

use kh_hhg::{twocolor_amplitude, QuadratureSpec, Target, Vec3};

fn main() -> kh_hhg::Result<()> {
    let target = Target::hydrogen(1.0)?;
    let spec = QuadratureSpec::default();
    let a01 = Vec3::z() * 9.25;
    for ratio in [0.0, 0.3] {
        println!("α₀₂ = {ratio} α₀₁");
        for n in 1..=8 {
            let a = twocolor_amplitude(n, a01, a01 * ratio, 0.0, None, &target, &spec)?;
            println!("  N = {n}  |A_N| = {:.4e}", a.amplitude.norm());
        }
    }
    Ok(())
}
