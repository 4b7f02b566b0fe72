//! Drive a whole scenario from a TOML string, as the CLI does.
//!
//!     cargo run --example run_config -- /tmp/kh-out

use kh_hhg::run::run;
use kh_hhg::RunConfig;

const CONFIG: &str = r#"
scenario = "spectrum"
engine = "exact"
normalize = "max"

[laser]
wavelength_nm = 800.0
intensity_w_cm2 = 3.16e13
n_cycles = 4

[spectrum]
include_longpulse = true
n_max = 21
"#;

fn main() -> kh_hhg::Result<()> {
    let mut cfg = RunConfig::from_toml(CONFIG)?;
    cfg.output_dir = std::env::args()
        .nth(1)
        .map(Into::into)
        .unwrap_or_else(|| std::env::temp_dir().join("kh-hhg-example"));
    for d in cfg.validate() {
        eprintln!("{d}");
    }
    let report = run(&cfg)?;
    for f in report.files {
        println!("{}", f.display());
    }
    Ok(())
}
