//! Satisfaction grouped by how many APs each STA can hear.
//!
//! `cargo run --release --example aps_sensed [repetitions]` (default 20); pass 100
//! for the full-size run.

use apsel::experiments::{presets, run_experiment};

fn main() -> apsel::Result<()> {
    let mut cfg = presets::preset_config("sensed-analysis")?;
    cfg.repetitions = std::env::args().nth(1).map_or(Ok(20), |s| s.parse()).expect("repetitions");
    let result = run_experiment(&cfg)?;
    for p in &result.points {
        println!("{}", p.id());
        for bin in &p.series.sensed {
            println!("  {:>3} APs sensed: {:.3} over {} STAs", bin.aps_sensed, bin.mean_satisfaction, bin.samples);
        }
    }
    Ok(())
}
