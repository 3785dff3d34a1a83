//! Satisfied STAs as the per-STA demand grows, 32 APs.
//!
//! `cargo run --release --example demand_sweep [repetitions]` (default 20); pass 100
//! for the full-size run.

use apsel::experiments::{presets, run_experiment};

fn main() -> apsel::Result<()> {
    let mut cfg = presets::preset_config("demand-sweep")?;
    cfg.repetitions = std::env::args().nth(1).map_or(Ok(20), |s| s.parse()).expect("repetitions");
    let result = run_experiment(&cfg)?;
    println!("{:<32} {:>12} {:>10} {:>10}", "policy", "satisfaction", "satisfied", "Mb/s");
    for p in &result.points {
        let s = &p.series;
        println!(
            "{:<32} {:>12.4} {:>10.2} {:>10.3}",
            p.id(),
            s.final_satisfaction.mean,
            s.final_satisfied.mean,
            s.final_throughput.mean / 1e6
        );
    }
    Ok(())
}
