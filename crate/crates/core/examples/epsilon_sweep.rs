//! Strongest signal against the two bandit policies over a range of exploration rates, clustered STAs.
//!
//! `cargo run --release --example epsilon_sweep [repetitions]` (default 20); pass 100
//! for the full-size run.

use apsel::experiments::{presets, run_experiment};

fn main() -> apsel::Result<()> {
    let mut cfg = presets::preset_config("eps-sweep-clustered")?;
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
