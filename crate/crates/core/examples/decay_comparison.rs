//! Static exploration rate against 1/sqrt(t) and 1/t decay, with the satisfaction curve sampled along the run.
//!
//! `cargo run --release --example decay_comparison [repetitions]` (default 20); pass 100
//! for the full-size run.

use apsel::experiments::{presets, run_experiment};

fn main() -> apsel::Result<()> {
    let mut cfg = presets::preset_config("decay-comparison")?;
    cfg.repetitions = std::env::args().nth(1).map_or(Ok(20), |s| s.parse()).expect("repetitions");
    let result = run_experiment(&cfg)?;
    for p in &result.points {
        let curve: Vec<String> = p.series.mean_satisfaction.iter().step_by(50).map(|v| format!("{v:.3}")).collect();
        println!("{:<32} {}", p.id(), curve.join(" "));
    }
    Ok(())
}
