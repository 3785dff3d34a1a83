//! One simulation run on the clustered deployment, period by period, with
//! the full trace written as JSON lines.

use std::fs::File;
use std::io::BufWriter;

use apsel::engine::{run_simulation, write_trace_jsonl};
use apsel::experiments::presets::CLUSTERED_TOY_STAS;
use apsel::{Policy, ScenarioSpec};

fn main() -> apsel::Result<()> {
    let scenario = ScenarioSpec::toy(CLUSTERED_TOY_STAS).build(11)?;
    let records = run_simulation(&scenario, &Policy::sticky(0.02, 4), 200, 5)?;
    for r in records.iter().filter(|r| r.period % 20 == 0) {
        println!(
            "period {:>3}: {:>2}/{} satisfied, mean served {:.3}, {:.2} Mb/s per STA",
            r.period,
            r.satisfied_count,
            scenario.n_stas(),
            r.mean_served_fraction,
            r.mean_throughput() / 1e6
        );
    }
    let path = std::env::temp_dir().join("apsel_single_run.jsonl");
    write_trace_jsonl(&records, BufWriter::new(File::create(&path)?))?;
    println!("trace: {}", path.display());
    Ok(())
}
