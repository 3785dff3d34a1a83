//! Loads an experiment from TOML, runs it and writes the CSV/JSON outputs.
//! Without an argument a small built-in config is used.

use apsel::experiments::{run_experiment, write_outputs, ExperimentConfig};

const INLINE: &str = r#"
name = "uniform-small"
periods = 100
repetitions = 10
master_seed = 3
output = "results/uniform-small"
policies = [
    { kind = "strongest_signal" },
    { kind = "epsilon_sticky", epsilon = { kind = "inverse_sqrt" }, sticky_limit = 2 },
]

[scenario]
area = [80.0, 80.0]
demand_bps = 4e6
aps = { kind = "grid", rows = 4, cols = 4 }
stas = { kind = "uniform", count = 64 }

[sweep]
sticky_limit = [1, 4]
"#;

fn main() -> apsel::Result<()> {
    let cfg = match std::env::args().nth(1) {
        Some(path) => ExperimentConfig::load(path.as_ref())?,
        None => ExperimentConfig::from_toml_str(INLINE).map_err(|e| apsel::Error::Config(e.to_string()))?,
    };
    cfg.validate()?;
    let result = run_experiment(&cfg)?;
    for file in write_outputs(&result, &cfg.output)? {
        println!("{}", file.display());
    }
    Ok(())
}
