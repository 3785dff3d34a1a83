use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use apsel::experiments::{self, presets, ExperimentConfig};
use apsel::Error;

#[derive(Parser)]
#[command(name = "apsel", version, about = "Bandit-based AP selection experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Overrides {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    periods: Option<u64>,
    #[arg(long)]
    reps: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Overrides {
    fn apply(self, cfg: &mut ExperimentConfig) {
        if let Some(s) = self.seed {
            cfg.master_seed = s;
        }
        if let Some(t) = self.periods {
            cfg.periods = t;
        }
        if let Some(r) = self.reps {
            cfg.repetitions = r;
        }
        if let Some(o) = self.out {
            cfg.output = o;
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML config file.
    Run {
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run a built-in experiment.
    Preset {
        name: String,
        #[command(flatten)]
        overrides: Overrides,
        /// Print the preset as a TOML config instead of running it.
        #[arg(long)]
        dump_config: bool,
    },
    /// List built-in experiments.
    ListPresets,
    /// Write the generated deployment of one sweep point as JSON.
    ExportScenario {
        #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
        config: Option<PathBuf>,
        #[arg(long)]
        preset: Option<String>,
        /// Sweep point id (defaults to the first point).
        #[arg(long)]
        point: Option<String>,
        /// Repetition whose scenario seed is used.
        #[arg(long, default_value_t = 0)]
        rep: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cfg: &ExperimentConfig) -> apsel::Result<()> {
    cfg.validate()?;
    let points = cfg.sweep_points().len();
    eprintln!(
        "{}: {points} sweep points x {} repetitions x {} periods",
        cfg.name, cfg.repetitions, cfg.periods
    );
    let result = experiments::run_experiment(cfg)?;
    experiments::write_outputs(&result, &cfg.output)?;
    for p in &result.points {
        let s = &p.series;
        println!(
            "{:<40} satisfaction {:.4}  satisfied {:>7.2}  throughput {:>6.3} Mb/s",
            p.id(),
            s.final_satisfaction.mean,
            s.final_satisfied.mean,
            s.final_throughput.mean / 1e6
        );
    }
    eprintln!("wrote {}", cfg.output.display());
    Ok(())
}

fn main_inner(cli: Cli) -> apsel::Result<()> {
    match cli.command {
        Command::Run { config, overrides } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            overrides.apply(&mut cfg);
            run(&cfg)
        }
        Command::Preset { name, overrides, dump_config } => {
            let mut cfg = presets::preset_config(&name)?;
            overrides.apply(&mut cfg);
            if dump_config {
                print!("{}", cfg.to_toml_string());
                Ok(())
            } else {
                run(&cfg)
            }
        }
        Command::ListPresets => {
            for p in presets::PRESETS {
                println!("{:<24} {}", p.name, p.description);
            }
            Ok(())
        }
        Command::ExportScenario { config, preset, point, rep, seed, out } => {
            let mut cfg = match (config, preset) {
                (Some(path), _) => ExperimentConfig::load(&path)?,
                (None, Some(name)) => presets::preset_config(&name)?,
                (None, None) => unreachable!("clap requires one of --config/--preset"),
            };
            if let Some(s) = seed {
                cfg.master_seed = s;
            }
            cfg.validate()?;
            let points = cfg.sweep_points();
            let sp = match &point {
                Some(id) => points
                    .iter()
                    .find(|p| &p.id == id)
                    .ok_or_else(|| Error::Config(format!("no sweep point `{id}`")))?,
                None => &points[0],
            };
            let seeds = experiments::repetition_seeds(cfg.master_seed, sp, rep);
            let json = sp.scenario.build(seeds.scenario)?.to_json()?;
            match out {
                Some(path) => std::fs::write(path, json)?,
                None => println!("{json}"),
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) | Error::Parse { .. } | Error::UnknownPreset(_) => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
