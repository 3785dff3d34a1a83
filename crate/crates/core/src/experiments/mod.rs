//! Experiment harness: sweep expansion, seeded repetitions, aggregation and
//! plot-ready output.
//!
//! Repetition `k` of a sweep point uses two seeds derived from the master
//! seed: one for the deployment, keyed by the point's scenario key so that
//! policies compared at the same sweep coordinates see identical
//! deployments, and one for the agents, keyed by the point id.

mod aggregate;
mod config;
mod output;
pub mod presets;

use rayon::prelude::*;
use serde::Serialize;

pub use aggregate::{
    aggregate, aps_sensed_analysis, mean_std, satisfaction_per_iteration, AggregateSeries, MeanStd, RunAccumulator,
    RunSummary, SensedBin,
};
pub use config::{ExperimentConfig, FinalMetric, SweepAxes, SweepPoint};
pub use output::{write_outputs, POINT_CSV_HEADER};

use crate::engine::{PeriodRecord, Simulation};
use crate::error::Result;
use crate::rng::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RepetitionSeeds {
    pub scenario: u64,
    pub agents: u64,
}

pub fn repetition_seeds(master_seed: u64, point: &SweepPoint, k: usize) -> RepetitionSeeds {
    RepetitionSeeds {
        scenario: derive_seed(master_seed, &format!("scenario:{}", point.scenario_key), k as u64),
        agents: derive_seed(master_seed, &format!("agents:{}", point.id), k as u64),
    }
}

/// Runs one repetition. Returns the summary and, when `keep_trace` is set,
/// every period record including the initial one.
pub fn run_repetition(
    point: &SweepPoint,
    periods: u64,
    seeds: RepetitionSeeds,
    keep_trace: bool,
) -> Result<(RunSummary, Option<Vec<PeriodRecord>>)> {
    let scenario = point.scenario.build(seeds.scenario)?;
    let sensed = scenario.detected.iter().map(Vec::len).collect();
    let mut acc = RunAccumulator::new(sensed, seeds.scenario, seeds.agents);
    let mut sim = Simulation::new(&scenario, &point.policy, seeds.agents)?;
    let mut trace = keep_trace.then(Vec::new);

    let initial = sim.step()?;
    if let Some(t) = trace.as_mut() {
        t.push(initial);
    }
    for _ in 0..periods {
        let rec = sim.step()?;
        acc.push(&rec);
        if let Some(t) = trace.as_mut() {
            t.push(rec);
        }
    }
    Ok((acc.finish(), trace))
}

#[derive(Debug, Clone, Serialize)]
pub struct PointResult {
    pub point: SweepPoint,
    pub seeds: Vec<RepetitionSeeds>,
    pub series: AggregateSeries,
    #[serde(skip)]
    pub runs: Vec<RunSummary>,
    #[serde(skip)]
    pub trace: Option<Vec<PeriodRecord>>,
}

impl PointResult {
    pub fn id(&self) -> &str {
        &self.point.id
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub points: Vec<PointResult>,
}

impl ExperimentResult {
    pub fn point(&self, id: &str) -> Option<&PointResult> {
        self.points.iter().find(|p| p.point.id == id)
    }
}

/// Runs every repetition of `point` (in parallel) and aggregates them.
pub fn run_point(cfg: &ExperimentConfig, point: &SweepPoint) -> Result<PointResult> {
    let seeds: Vec<RepetitionSeeds> = (0..cfg.repetitions)
        .map(|k| repetition_seeds(cfg.master_seed, point, k))
        .collect();
    let results = seeds
        .par_iter()
        .enumerate()
        .map(|(k, s)| run_repetition(point, cfg.periods, *s, cfg.trace && k == 0))
        .collect::<Result<Vec<_>>>()?;
    let mut trace = None;
    let runs: Vec<RunSummary> = results
        .into_iter()
        .map(|(summary, t)| {
            if t.is_some() {
                trace = t;
            }
            summary
        })
        .collect();
    let series = aggregate(&runs, cfg.final_metric, cfg.sensed_analysis.then_some(cfg.sensed_min_samples));
    Ok(PointResult {
        point: point.clone(),
        seeds,
        series,
        runs,
        trace,
    })
}

/// Runs every sweep point of the experiment. Results are in sweep order
/// regardless of scheduling.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let points = cfg
        .sweep_points()
        .par_iter()
        .map(|p| run_point(cfg, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(ExperimentResult {
        config: cfg.clone(),
        points,
    })
}
