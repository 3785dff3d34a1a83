//! CSV series, summary table, sensed-AP tables, traces and a JSON manifest.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::{ExperimentConfig, ExperimentResult, PointResult, RepetitionSeeds};
use crate::engine::write_trace_jsonl;
use crate::error::Result;

pub const POINT_CSV_HEADER: [&str; 5] = [
    "period",
    "mean_satisfaction",
    "std_satisfaction",
    "satisfied_count",
    "mean_throughput_bps",
];

fn write_point_csv(path: &Path, p: &PointResult) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(POINT_CSV_HEADER)?;
    let s = &p.series;
    for t in 0..s.mean_satisfaction.len() {
        w.write_record(&[
            (t + 1).to_string(),
            s.mean_satisfaction[t].to_string(),
            s.std_satisfaction[t].to_string(),
            s.satisfied_count[t].to_string(),
            s.mean_throughput[t].to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn write_sensed_csv(path: &Path, p: &PointResult) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["aps_sensed", "samples", "mean_satisfaction"])?;
    for b in &p.series.sensed {
        w.write_record(&[b.aps_sensed.to_string(), b.samples.to_string(), b.mean_satisfaction.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

fn write_summary_csv(path: &Path, result: &ExperimentResult) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record([
        "point",
        "policy",
        "ap_count",
        "demand_bps",
        "final_satisfaction",
        "final_satisfaction_std",
        "satisfied_stas",
        "satisfied_stas_std",
        "throughput_bps",
        "throughput_bps_std",
    ])?;
    for p in &result.points {
        let s = &p.series;
        w.write_record(&[
            p.point.id.clone(),
            p.point.policy.label(),
            p.point.scenario.aps.count().to_string(),
            p.point.scenario.demand_bps.to_string(),
            s.final_satisfaction.mean.to_string(),
            s.final_satisfaction.std.to_string(),
            s.final_satisfied.mean.to_string(),
            s.final_satisfied.std.to_string(),
            s.final_throughput.mean.to_string(),
            s.final_throughput.std.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct ManifestPoint<'a> {
    id: &'a str,
    csv: String,
    sensed_csv: Option<String>,
    trace: Option<String>,
    policy: &'a crate::agents::Policy,
    scenario_key: &'a str,
    ap_count: usize,
    demand_bps: f64,
    seeds: &'a [RepetitionSeeds],
}

#[derive(Serialize)]
struct Manifest<'a> {
    name: &'a str,
    config: &'a ExperimentConfig,
    summary_csv: &'static str,
    points: Vec<ManifestPoint<'a>>,
}

/// Writes all outputs of `result` into `dir` and returns the files written.
pub fn write_outputs(result: &ExperimentResult, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut entries = Vec::new();
    for p in &result.points {
        let csv_name = format!("{}.csv", p.id());
        write_point_csv(&dir.join(&csv_name), p)?;
        written.push(dir.join(&csv_name));

        let sensed_csv = if result.config.sensed_analysis {
            let name = format!("{}_sensed.csv", p.id());
            write_sensed_csv(&dir.join(&name), p)?;
            written.push(dir.join(&name));
            Some(name)
        } else {
            None
        };

        let trace = match &p.trace {
            Some(records) => {
                let name = format!("{}_rep0.jsonl", p.id());
                write_trace_jsonl(records, BufWriter::new(File::create(dir.join(&name))?))?;
                written.push(dir.join(&name));
                Some(name)
            }
            None => None,
        };

        entries.push(ManifestPoint {
            id: p.id(),
            csv: csv_name,
            sensed_csv,
            trace,
            policy: &p.point.policy,
            scenario_key: &p.point.scenario_key,
            ap_count: p.point.scenario.aps.count(),
            demand_bps: p.point.scenario.demand_bps,
            seeds: &p.seeds,
        });
    }

    write_summary_csv(&dir.join("summary.csv"), result)?;
    written.push(dir.join("summary.csv"));

    let manifest = Manifest {
        name: &result.config.name,
        config: &result.config,
        summary_csv: "summary.csv",
        points: entries,
    };
    let path = dir.join("manifest.json");
    serde_json::to_writer_pretty(BufWriter::new(File::create(&path)?), &manifest)?;
    written.push(path);
    Ok(written)
}
