use std::collections::BTreeMap;

use serde::Serialize;

use super::config::FinalMetric;
use crate::engine::PeriodRecord;

/// Fraction of the first `t` periods in which the STA was satisfied.
/// `flags[k]` is the flag of period `k + 1`.
pub fn satisfaction_per_iteration(flags: &[bool], t: usize) -> f64 {
    assert!(t >= 1 && t <= flags.len(), "t = {t} outside 1..={}", flags.len());
    flags[..t].iter().filter(|&&s| s).count() as f64 / t as f64
}

/// Per-repetition summary, built incrementally from agent periods `1..=T`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub scenario_seed: u64,
    pub agent_seed: u64,
    /// Mean over STAs of satisfaction-per-iteration, per period.
    pub satisfaction: Vec<f64>,
    pub satisfied_count: Vec<f64>,
    /// Mean delivered throughput per STA, per period (b/s).
    pub throughput: Vec<f64>,
    /// Per STA: (APs sensed, satisfaction per iteration at the last period).
    pub per_sta: Vec<(usize, f64)>,
}

/// Accumulates [`PeriodRecord`]s of one run into a [`RunSummary`].
#[derive(Debug, Clone)]
pub struct RunAccumulator {
    sensed: Vec<usize>,
    satisfied_periods: Vec<u64>,
    summary: RunSummary,
}

impl RunAccumulator {
    pub fn new(sensed: Vec<usize>, scenario_seed: u64, agent_seed: u64) -> Self {
        Self {
            satisfied_periods: vec![0; sensed.len()],
            sensed,
            summary: RunSummary {
                scenario_seed,
                agent_seed,
                satisfaction: Vec::new(),
                satisfied_count: Vec::new(),
                throughput: Vec::new(),
                per_sta: Vec::new(),
            },
        }
    }

    /// Adds an agent period. The initial strongest-signal record (period 0)
    /// must not be pushed.
    pub fn push(&mut self, record: &PeriodRecord) {
        debug_assert!(record.period >= 1);
        for (c, &s) in self.satisfied_periods.iter_mut().zip(&record.satisfied) {
            *c += u64::from(s);
        }
        let t = record.period as f64;
        let n = self.sensed.len();
        let mean = if n == 0 {
            0.0
        } else {
            self.satisfied_periods.iter().map(|&c| c as f64 / t).sum::<f64>() / n as f64
        };
        self.summary.satisfaction.push(mean);
        self.summary.satisfied_count.push(record.satisfied_count as f64);
        self.summary.throughput.push(record.mean_throughput());
    }

    pub fn finish(mut self) -> RunSummary {
        let t = self.summary.satisfaction.len().max(1) as f64;
        self.summary.per_sta = self
            .sensed
            .iter()
            .zip(&self.satisfied_periods)
            .map(|(&k, &c)| (k, c as f64 / t))
            .collect();
        self.summary
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
}

/// Mean and sample standard deviation (0 for a single value).
pub fn mean_std(values: &[f64]) -> MeanStd {
    if values.is_empty() {
        return MeanStd { mean: 0.0, std: 0.0 };
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std = if values.len() < 2 {
        0.0
    } else {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    };
    MeanStd { mean, std }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SensedBin {
    pub aps_sensed: usize,
    pub samples: usize,
    pub mean_satisfaction: f64,
}

/// Groups STAs by how many APs they sense and averages their satisfaction;
/// bins with fewer than `min_samples` STAs are dropped.
pub fn aps_sensed_analysis<'a, I>(runs: I, min_samples: usize) -> Vec<SensedBin>
where
    I: IntoIterator<Item = &'a RunSummary>,
{
    let mut bins: BTreeMap<usize, (usize, f64)> = BTreeMap::new();
    for run in runs {
        for &(k, s) in &run.per_sta {
            let e = bins.entry(k).or_default();
            e.0 += 1;
            e.1 += s;
        }
    }
    bins.into_iter()
        .filter(|(_, (n, _))| *n >= min_samples.max(1))
        .map(|(aps_sensed, (samples, sum))| SensedBin {
            aps_sensed,
            samples,
            mean_satisfaction: sum / samples as f64,
        })
        .collect()
}

/// Cross-repetition statistics for one sweep point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateSeries {
    pub repetitions: usize,
    pub mean_satisfaction: Vec<f64>,
    pub std_satisfaction: Vec<f64>,
    pub satisfied_count: Vec<f64>,
    pub mean_throughput: Vec<f64>,
    /// Satisfaction per iteration at the last period.
    pub final_satisfaction: MeanStd,
    pub final_satisfied: MeanStd,
    pub final_throughput: MeanStd,
    pub sensed: Vec<SensedBin>,
}

fn final_window(len: usize, metric: FinalMetric) -> std::ops::Range<usize> {
    match metric {
        FinalMetric::FinalPeriod => len.saturating_sub(1)..len,
        FinalMetric::LastTenth => len - len.div_ceil(10).max(1).min(len)..len,
    }
}

fn window_mean(series: &[f64], window: &std::ops::Range<usize>) -> f64 {
    let w = &series[window.clone()];
    if w.is_empty() {
        0.0
    } else {
        w.iter().sum::<f64>() / w.len() as f64
    }
}

pub fn aggregate(runs: &[RunSummary], metric: FinalMetric, sensed_min_samples: Option<usize>) -> AggregateSeries {
    let periods = runs.first().map_or(0, |r| r.satisfaction.len());
    debug_assert!(runs.iter().all(|r| r.satisfaction.len() == periods));
    let column = |pick: fn(&RunSummary) -> &Vec<f64>, t: usize| -> Vec<f64> { runs.iter().map(|r| pick(r)[t]).collect() };

    let mut mean_satisfaction = Vec::with_capacity(periods);
    let mut std_satisfaction = Vec::with_capacity(periods);
    let mut satisfied_count = Vec::with_capacity(periods);
    let mut mean_throughput = Vec::with_capacity(periods);
    for t in 0..periods {
        let s = mean_std(&column(|r| &r.satisfaction, t));
        mean_satisfaction.push(s.mean);
        std_satisfaction.push(s.std);
        satisfied_count.push(mean_std(&column(|r| &r.satisfied_count, t)).mean);
        mean_throughput.push(mean_std(&column(|r| &r.throughput, t)).mean);
    }

    let window = final_window(periods, metric);
    let finals = |pick: fn(&RunSummary) -> &Vec<f64>| -> MeanStd {
        mean_std(&runs.iter().map(|r| window_mean(pick(r), &window)).collect::<Vec<_>>())
    };
    let final_satisfaction = mean_std(&runs.iter().map(|r| r.satisfaction.last().copied().unwrap_or(0.0)).collect::<Vec<_>>());

    AggregateSeries {
        repetitions: runs.len(),
        mean_satisfaction,
        std_satisfaction,
        satisfied_count,
        mean_throughput,
        final_satisfaction,
        final_satisfied: finals(|r| &r.satisfied_count),
        final_throughput: finals(|r| &r.throughput),
        sensed: sensed_min_samples.map_or_else(Vec::new, |min| aps_sensed_analysis(runs, min)),
    }
}
