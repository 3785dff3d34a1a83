use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::agents::{EpsilonSchedule, Policy};
use crate::error::{Error, Result};
use crate::scenario::ScenarioSpec;

/// How the end-of-run "satisfied STAs" and throughput figures are taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FinalMetric {
    /// Mean over the last 10% of periods (at least one).
    #[default]
    LastTenth,
    FinalPeriod,
}

/// Optional sweep axes. Each present list must be nonempty.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxes {
    /// Static ε values; replaces the schedule of every bandit policy.
    pub epsilon: Option<Vec<f64>>,
    /// Sticky limits; applies to ε-sticky policies.
    pub sticky_limit: Option<Vec<u32>>,
    pub ap_count: Option<Vec<usize>>,
    pub demand_bps: Option<Vec<f64>>,
}

/// One experiment: a scenario recipe, the policies to compare, sweep axes
/// and run-length settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    #[serde(default = "default_periods")]
    pub periods: u64,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_output")]
    pub output: PathBuf,
    #[serde(default)]
    pub final_metric: FinalMetric,
    /// Emit the APs-sensed vs satisfaction table per sweep point.
    #[serde(default)]
    pub sensed_analysis: bool,
    #[serde(default = "default_min_samples")]
    pub sensed_min_samples: usize,
    /// Write a JSON-lines trace of repetition 0 for every sweep point.
    #[serde(default)]
    pub trace: bool,
    pub scenario: ScenarioSpec,
    pub policies: Vec<Policy>,
    #[serde(default)]
    pub sweep: SweepAxes,
}

fn default_periods() -> u64 {
    500
}

fn default_repetitions() -> usize {
    100
}

fn default_output() -> PathBuf {
    PathBuf::from("results")
}

fn default_min_samples() -> usize {
    100
}

/// A single configuration to simulate `repetitions` times.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub id: String,
    /// Identifies the deployment; points sharing it see the same scenarios.
    pub scenario_key: String,
    pub policy: Policy,
    pub scenario: ScenarioSpec,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> std::result::Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let cfg = Self::from_toml_str(&text).map_err(|source| Error::Parse {
            path: path.to_path_buf(),
            source,
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string_pretty(self).expect("experiment configs always serialize")
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty() || !self.name.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c)) {
            return Err(Error::config(format!("experiment name `{}` must be a nonempty [A-Za-z0-9-_.] string", self.name)));
        }
        if self.periods == 0 {
            return Err(Error::config("periods must be >= 1"));
        }
        if self.repetitions == 0 {
            return Err(Error::config("repetitions must be >= 1"));
        }
        if self.policies.is_empty() {
            return Err(Error::config("at least one policy is required"));
        }
        for p in &self.policies {
            p.validate()?;
        }
        let axes = &self.sweep;
        let empty = [
            axes.epsilon.as_ref().is_some_and(Vec::is_empty),
            axes.sticky_limit.as_ref().is_some_and(Vec::is_empty),
            axes.ap_count.as_ref().is_some_and(Vec::is_empty),
            axes.demand_bps.as_ref().is_some_and(Vec::is_empty),
        ];
        if empty.iter().any(|&e| e) {
            return Err(Error::config("sweep lists must be nonempty"));
        }
        if axes.ap_count.iter().flatten().any(|&m| m == 0) {
            return Err(Error::config("swept AP counts must be > 0"));
        }
        for point in self.sweep_points() {
            point.policy.validate()?;
            point.scenario.validate()?;
        }
        Ok(())
    }

    fn policy_variants(&self, base: &Policy) -> Vec<Policy> {
        let eps: Vec<Option<EpsilonSchedule>> = match &self.sweep.epsilon {
            Some(list) => list.iter().map(|&value| Some(EpsilonSchedule::Static { value })).collect(),
            None => vec![None],
        };
        match *base {
            Policy::StrongestSignal => vec![Policy::StrongestSignal],
            Policy::EpsilonGreedy { epsilon, explore_excludes_current } => eps
                .iter()
                .map(|e| Policy::EpsilonGreedy {
                    epsilon: e.unwrap_or(epsilon),
                    explore_excludes_current,
                })
                .collect(),
            Policy::EpsilonSticky { epsilon, sticky_limit, explore_excludes_current } => {
                let scs = self.sweep.sticky_limit.clone().unwrap_or_else(|| vec![sticky_limit]);
                eps.iter()
                    .flat_map(|e| {
                        scs.iter().map(move |&sc| Policy::EpsilonSticky {
                            epsilon: e.unwrap_or(epsilon),
                            sticky_limit: sc,
                            explore_excludes_current,
                        })
                    })
                    .collect()
            }
        }
    }

    /// Cartesian expansion of policies and sweep axes, in a fixed order:
    /// AP count, then demand, then policy. Duplicate ids are dropped.
    pub fn sweep_points(&self) -> Vec<SweepPoint> {
        let ap_counts: Vec<Option<usize>> = match &self.sweep.ap_count {
            Some(l) => l.iter().copied().map(Some).collect(),
            None => vec![None],
        };
        let demands: Vec<Option<f64>> = match &self.sweep.demand_bps {
            Some(l) => l.iter().copied().map(Some).collect(),
            None => vec![None],
        };
        let mut out: Vec<SweepPoint> = Vec::new();
        for m in &ap_counts {
            for w in &demands {
                let mut scenario = self.scenario.clone();
                let mut key = String::from("base");
                let mut suffix = String::new();
                if let Some(m) = *m {
                    scenario.aps = scenario.aps.with_count(m);
                    key = format!("aps{m}");
                    suffix.push_str(&format!("_aps{m}"));
                }
                if let Some(w) = *w {
                    scenario.demand_bps = w;
                    suffix.push_str(&format!("_w{}", format_mbps(w)));
                }
                for base in &self.policies {
                    for policy in self.policy_variants(base) {
                        let id = format!("{}{}", policy.label(), suffix);
                        if out.iter().any(|p| p.id == id) {
                            continue;
                        }
                        out.push(SweepPoint {
                            id,
                            scenario_key: key.clone(),
                            policy,
                            scenario: scenario.clone(),
                        });
                    }
                }
            }
        }
        out
    }
}

fn format_mbps(bps: f64) -> String {
    format!("{}M", bps / 1e6)
}
