//! Built-in experiment definitions.

use super::config::{ExperimentConfig, FinalMetric, SweepAxes};
use crate::agents::{EpsilonSchedule, Policy};
use crate::error::{Error, Result};
use crate::scenario::{ApPlacement, ScenarioSpec, StaPlacement};

pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    build: fn() -> ExperimentConfig,
}

impl Preset {
    pub fn config(&self) -> ExperimentConfig {
        (self.build)()
    }
}

pub const UNIFORM_TOY_STAS: StaPlacement = StaPlacement::Uniform { count: 64 };
pub const CLUSTERED_TOY_STAS: StaPlacement = StaPlacement::Clustered {
    count: 64,
    per_cluster: 10,
    side: 10.0,
};
/// 10 clusters of 10 STAs, used by the AP-count and demand experiments.
pub const HUNDRED_CLUSTERED_STAS: StaPlacement = StaPlacement::Clustered {
    count: 100,
    per_cluster: 10,
    side: 10.0,
};

const EPS_SWEEP: [f64; 5] = [0.02, 0.1, 0.2, 0.5, 1.0];

fn base(name: &str, scenario: ScenarioSpec, policies: Vec<Policy>) -> ExperimentConfig {
    ExperimentConfig {
        name: name.to_string(),
        periods: 500,
        repetitions: 100,
        master_seed: 1,
        output: format!("results/{name}").into(),
        final_metric: FinalMetric::LastTenth,
        sensed_analysis: false,
        sensed_min_samples: 100,
        trace: false,
        scenario,
        policies,
        sweep: SweepAxes::default(),
    }
}

fn eps_sweep(name: &str, stas: StaPlacement) -> ExperimentConfig {
    let mut cfg = base(
        name,
        ScenarioSpec::toy(stas),
        vec![Policy::StrongestSignal, Policy::greedy(0.02), Policy::sticky(0.02, 1)],
    );
    cfg.sweep.epsilon = Some(EPS_SWEEP.to_vec());
    cfg
}

fn sticky_sweep(name: &str, stas: StaPlacement) -> ExperimentConfig {
    let mut cfg = base(name, ScenarioSpec::toy(stas), vec![Policy::StrongestSignal, Policy::sticky(0.02, 1)]);
    cfg.sweep.epsilon = Some(vec![0.02, 0.1, 0.5]);
    cfg.sweep.sticky_limit = Some(vec![1, 2, 4, 8]);
    cfg
}

fn hundred_stas(aps: usize) -> ScenarioSpec {
    ScenarioSpec {
        aps: ApPlacement::Uniform { count: aps },
        ..ScenarioSpec::toy(HUNDRED_CLUSTERED_STAS)
    }
}

fn scaling_policies() -> Vec<Policy> {
    vec![Policy::StrongestSignal, Policy::greedy(0.02), Policy::sticky(0.02, 4)]
}

pub static PRESETS: &[Preset] = &[
    Preset {
        name: "eps-sweep-uniform",
        description: "SS vs eps-greedy and eps-sticky (SC=1) over eps, 64 uniform STAs, 4x4 grid",
        build: || eps_sweep("eps-sweep-uniform", UNIFORM_TOY_STAS),
    },
    Preset {
        name: "eps-sweep-clustered",
        description: "SS vs eps-greedy and eps-sticky (SC=1) over eps, 64 clustered STAs, 4x4 grid",
        build: || eps_sweep("eps-sweep-clustered", CLUSTERED_TOY_STAS),
    },
    Preset {
        name: "sticky-sweep-uniform",
        description: "eps-sticky with SC in {1,2,4,8} and eps in {0.02,0.1,0.5}, uniform STAs",
        build: || sticky_sweep("sticky-sweep-uniform", UNIFORM_TOY_STAS),
    },
    Preset {
        name: "sticky-sweep-clustered",
        description: "eps-sticky with SC in {1,2,4,8} and eps in {0.02,0.1,0.5}, clustered STAs",
        build: || sticky_sweep("sticky-sweep-clustered", CLUSTERED_TOY_STAS),
    },
    Preset {
        name: "decay-comparison",
        description: "eps-sticky (SC=4) with static eps=0.02, 1/sqrt(t) and 1/t, clustered STAs",
        build: || {
            base(
                "decay-comparison",
                ScenarioSpec::toy(CLUSTERED_TOY_STAS),
                vec![
                    Policy::StrongestSignal,
                    Policy::sticky(0.02, 4),
                    Policy::sticky_with(EpsilonSchedule::InverseSqrt, 4),
                    Policy::sticky_with(EpsilonSchedule::Inverse, 4),
                ],
            )
        },
    },
    Preset {
        name: "ap-scaling",
        description: "8/16/32/64 uniformly placed APs, 100 STAs in 10 clusters",
        build: || {
            let mut cfg = base("ap-scaling", hundred_stas(16), scaling_policies());
            cfg.sweep.ap_count = Some(vec![8, 16, 32, 64]);
            cfg
        },
    },
    Preset {
        name: "sensed-analysis",
        description: "satisfaction vs number of APs sensed, 32/64/128 APs, 100 clustered STAs",
        build: || {
            let mut cfg = base("sensed-analysis", hundred_stas(32), vec![Policy::sticky(0.02, 4)]);
            cfg.sweep.ap_count = Some(vec![32, 64, 128]);
            cfg.sensed_analysis = true;
            cfg
        },
    },
    Preset {
        name: "demand-sweep",
        description: "per-STA demand 2/4/6/8 Mb/s, 32 uniformly placed APs, 100 clustered STAs",
        build: || {
            let mut cfg = base("demand-sweep", hundred_stas(32), scaling_policies());
            cfg.sweep.demand_bps = Some(vec![2e6, 4e6, 6e6, 8e6]);
            cfg
        },
    },
];

pub fn find(name: &str) -> Result<&'static Preset> {
    PRESETS
        .iter()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::UnknownPreset(name.to_string()))
}

pub fn preset_config(name: &str) -> Result<ExperimentConfig> {
    find(name).map(Preset::config)
}
