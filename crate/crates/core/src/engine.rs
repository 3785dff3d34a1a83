//! Association-period loop.
//!
//! Each period is a three-phase step: every agent picks an AP from its own
//! state, the resulting association is evaluated as a whole, then every
//! agent is credited with its served fraction. No agent observes another's
//! decision for the same period.

use std::io::Write;

use serde::Serialize;

use crate::agents::{strongest_signal, update, AgentState, Policy};
use crate::airtime::{is_satisfied, served_fraction, station_reward_from_sum};
use crate::error::{Error, Result};
use crate::rng::{self, SimRng};
use crate::scenario::Scenario;

/// STA → serving AP, `None` for STAs that detect no AP.
pub type Association = Vec<Option<usize>>;

/// STAs contending in AP `ap`'s neighborhood: its own STAs plus those of
/// co-channel APs within its coverage range. Ascending STA order.
pub fn neighbor_set(ap: usize, scenario: &Scenario, association: &[Option<usize>]) -> Vec<usize> {
    let neighbors = &scenario.ap_neighbors[ap];
    association
        .iter()
        .enumerate()
        .filter_map(|(i, a)| match *a {
            Some(j) if j == ap || neighbors.contains(&j) => Some(i),
            _ => None,
        })
        .collect()
}

/// Evaluation of one association.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodOutcome {
    /// Required airtime per STA at its serving AP (0 when unassociated).
    pub required: Vec<f64>,
    /// Received airtime ζ per STA.
    pub zeta: Vec<f64>,
    pub served_fraction: Vec<f64>,
    pub satisfied: Vec<bool>,
    /// Occupancy U per AP.
    pub occupancy: Vec<f64>,
}

pub fn evaluate_period(scenario: &Scenario, association: &[Option<usize>]) -> Result<PeriodOutcome> {
    let n = scenario.n_stas();
    let m = scenario.n_aps();
    if association.len() != n {
        return Err(Error::domain(format!("association has {} entries for {n} STAs", association.len())));
    }

    let mut required = vec![0.0; n];
    let mut load = vec![0.0; m];
    for (i, a) in association.iter().enumerate() {
        if let Some(j) = *a {
            let u = scenario.airtime[i]
                .get(j)
                .copied()
                .flatten()
                .ok_or_else(|| Error::domain(format!("STA {i} associated to undetectable AP {j}")))?;
            required[i] = u;
            load[j] += u;
        }
    }
    let contending: Vec<f64> = (0..m)
        .map(|j| load[j] + scenario.ap_neighbors[j].iter().map(|&k| load[k]).sum::<f64>())
        .collect();
    let occupancy = contending.iter().map(|s| s.min(1.0)).collect();

    let mut zeta = vec![0.0; n];
    let mut served = vec![0.0; n];
    let mut satisfied = vec![false; n];
    for (i, a) in association.iter().enumerate() {
        if let Some(j) = *a {
            zeta[i] = station_reward_from_sum(required[i], contending[j]);
            served[i] = served_fraction(zeta[i], required[i]);
            satisfied[i] = is_satisfied(served[i]);
        }
    }
    Ok(PeriodOutcome {
        required,
        zeta,
        served_fraction: served,
        satisfied,
        occupancy,
    })
}

/// Metrics of one association period.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodRecord {
    /// 0 for the initial strongest-signal association.
    pub period: u64,
    pub association: Association,
    pub satisfied: Vec<bool>,
    pub satisfied_count: usize,
    pub served_fraction: Vec<f64>,
    /// Mean over all STAs, unassociated ones counting as 0.
    pub mean_served_fraction: f64,
    pub occupancy: Vec<f64>,
    /// Delivered throughput per STA, b/s.
    pub throughput: Vec<f64>,
}

impl PeriodRecord {
    fn new(period: u64, scenario: &Scenario, association: Association, outcome: PeriodOutcome) -> Self {
        let n = scenario.n_stas();
        let throughput: Vec<f64> = scenario
            .stas
            .iter()
            .zip(&outcome.served_fraction)
            .map(|(s, f)| s.demand.throughput * f)
            .collect();
        let mean_served_fraction = if n == 0 {
            0.0
        } else {
            outcome.served_fraction.iter().sum::<f64>() / n as f64
        };
        Self {
            period,
            association,
            satisfied_count: outcome.satisfied.iter().filter(|&&s| s).count(),
            satisfied: outcome.satisfied,
            served_fraction: outcome.served_fraction,
            mean_served_fraction,
            occupancy: outcome.occupancy,
            throughput,
        }
    }

    pub fn mean_throughput(&self) -> f64 {
        if self.throughput.is_empty() {
            0.0
        } else {
            self.throughput.iter().sum::<f64>() / self.throughput.len() as f64
        }
    }
}

/// Agents for every STA of a scenario, started on their strongest-signal AP.
pub fn initial_agents(scenario: &Scenario, policy: &Policy) -> Result<Vec<Option<AgentState>>> {
    scenario
        .links
        .iter()
        .zip(&scenario.detected)
        .map(|(row, detected)| match strongest_signal(row) {
            Some(ap) => AgentState::new(*policy, detected.clone(), ap).map(Some),
            None => Ok(None),
        })
        .collect()
}

fn current_association(agents: &[Option<AgentState>]) -> Association {
    agents.iter().map(|a| a.as_ref().map(|s| s.current_ap)).collect()
}

fn credit(agents: &mut [Option<AgentState>], outcome: &PeriodOutcome) {
    for (i, agent) in agents.iter_mut().enumerate() {
        if let Some(a) = agent {
            update(a, outcome.served_fraction[i], outcome.satisfied[i]);
        }
    }
}

/// One association period `t >= 1`. `rngs` holds one private stream per STA.
pub fn run_period(
    scenario: &Scenario,
    agents: &mut [Option<AgentState>],
    t: u64,
    rngs: &mut [SimRng],
) -> Result<PeriodRecord> {
    if t == 0 {
        return Err(Error::domain("association periods are numbered from 1"));
    }
    for (agent, rng) in agents.iter_mut().zip(rngs.iter_mut()) {
        if let Some(a) = agent {
            a.act(t, rng);
        }
    }
    let association = current_association(agents);
    let outcome = evaluate_period(scenario, &association)?;
    credit(agents, &outcome);
    Ok(PeriodRecord::new(t, scenario, association, outcome))
}

/// Stepwise driver for one run over a fixed scenario.
pub struct Simulation<'a> {
    scenario: &'a Scenario,
    agents: Vec<Option<AgentState>>,
    rngs: Vec<SimRng>,
    next_period: u64,
}

impl<'a> Simulation<'a> {
    /// Agents start on their strongest-signal AP. STA `i` draws from a private
    /// stream derived from `(seed, i)`.
    pub fn new(scenario: &'a Scenario, policy: &Policy, seed: u64) -> Result<Self> {
        let agents = initial_agents(scenario, policy)?;
        let rngs = (0..scenario.n_stas()).map(|i| rng::stream(seed, "agent", i as u64)).collect();
        Ok(Self {
            scenario,
            agents,
            rngs,
            next_period: 0,
        })
    }

    pub fn agents(&self) -> &[Option<AgentState>] {
        &self.agents
    }

    pub fn scenario(&self) -> &Scenario {
        self.scenario
    }

    /// Evaluates the strongest-signal association (period 0) on the first
    /// call and one agent period on every later call.
    pub fn step(&mut self) -> Result<PeriodRecord> {
        let t = self.next_period;
        let record = if t == 0 {
            let association = current_association(&self.agents);
            let outcome = evaluate_period(self.scenario, &association)?;
            credit(&mut self.agents, &outcome);
            PeriodRecord::new(0, self.scenario, association, outcome)
        } else {
            run_period(self.scenario, &mut self.agents, t, &mut self.rngs)?
        };
        self.next_period += 1;
        Ok(record)
    }
}

/// Initial strongest-signal record followed by `periods` agent periods.
pub fn run_simulation(scenario: &Scenario, policy: &Policy, periods: u64, seed: u64) -> Result<Vec<PeriodRecord>> {
    let mut sim = Simulation::new(scenario, policy, seed)?;
    (0..=periods).map(|_| sim.step()).collect()
}

/// Writes one JSON object per record, one per line.
pub fn write_trace_jsonl<W: Write>(records: &[PeriodRecord], mut out: W) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agents::Mode;
    use crate::airtime::Demand;
    use crate::radio::PathLossParams;
    use crate::scenario::{AccessPoint, Area, Position, RadioConfig, Station};

    fn radio() -> RadioConfig {
        RadioConfig {
            path_loss: PathLossParams { gs_max: 0.0, ..PathLossParams::default() },
            ..RadioConfig::default()
        }
    }

    fn ap(x: f64, y: f64, channel: u32) -> AccessPoint {
        AccessPoint { position: Position::new(x, y), channel, tx_power_dbm: 20.0 }
    }

    fn sta(x: f64, y: f64) -> Station {
        Station { position: Position::new(x, y), demand: Demand::new(4e6, 12_000).unwrap() }
    }

    fn build(aps: Vec<AccessPoint>, stas: Vec<Station>) -> Scenario {
        Scenario::assemble(Area::new(200.0, 200.0).unwrap(), aps, stas, radio(), 0, &mut rng::stream(0, "s", 0)).unwrap()
    }

    const U_TOP: f64 = (4e6 / 12_000.0) * (7.5 * 9e-6 + 251e-6);

    #[test]
    fn neighbor_sets() {
        let s = build(vec![ap(50.0, 50.0, 1)], vec![sta(50.0, 50.0), sta(51.0, 50.0)]);
        assert_eq!(neighbor_set(0, &s, &[Some(0), Some(0)]), vec![0, 1]);

        let two = |ch2| {
            build(
                vec![ap(50.0, 50.0, 1), ap(60.0, 50.0, ch2)],
                vec![sta(50.0, 50.0), sta(50.0, 51.0), sta(60.0, 50.0), sta(60.0, 51.0)],
            )
        };
        let assoc = [Some(0), Some(0), Some(1), Some(1)];
        let s = two(1);
        assert_eq!(neighbor_set(0, &s, &assoc), vec![0, 1, 2, 3]);
        assert_eq!(neighbor_set(1, &s, &assoc), vec![0, 1, 2, 3]);
        let s = two(2);
        assert_eq!(neighbor_set(0, &s, &assoc), vec![0, 1]);
        assert_eq!(neighbor_set(1, &s, &assoc), vec![2, 3]);
    }

    #[test]
    fn lone_sta_is_fully_served() {
        let s = build(vec![ap(50.0, 50.0, 1)], vec![sta(50.0, 50.0)]);
        let out = evaluate_period(&s, &[Some(0)]).unwrap();
        assert!((out.zeta[0] - U_TOP).abs() < 1e-12);
        assert_eq!(out.served_fraction[0], 1.0);
        assert!(out.satisfied[0]);
        assert!((out.occupancy[0] - U_TOP).abs() < 1e-12);
    }

    #[test]
    fn twelve_stas_saturate_one_ap() {
        let s = build(vec![ap(50.0, 50.0, 1)], (0..12).map(|_| sta(50.0, 50.0)).collect());
        let out = evaluate_period(&s, &vec![Some(0); 12]).unwrap();
        let sum = 12.0 * U_TOP;
        assert!((sum - 1.274).abs() < 1e-3);
        for i in 0..12 {
            assert!((out.zeta[i] - U_TOP / sum).abs() < 1e-12);
            assert!((out.zeta[i] - 0.0833).abs() < 1e-4);
            assert!((out.served_fraction[i] - 0.785).abs() < 1e-3);
            assert!(!out.satisfied[i]);
        }
        assert_eq!(out.occupancy[0], 1.0);
    }

    #[test]
    fn empty_network_has_zero_occupancy() {
        let s = build(vec![ap(50.0, 50.0, 1), ap(150.0, 150.0, 2)], vec![]);
        let out = evaluate_period(&s, &[]).unwrap();
        assert_eq!(out.occupancy, vec![0.0, 0.0]);
    }

    #[test]
    fn undetectable_association_is_rejected() {
        let s = build(vec![ap(0.0, 0.0, 1), ap(200.0, 200.0, 1)], vec![sta(0.0, 0.0)]);
        assert!(s.detected[0] == vec![0]);
        assert!(matches!(evaluate_period(&s, &[Some(1)]), Err(Error::Domain(_))));
    }

    #[test]
    fn zero_periods_yields_initial_record_only() {
        let s = build(vec![ap(50.0, 50.0, 1)], vec![sta(50.0, 50.0)]);
        let recs = run_simulation(&s, &Policy::greedy(0.5), 0, 1).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].period, 0);
    }

    #[test]
    fn exploit_only_keeps_strongest_signal() {
        // Two STAs near AP 1, AP 0 farther but detectable.
        let s = build(
            vec![ap(40.0, 50.0, 1), ap(55.0, 50.0, 2)],
            vec![sta(55.0, 50.0), sta(56.0, 50.0)],
        );
        assert_eq!(s.detected[0], vec![0, 1]);
        let recs = run_simulation(&s, &Policy::greedy(0.0), 2, 5).unwrap();
        let ss: Association = vec![Some(1), Some(1)];
        assert_eq!(recs[0].association, ss);
        // The initial record credits AP 1, so both exploit it afterwards even
        // though AP 0 comes first in the detected list.
        assert_eq!(recs[1].association, ss);
        assert_eq!(recs[2].association, ss);
    }

    #[test]
    fn sticky_hold_is_a_fixpoint() {
        let s = build(
            vec![ap(40.0, 50.0, 1), ap(60.0, 50.0, 2)],
            vec![sta(40.0, 50.0), sta(60.0, 50.0), sta(45.0, 50.0)],
        );
        let mut sim = Simulation::new(&s, &Policy::sticky(1.0, 3), 9).unwrap();
        let first = sim.step().unwrap();
        assert!(sim.agents().iter().flatten().all(|a| a.mode == Mode::StickyHold));
        for _ in 0..20 {
            assert_eq!(sim.step().unwrap().association, first.association);
        }
    }

    #[test]
    fn trace_is_json_lines() {
        let s = build(vec![ap(50.0, 50.0, 1)], vec![sta(50.0, 50.0)]);
        let recs = run_simulation(&s, &Policy::StrongestSignal, 3, 1).unwrap();
        let mut buf = Vec::new();
        write_trace_jsonl(&recs, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 4);
        for line in text.lines() {
            let v: serde_json::Value = serde_json::from_str(line).unwrap();
            assert!(v.get("satisfied_count").is_some());
        }
    }
}
