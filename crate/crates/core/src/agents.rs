//! Per-STA association policies.
//!
//! Every STA starts on its strongest-signal AP. Afterwards it runs one of:
//!
//! * **strongest signal**: never moves;
//! * **ε-greedy**: with probability ε(t) re-associates to a uniformly drawn
//!   detected AP, otherwise to the AP with the highest accumulated reward;
//! * **ε-sticky** (opportunistic ε-greedy with stickiness): ε-greedy while
//!   searching, but once satisfied it holds its AP and only resumes the
//!   search after `sticky_limit` consecutive unsatisfied periods.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::radio::LinkBudget;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EpsilonSchedule {
    Static { value: f64 },
    /// ε = 1/√t
    InverseSqrt,
    /// ε = 1/t
    Inverse,
}

impl EpsilonSchedule {
    pub fn validate(&self) -> Result<()> {
        match *self {
            EpsilonSchedule::Static { value } if !(0.0..=1.0).contains(&value) => {
                Err(Error::config(format!("static epsilon must be in [0, 1], got {value}")))
            }
            _ => Ok(()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            EpsilonSchedule::Static { value } => format!("{value}"),
            EpsilonSchedule::InverseSqrt => "inv-sqrt".into(),
            EpsilonSchedule::Inverse => "inv".into(),
        }
    }
}

/// Exploration probability at association period `t` (clamped to `t >= 1`).
pub fn epsilon_value(schedule: &EpsilonSchedule, t: u64) -> f64 {
    let t = t.max(1) as f64;
    match *schedule {
        EpsilonSchedule::Static { value } => value,
        EpsilonSchedule::InverseSqrt => 1.0 / t.sqrt(),
        EpsilonSchedule::Inverse => 1.0 / t,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Policy {
    StrongestSignal,
    EpsilonGreedy {
        epsilon: EpsilonSchedule,
        #[serde(default)]
        explore_excludes_current: bool,
    },
    EpsilonSticky {
        epsilon: EpsilonSchedule,
        sticky_limit: u32,
        #[serde(default)]
        explore_excludes_current: bool,
    },
}

impl Policy {
    pub fn greedy(epsilon: f64) -> Self {
        Policy::EpsilonGreedy {
            epsilon: EpsilonSchedule::Static { value: epsilon },
            explore_excludes_current: false,
        }
    }

    pub fn sticky(epsilon: f64, sticky_limit: u32) -> Self {
        Self::sticky_with(EpsilonSchedule::Static { value: epsilon }, sticky_limit)
    }

    pub fn sticky_with(epsilon: EpsilonSchedule, sticky_limit: u32) -> Self {
        Policy::EpsilonSticky {
            epsilon,
            sticky_limit,
            explore_excludes_current: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Policy::StrongestSignal => Ok(()),
            Policy::EpsilonGreedy { epsilon, .. } => epsilon.validate(),
            Policy::EpsilonSticky { epsilon, sticky_limit, .. } => {
                if *sticky_limit == 0 {
                    return Err(Error::config("sticky_limit must be >= 1"));
                }
                epsilon.validate()
            }
        }
    }

    pub fn epsilon(&self) -> Option<&EpsilonSchedule> {
        match self {
            Policy::StrongestSignal => None,
            Policy::EpsilonGreedy { epsilon, .. } | Policy::EpsilonSticky { epsilon, .. } => Some(epsilon),
        }
    }

    /// Short identifier, e.g. `eps-sticky_eps0.02_sc4`.
    pub fn label(&self) -> String {
        match self {
            Policy::StrongestSignal => "ss".into(),
            Policy::EpsilonGreedy { epsilon, explore_excludes_current } => {
                format!("eps-greedy_eps{}{}", epsilon.label(), if *explore_excludes_current { "_xc" } else { "" })
            }
            Policy::EpsilonSticky { epsilon, sticky_limit, explore_excludes_current } => format!(
                "eps-sticky_eps{}_sc{}{}",
                epsilon.label(),
                sticky_limit,
                if *explore_excludes_current { "_xc" } else { "" }
            ),
        }
    }
}

/// Strongest detectable AP; ties go to the lowest index.
pub fn strongest_signal(row: &[LinkBudget]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (j, link) in row.iter().enumerate() {
        if !link.detectable() {
            continue;
        }
        match best {
            Some((_, p)) if link.received_power <= p => {}
            _ => best = Some((j, link.received_power)),
        }
    }
    best.map(|(j, _)| j)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    StickyHold,
    Bandit,
}

/// Bandit memory of one STA.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgentState {
    pub policy: Policy,
    /// Ascending AP indices.
    pub detected_aps: Vec<usize>,
    /// Parallel to `detected_aps`.
    pub accumulated_reward: Vec<f64>,
    pub current_ap: usize,
    pub consecutive_unsatisfied: u32,
    pub mode: Mode,
}

impl AgentState {
    pub fn new(policy: Policy, detected_aps: Vec<usize>, initial_ap: usize) -> Result<Self> {
        policy.validate()?;
        if !detected_aps.contains(&initial_ap) {
            return Err(Error::config(format!("initial AP {initial_ap} is not among the detected APs")));
        }
        let n = detected_aps.len();
        Ok(Self {
            policy,
            detected_aps,
            accumulated_reward: vec![0.0; n],
            current_ap: initial_ap,
            consecutive_unsatisfied: 0,
            mode: Mode::Bandit,
        })
    }

    fn slot(&self, ap: usize) -> usize {
        self.detected_aps
            .iter()
            .position(|&a| a == ap)
            .expect("current AP is always a detected AP")
    }

    pub fn reward_of(&self, ap: usize) -> Option<f64> {
        self.detected_aps.iter().position(|&a| a == ap).map(|k| self.accumulated_reward[k])
    }

    /// AP with the highest accumulated reward, lowest index on ties.
    pub fn best_ap(&self) -> usize {
        let mut best = 0;
        for k in 1..self.accumulated_reward.len() {
            if self.accumulated_reward[k] > self.accumulated_reward[best] {
                best = k;
            }
        }
        self.detected_aps[best]
    }

    /// Chooses the AP for period `t` and makes it current.
    pub fn act<R: Rng + ?Sized>(&mut self, t: u64, rng: &mut R) -> usize {
        let ap = match self.policy {
            Policy::StrongestSignal => self.current_ap,
            Policy::EpsilonGreedy { .. } => decide_greedy(self, t, rng),
            Policy::EpsilonSticky { .. } => decide_sticky(self, t, rng),
        };
        self.current_ap = ap;
        ap
    }
}

fn explore_excludes_current(policy: &Policy) -> bool {
    match *policy {
        Policy::StrongestSignal => false,
        Policy::EpsilonGreedy { explore_excludes_current, .. }
        | Policy::EpsilonSticky { explore_excludes_current, .. } => explore_excludes_current,
    }
}

/// ε-greedy choice. Draws one uniform for the explore test and, when
/// exploring, one more for the AP.
pub fn decide_greedy<R: Rng + ?Sized>(state: &AgentState, t: u64, rng: &mut R) -> usize {
    let eps = state.policy.epsilon().map_or(0.0, |e| epsilon_value(e, t));
    let explore = rng.gen::<f64>() < eps;
    if !explore {
        return state.best_ap();
    }
    if explore_excludes_current(&state.policy) && state.detected_aps.len() > 1 {
        let k = rng.gen_range(0..state.detected_aps.len() - 1);
        let cur = state.slot(state.current_ap);
        state.detected_aps[if k >= cur { k + 1 } else { k }]
    } else {
        state.detected_aps[rng.gen_range(0..state.detected_aps.len())]
    }
}

/// Holds the current AP while in sticky mode, otherwise ε-greedy.
pub fn decide_sticky<R: Rng + ?Sized>(state: &AgentState, t: u64, rng: &mut R) -> usize {
    match state.mode {
        Mode::StickyHold => state.current_ap,
        Mode::Bandit => decide_greedy(state, t, rng),
    }
}

/// Credits `reward` to the current AP and advances the sticky automaton.
pub fn update(state: &mut AgentState, reward: f64, satisfied: bool) {
    debug_assert!((0.0..=1.0).contains(&reward), "reward {reward} outside [0, 1]");
    let k = state.slot(state.current_ap);
    state.accumulated_reward[k] += reward.clamp(0.0, 1.0);

    if let Policy::EpsilonSticky { sticky_limit, .. } = state.policy {
        if satisfied {
            state.mode = Mode::StickyHold;
            state.consecutive_unsatisfied = 0;
        } else if state.mode == Mode::StickyHold {
            state.consecutive_unsatisfied += 1;
            if state.consecutive_unsatisfied >= sticky_limit {
                state.mode = Mode::Bandit;
                state.consecutive_unsatisfied = 0;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radio::Rates;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn link(pr: f64, detectable: bool) -> LinkBudget {
        LinkBudget {
            distance: 1.0,
            shadowing: 0.0,
            path_loss: 20.0 - pr,
            received_power: pr,
            rates: detectable.then_some(Rates { bits_per_symbol: 117, legacy_bits_per_symbol: 24 }),
        }
    }

    #[test]
    fn strongest_signal_examples() {
        assert_eq!(strongest_signal(&[link(-70.0, true)]), Some(0));
        assert_eq!(strongest_signal(&[link(-60.0, true), link(-55.0, true), link(-70.0, true)]), Some(1));
        assert_eq!(strongest_signal(&[link(-60.0, true), link(-60.0, true)]), Some(0));
        assert_eq!(strongest_signal(&[link(-50.0, false), link(-60.0, true)]), Some(1));
        assert_eq!(strongest_signal(&[link(-90.0, false)]), None);
        assert_eq!(strongest_signal(&[]), None);
    }

    #[test]
    fn epsilon_values() {
        assert_eq!(epsilon_value(&EpsilonSchedule::Inverse, 1), 1.0);
        assert_eq!(epsilon_value(&EpsilonSchedule::Inverse, 4), 0.25);
        assert_eq!(epsilon_value(&EpsilonSchedule::InverseSqrt, 4), 0.5);
        for t in [1, 7, 1000] {
            assert_eq!(epsilon_value(&EpsilonSchedule::Static { value: 0.02 }, t), 0.02);
        }
    }

    #[test]
    fn greedy_exploits_with_lowest_index_ties() {
        let mut s = AgentState::new(Policy::greedy(0.0), vec![2, 5, 9], 2).unwrap();
        s.accumulated_reward = vec![3.0, 5.0, 5.0];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for t in 1..100 {
            assert_eq!(decide_greedy(&s, t, &mut rng), 5);
        }
    }

    #[test]
    fn greedy_zero_rewards_pick_first_detected() {
        let s = AgentState::new(Policy::greedy(0.0), vec![3, 4], 4).unwrap();
        assert_eq!(decide_greedy(&s, 1, &mut ChaCha8Rng::seed_from_u64(0)), 3);
    }

    #[test]
    fn full_exploration_is_uniform() {
        let s = AgentState::new(Policy::greedy(1.0), vec![0, 1, 2, 3], 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut counts = [0usize; 4];
        let draws = 100_000;
        for _ in 0..draws {
            counts[decide_greedy(&s, 1, &mut rng)] += 1;
        }
        for c in counts {
            let f = c as f64 / draws as f64;
            assert!((f - 0.25).abs() / 0.25 < 0.02, "{counts:?}");
        }
    }

    #[test]
    fn exploration_can_exclude_current() {
        let policy = Policy::EpsilonGreedy {
            epsilon: EpsilonSchedule::Static { value: 1.0 },
            explore_excludes_current: true,
        };
        let s = AgentState::new(policy, vec![1, 4, 6], 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut seen = [false; 7];
        for _ in 0..1000 {
            let ap = decide_greedy(&s, 1, &mut rng);
            assert_ne!(ap, 4);
            seen[ap] = true;
        }
        assert!(seen[1] && seen[6]);

        let lone = AgentState::new(policy, vec![4], 4).unwrap();
        assert_eq!(decide_greedy(&lone, 1, &mut rng), 4);
    }

    #[test]
    fn sticky_hold_ignores_epsilon() {
        let mut s = AgentState::new(Policy::sticky(1.0, 2), vec![0, 1, 2], 1).unwrap();
        s.mode = Mode::StickyHold;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for t in 1..200 {
            assert_eq!(decide_sticky(&s, t, &mut rng), 1);
        }
    }

    #[test]
    fn sticky_in_bandit_mode_matches_greedy_stream() {
        let mut sticky = AgentState::new(Policy::sticky(0.3, 2), vec![0, 2, 3, 7], 2).unwrap();
        sticky.accumulated_reward = vec![0.5, 2.0, 1.0, 0.0];
        let mut greedy = sticky.clone();
        greedy.policy = Policy::greedy(0.3);
        let mut r1 = ChaCha8Rng::seed_from_u64(99);
        let mut r2 = ChaCha8Rng::seed_from_u64(99);
        for t in 1..500 {
            assert_eq!(decide_sticky(&sticky, t, &mut r1), decide_greedy(&greedy, t, &mut r2));
        }
    }

    #[test]
    fn update_examples() {
        let mut s = AgentState::new(Policy::sticky(0.1, 4), vec![0, 1], 0).unwrap();
        update(&mut s, 1.0, true);
        assert_eq!(s.accumulated_reward, vec![1.0, 0.0]);
        assert_eq!(s.mode, Mode::StickyHold);

        for _ in 0..3 {
            update(&mut s, 0.5, false);
            assert_eq!(s.mode, Mode::StickyHold);
        }
        assert_eq!(s.consecutive_unsatisfied, 3);
        update(&mut s, 0.5, false);
        assert_eq!(s.mode, Mode::Bandit);
        assert_eq!(s.consecutive_unsatisfied, 0);

        let before = s.clone();
        update(&mut s, 0.0, false);
        assert_eq!(s, before);
    }

    #[test]
    fn sc_one_returns_to_bandit_after_single_miss() {
        let mut s = AgentState::new(Policy::sticky(0.0, 1), vec![0], 0).unwrap();
        update(&mut s, 1.0, true);
        assert_eq!(s.mode, Mode::StickyHold);
        update(&mut s, 0.4, false);
        assert_eq!(s.mode, Mode::Bandit);
    }

    #[test]
    fn greedy_update_keeps_bandit_mode() {
        let mut s = AgentState::new(Policy::greedy(0.1), vec![0, 1], 1).unwrap();
        update(&mut s, 1.0, true);
        assert_eq!(s.mode, Mode::Bandit);
        assert_eq!(s.accumulated_reward, vec![0.0, 1.0]);
    }

    #[test]
    fn invalid_agent_inputs() {
        assert!(AgentState::new(Policy::greedy(0.1), vec![0, 1], 3).is_err());
        assert!(AgentState::new(Policy::greedy(1.5), vec![0], 0).is_err());
        assert!(AgentState::new(Policy::sticky(0.1, 0), vec![0], 0).is_err());
    }

    #[test]
    fn policy_labels() {
        assert_eq!(Policy::StrongestSignal.label(), "ss");
        assert_eq!(Policy::greedy(0.02).label(), "eps-greedy_eps0.02");
        assert_eq!(Policy::sticky(0.5, 8).label(), "eps-sticky_eps0.5_sc8");
        assert_eq!(Policy::sticky_with(EpsilonSchedule::InverseSqrt, 4).label(), "eps-sticky_epsinv-sqrt_sc4");
    }
}
