//! Brute-force and bookkeeping oracles for the period engine.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use apsel::agents::{Mode, Policy};
use apsel::engine::{evaluate_period, neighbor_set, run_simulation, Simulation};
use apsel::scenario::{ApPlacement, Scenario, ScenarioSpec, StaPlacement};

fn small(m: usize, n: usize, channels: u32, seed: u64) -> Scenario {
    ScenarioSpec {
        area: [30.0, 30.0],
        n_channels: channels,
        demand_bps: 6e6,
        aps: ApPlacement::Uniform { count: m },
        stas: StaPlacement::Uniform { count: n },
        ..ScenarioSpec::toy(StaPlacement::Uniform { count: n })
    }
    .build(seed)
    .unwrap()
}

/// Every association of every STA to one of its detected APs.
fn all_associations(s: &Scenario) -> Vec<Vec<Option<usize>>> {
    let mut out = vec![Vec::new()];
    for d in &s.detected {
        let choices: Vec<Option<usize>> = if d.is_empty() { vec![None] } else { d.iter().copied().map(Some).collect() };
        out = out
            .into_iter()
            .flat_map(|prefix| {
                choices.iter().map(move |c| {
                    let mut v = prefix.clone();
                    v.push(*c);
                    v
                })
            })
            .collect();
    }
    out
}

#[test]
fn evaluate_period_matches_enumeration() {
    let mut total = 0;
    for seed in 0..40 {
        let m = 1 + (seed as usize % 3);
        let n = 1 + (seed as usize % 4);
        let s = small(m, n, 1 + (seed % 2) as u32, seed);
        for assoc in all_associations(&s) {
            let out = evaluate_period(&s, &assoc).unwrap();
            for j in 0..m {
                let set = neighbor_set(j, &s, &assoc);
                let airtimes: Vec<f64> = set.iter().map(|&i| s.airtime[i][assoc[i].unwrap()].unwrap()).collect();
                let sum: f64 = airtimes.iter().sum();
                assert!((out.occupancy[j] - sum.min(1.0)).abs() < 1e-12);
                for &i in &set {
                    if assoc[i] == Some(j) {
                        let u = s.airtime[i][j].unwrap();
                        let zeta = u / sum.max(1.0);
                        assert!((out.zeta[i] - zeta).abs() <= 1e-12 * zeta);
                        assert_eq!(out.satisfied[i], sum <= 1.0 + 1e-9 * sum);
                    }
                }
            }
            total += 1;
        }
    }
    assert!(total > 100, "only {total} associations enumerated");
}

#[test]
fn exploit_only_agents_settle_on_their_own_argmax() {
    for seed in 0..30 {
        let s = small(3, 4, 1, seed);
        let mut sim = Simulation::new(&s, &Policy::greedy(0.0), seed).unwrap();
        let mut last = None;
        for _ in 0..30 {
            last = Some(sim.step().unwrap());
        }
        let last = last.unwrap();
        for (i, agent) in sim.agents().iter().enumerate() {
            if let Some(a) = agent {
                assert_eq!(last.association[i], Some(a.best_ap()));
            }
        }
    }
}

#[test]
fn accumulated_reward_equals_sum_of_rewards() {
    let spec = ScenarioSpec::toy(StaPlacement::Clustered { count: 40, per_cluster: 10, side: 10.0 });
    let s = spec.build(3).unwrap();
    for policy in [Policy::greedy(0.2), Policy::sticky(0.1, 2)] {
        let mut sim = Simulation::new(&s, &policy, 11).unwrap();
        let mut credited = vec![0.0; s.n_stas()];
        for _ in 0..=150 {
            let rec = sim.step().unwrap();
            for (i, f) in rec.served_fraction.iter().enumerate() {
                if rec.association[i].is_some() {
                    credited[i] += f;
                }
            }
        }
        for (i, agent) in sim.agents().iter().enumerate() {
            if let Some(a) = agent {
                let total: f64 = a.accumulated_reward.iter().sum();
                assert!((total - credited[i]).abs() < 1e-9, "STA {i}: {total} vs {}", credited[i]);
            }
        }
    }
}

#[test]
fn period_records_respect_invariants() {
    let spec = ScenarioSpec::toy(StaPlacement::Clustered { count: 64, per_cluster: 10, side: 10.0 });
    let s = spec.build(8).unwrap();
    let recs = run_simulation(&s, &Policy::sticky(0.1, 2), 100, 4).unwrap();
    assert_eq!(recs.len(), 101);
    for r in &recs {
        assert!(r.satisfied_count <= s.n_stas());
        assert!(r.occupancy.iter().all(|u| (0.0..=1.0).contains(u)));
        assert!(r.served_fraction.iter().all(|f| (0.0..=1.0).contains(f)));
        for (i, a) in r.association.iter().enumerate() {
            match a {
                Some(j) => assert!(s.detected[i].contains(j)),
                None => assert!(s.detected[i].is_empty()),
            }
        }
    }
    // replay
    assert_eq!(recs, run_simulation(&s, &Policy::sticky(0.1, 2), 100, 4).unwrap());
}

#[test]
fn unbounded_stickiness_is_absorbing() {
    let spec = ScenarioSpec::toy(StaPlacement::Clustered { count: 64, per_cluster: 10, side: 10.0 });
    let s = spec.build(21).unwrap();
    let mut sim = Simulation::new(&s, &Policy::sticky(0.3, u32::MAX), 2).unwrap();
    let mut locked: Vec<Option<usize>> = vec![None; s.n_stas()];
    for _ in 0..200 {
        let rec = sim.step().unwrap();
        for i in 0..s.n_stas() {
            if let Some(ap) = locked[i] {
                assert_eq!(rec.association[i], Some(ap), "STA {i} left its AP after being satisfied");
            } else if rec.satisfied[i] {
                locked[i] = rec.association[i];
            }
        }
        for a in sim.agents().iter().flatten() {
            if a.mode == Mode::StickyHold {
                assert!(locked.contains(&Some(a.current_ap)));
            }
        }
    }
}

#[test]
fn sticky_agents_wait_out_the_counter_before_moving() {
    let spec = ScenarioSpec::toy(StaPlacement::Clustered { count: 64, per_cluster: 10, side: 10.0 });
    let s = spec.build(5).unwrap();
    for sc in [1u32, 3, 6] {
        let recs = run_simulation(&s, &Policy::sticky(0.5, sc), 300, 17).unwrap();
        for i in 0..s.n_stas() {
            // Some(k): holding with k misses since the last satisfied period.
            let mut holding: Option<u32> = None;
            for w in recs.windows(2) {
                let (prev, cur) = (&w[0], &w[1]);
                holding = match (prev.satisfied[i], holding) {
                    (true, _) => Some(0),
                    (false, Some(k)) if k + 1 < sc => Some(k + 1),
                    (false, _) => None,
                };
                if cur.association[i] != prev.association[i] {
                    assert!(holding.is_none(), "SC={sc} STA {i} moved while holding at period {}", cur.period);
                }
            }
        }
    }
}

#[test]
fn evaluation_is_permutation_equivariant() {
    let spec = ScenarioSpec::toy(StaPlacement::Uniform { count: 20 });
    let s = spec.build(9).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let assoc: Vec<Option<usize>> = s
        .detected
        .iter()
        .map(|d| (!d.is_empty()).then(|| d[rng.gen_range(0..d.len())]))
        .collect();
    let out = evaluate_period(&s, &assoc).unwrap();

    let mut perm: Vec<usize> = (0..s.n_stas()).collect();
    perm.reverse();
    let mut p = s.clone();
    p.stas = perm.iter().map(|&i| s.stas[i]).collect();
    p.links = perm.iter().map(|&i| s.links[i].clone()).collect();
    p.detected = perm.iter().map(|&i| s.detected[i].clone()).collect();
    p.airtime = perm.iter().map(|&i| s.airtime[i].clone()).collect();
    let passoc: Vec<Option<usize>> = perm.iter().map(|&i| assoc[i]).collect();
    let pout = evaluate_period(&p, &passoc).unwrap();
    for (k, &i) in perm.iter().enumerate() {
        assert!((pout.zeta[k] - out.zeta[i]).abs() < 1e-12);
        assert_eq!(pout.satisfied[k], out.satisfied[i]);
    }
    for j in 0..s.n_aps() {
        assert!((pout.occupancy[j] - out.occupancy[j]).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn neighborhood_shares_never_exceed_one(seed in 0u64..10_000, m in 1usize..5, n in 1usize..12, ch in 1u32..3) {
        let s = small(m, n, ch, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let assoc: Vec<Option<usize>> = s
            .detected
            .iter()
            .map(|d| (!d.is_empty()).then(|| d[rng.gen_range(0..d.len())]))
            .collect();
        let out = evaluate_period(&s, &assoc).unwrap();
        for j in 0..m {
            let set = neighbor_set(j, &s, &assoc);
            let sum: f64 = set.iter().map(|&i| s.airtime[i][assoc[i].unwrap()].unwrap()).sum();
            let shares: f64 = set.iter().map(|&i| s.airtime[i][assoc[i].unwrap()].unwrap() / sum.max(1.0)).sum();
            prop_assert!(shares <= 1.0 + 1e-12);
        }
        for i in 0..n {
            prop_assert!(out.zeta[i] <= out.required[i] + 1e-15);
        }
    }
}
