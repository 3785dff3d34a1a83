//! A single STA agent driven by hand-written rewards, showing how the greedy
//! and sticky variants react to the same feedback.

use apsel::agents::{update, AgentState, Mode, Policy};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

// AP 2 serves the whole demand, AP 0 and AP 1 serve part of it.
fn feedback(ap: usize) -> (f64, bool) {
    match ap {
        2 => (1.0, true),
        1 => (0.6, false),
        _ => (0.3, false),
    }
}

fn main() -> apsel::Result<()> {
    for policy in [Policy::greedy(0.2), Policy::sticky(0.2, 3)] {
        let mut agent = AgentState::new(policy.clone(), vec![0, 1, 2], 0)?;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (r, s) = feedback(0);
        update(&mut agent, r, s);
        let mut path = String::new();
        for t in 1..=40 {
            let ap = agent.act(t, &mut rng);
            let (r, s) = feedback(ap);
            update(&mut agent, r, s);
            path.push(char::from(b'0' + ap as u8));
        }
        let mode = if agent.mode == Mode::StickyHold { "hold" } else { "bandit" };
        println!("{:<28} {path}  rewards {:?} mode {mode}", policy.label(), agent.accumulated_reward);
    }
    Ok(())
}
