//! Decentralized AP selection in dense WLANs with multi-armed bandits.
//!
//! Each station (STA) runs its own bandit agent over the access points (APs)
//! it can detect. Rewards come from an airtime model: a STA's demand is
//! turned into a required fraction of channel time, contending STAs in an
//! AP's co-channel neighborhood share the channel proportionally once it
//! saturates, and the reward is the fraction of the demand that was served.
//!
//! Modules, bottom-up:
//!
//! * [`radio`]: path loss, received power, rate selection
//! * [`airtime`]: frame-exchange durations, required airtime, occupancy, reward
//! * [`scenario`]: seeded deployments and the STA-AP link matrix
//! * [`agents`]: strongest-signal, ε-greedy and ε-sticky policies
//! * [`engine`]: the association-period loop
//! * [`experiments`]: configs, presets, repetitions and CSV/JSON output

pub mod agents;
pub mod airtime;
pub mod engine;
pub mod error;
pub mod experiments;
pub mod radio;
pub mod rng;
pub mod scenario;

pub use agents::{EpsilonSchedule, Policy};
pub use error::{Error, Result};
pub use scenario::{Scenario, ScenarioSpec};
