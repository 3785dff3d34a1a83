//! Airtime accounting for downlink 802.11 flows.
//!
//! A frame exchange is DATA + SIFS + ACK + DIFS + one empty slot; a flow of
//! `w` b/s with frames of `L` bits needs `w/L` exchanges per second, each
//! preceded by the mean backoff. The resulting fraction of channel time is the
//! STA's required airtime `u`. When the airtime contending at an AP exceeds 1,
//! every contender gets a proportional share.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// MAC/PHY timing constants. Durations in seconds, lengths in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MacParameters {
    pub t_phy_legacy: f64,
    pub t_phy_he_su: f64,
    pub sigma: f64,
    pub sigma_legacy: f64,
    pub sifs: f64,
    pub difs: f64,
    pub mean_backoff_slots: f64,
    pub t_empty_slot: f64,
    pub l_sf: u32,
    pub l_mh: u32,
    pub l_tb: u32,
    pub l_ack: u32,
    pub frame_bits: u32,
}

impl Default for MacParameters {
    fn default() -> Self {
        Self {
            t_phy_legacy: 20e-6,
            t_phy_he_su: 52e-6,
            sigma: 16e-6,
            sigma_legacy: 4e-6,
            sifs: 16e-6,
            difs: 34e-6,
            mean_backoff_slots: 7.5,
            t_empty_slot: 9e-6,
            l_sf: 32,
            l_mh: 272,
            l_tb: 6,
            l_ack: 112,
            frame_bits: 12_000,
        }
    }
}

impl MacParameters {
    pub fn validate(&self) -> Result<()> {
        let reals = [
            self.t_phy_legacy,
            self.t_phy_he_su,
            self.sigma,
            self.sigma_legacy,
            self.sifs,
            self.difs,
            self.mean_backoff_slots,
            self.t_empty_slot,
        ];
        if reals.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::config("MAC timing parameters must be finite and > 0"));
        }
        let bits = [self.l_sf, self.l_mh, self.l_tb, self.l_ack, self.frame_bits];
        if bits.contains(&0) {
            return Err(Error::config("MAC bit lengths must be > 0"));
        }
        Ok(())
    }

    fn data_bits(&self) -> u64 {
        u64::from(self.l_sf) + u64::from(self.l_mh) + u64::from(self.frame_bits) + u64::from(self.l_tb)
    }

    fn ack_bits(&self) -> u64 {
        u64::from(self.l_sf) + u64::from(self.l_ack) + u64::from(self.l_tb)
    }
}

/// Throughput a STA requires, with the frame size it is carried in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Demand {
    /// Bits per second.
    pub throughput: f64,
    pub frame_bits: u32,
}

impl Demand {
    pub fn new(throughput: f64, frame_bits: u32) -> Result<Self> {
        if !(throughput.is_finite() && throughput >= 0.0) {
            return Err(Error::config(format!("demand must be finite and >= 0, got {throughput}")));
        }
        if frame_bits == 0 {
            return Err(Error::config("frame size must be > 0 bits"));
        }
        Ok(Self { throughput, frame_bits })
    }
}

fn symbols(bits: u64, per_symbol: u32) -> Result<u64> {
    if per_symbol == 0 {
        return Err(Error::domain("bits per symbol must be > 0"));
    }
    Ok(bits.div_ceil(u64::from(per_symbol)))
}

/// Duration of an HE SU data frame.
pub fn data_duration(bits_per_symbol: u32, mac: &MacParameters) -> Result<f64> {
    let n = symbols(mac.data_bits(), bits_per_symbol)?;
    Ok(mac.t_phy_he_su + n as f64 * mac.sigma)
}

/// Duration of a legacy ACK.
pub fn ack_duration(legacy_bits_per_symbol: u32, mac: &MacParameters) -> Result<f64> {
    let n = symbols(mac.ack_bits(), legacy_bits_per_symbol)?;
    Ok(mac.t_phy_legacy + n as f64 * mac.sigma_legacy)
}

/// DATA + SIFS + ACK + DIFS + empty slot.
pub fn exchange_duration(bits_per_symbol: u32, legacy_bits_per_symbol: u32, mac: &MacParameters) -> Result<f64> {
    Ok(data_duration(bits_per_symbol, mac)?
        + mac.sifs
        + ack_duration(legacy_bits_per_symbol, mac)?
        + mac.difs
        + mac.t_empty_slot)
}

/// Fraction of channel time per second that `demand` needs at the given
/// rates. May exceed 1.
///
/// The frame size used is `demand.frame_bits`; `mac.frame_bits` is ignored
/// here so heterogeneous frame sizes can be expressed per demand.
pub fn required_airtime(
    demand: &Demand,
    bits_per_symbol: u32,
    legacy_bits_per_symbol: u32,
    mac: &MacParameters,
) -> Result<f64> {
    let mac = MacParameters {
        frame_bits: demand.frame_bits,
        ..*mac
    };
    let t = exchange_duration(bits_per_symbol, legacy_bits_per_symbol, &mac)?;
    Ok(demand.throughput / f64::from(demand.frame_bits) * (mac.mean_backoff_slots * mac.t_empty_slot + t))
}

/// Channel occupancy seen by an AP: the contending airtime, capped at 1.
pub fn ap_occupancy(airtimes: &[f64]) -> f64 {
    airtimes.iter().sum::<f64>().min(1.0)
}

/// Airtime actually received by a STA needing `u_i` when the airtimes
/// contending at its AP (including `u_i` itself) sum to `set_sum`.
pub fn station_reward_from_sum(u_i: f64, set_sum: f64) -> f64 {
    u_i / set_sum.max(1.0)
}

pub fn station_reward(u_i: f64, airtimes_in_set: &[f64]) -> f64 {
    station_reward_from_sum(u_i, airtimes_in_set.iter().sum())
}

/// Tolerance on the served fraction below which a STA counts as unsatisfied.
pub const SATISFACTION_TOLERANCE: f64 = 1e-9;

/// Share of the required airtime that was delivered, in `[0, 1]`.
pub fn served_fraction(zeta: f64, u_i: f64) -> f64 {
    if u_i <= 0.0 {
        1.0
    } else {
        (zeta / u_i).clamp(0.0, 1.0)
    }
}

pub fn is_satisfied(served_fraction: f64) -> bool {
    served_fraction >= 1.0 - SATISFACTION_TOLERANCE
}
