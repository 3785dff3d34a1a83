//! Indoor 5 GHz path loss, received power and rate selection.
//!
//! Path loss follows the log-distance model with a linear wall term and a
//! uniform shadowing component:
//!
//! ```text
//! PL(d) = l0 + 10·gamma·log10(d) + k·w_bar·d + gs,   gs ~ U[0, gs_max]
//! ```
//!
//! Rates are picked from a [`RatePolicy`], a table of received-power
//! thresholds mapped to data bits per HE symbol and legacy bits per symbol
//! (the latter used for the ACK).

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameters of the indoor log-distance path loss model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathLossParams {
    /// Intercept, dB.
    pub l0: f64,
    /// Path-loss exponent.
    pub gamma: f64,
    /// Attenuation per traversed wall, dB.
    pub k: f64,
    /// Average number of walls traversed per meter.
    pub w_bar: f64,
    /// Upper bound of the uniform shadowing term, dB.
    pub gs_max: f64,
}

impl Default for PathLossParams {
    /// TMB 5 GHz indoor values.
    fn default() -> Self {
        Self {
            l0: 54.12,
            gamma: 2.06067,
            k: 5.25,
            w_bar: 0.1467,
            gs_max: 9.44,
        }
    }
}

impl PathLossParams {
    pub fn validate(&self) -> Result<()> {
        let finite = [self.l0, self.gamma, self.k, self.w_bar, self.gs_max]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::config("path loss parameters must be finite"));
        }
        if self.gamma <= 0.0 {
            return Err(Error::config(format!("gamma must be > 0, got {}", self.gamma)));
        }
        if self.k < 0.0 || self.w_bar < 0.0 || self.gs_max < 0.0 {
            return Err(Error::config("k, w_bar and gs_max must be >= 0"));
        }
        Ok(())
    }

    /// Draws a shadowing value uniformly on `[0, gs_max]`.
    pub fn sample_shadowing<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        if self.gs_max == 0.0 {
            0.0
        } else {
            rng.gen_range(0.0..=self.gs_max)
        }
    }
}

/// Path loss in dB at distance `d` meters with shadowing `gs` dB.
pub fn path_loss(d: f64, p: &PathLossParams, gs: f64) -> Result<f64> {
    if !(d > 0.0) || !d.is_finite() {
        return Err(Error::domain(format!("path loss needs a positive distance, got {d}")));
    }
    Ok(p.l0 + 10.0 * p.gamma * d.log10() + p.k * p.w_bar * d + gs)
}

pub fn received_power(pt_dbm: f64, pl_db: f64) -> f64 {
    pt_dbm - pl_db
}

/// Data and legacy (ACK) bits carried per OFDM symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rates {
    pub bits_per_symbol: u32,
    pub legacy_bits_per_symbol: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateEntry {
    pub min_received_power: f64,
    pub bits_per_symbol: u32,
    pub legacy_bits_per_symbol: u32,
}

impl RateEntry {
    const fn new(min_received_power: f64, bits_per_symbol: u32, legacy_bits_per_symbol: u32) -> Self {
        Self {
            min_received_power,
            bits_per_symbol,
            legacy_bits_per_symbol,
        }
    }

    pub fn rates(&self) -> Rates {
        Rates {
            bits_per_symbol: self.bits_per_symbol,
            legacy_bits_per_symbol: self.legacy_bits_per_symbol,
        }
    }
}

/// Received-power to rate mapping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatePolicy {
    /// Sorted by strictly increasing `min_received_power`.
    pub entries: Vec<RateEntry>,
    pub detection_threshold: f64,
}

impl Default for RatePolicy {
    /// 802.11ax, 20 MHz, one spatial stream, 0.8 µs GI (234 data subcarriers,
    /// 16 µs symbols). Thresholds are the minimum receiver sensitivities per
    /// MCS. The legacy column is the non-HT control response rate used for the
    /// ACK: 6 Mb/s (24 bits) for MCS0, 12 Mb/s (48 bits) for MCS1-2 and
    /// 24 Mb/s (96 bits) from MCS3 up.
    fn default() -> Self {
        Self {
            entries: vec![
                RateEntry::new(-82.0, 117, 24),  // MCS0  BPSK 1/2
                RateEntry::new(-79.0, 234, 48),  // MCS1  QPSK 1/2
                RateEntry::new(-77.0, 351, 48),  // MCS2  QPSK 3/4
                RateEntry::new(-74.0, 468, 96),  // MCS3  16-QAM 1/2
                RateEntry::new(-70.0, 702, 96),  // MCS4  16-QAM 3/4
                RateEntry::new(-66.0, 936, 96),  // MCS5  64-QAM 2/3
                RateEntry::new(-65.0, 1053, 96), // MCS6  64-QAM 3/4
                RateEntry::new(-64.0, 1170, 96), // MCS7  64-QAM 5/6
                RateEntry::new(-59.0, 1404, 96), // MCS8  256-QAM 3/4
                RateEntry::new(-57.0, 1560, 96), // MCS9  256-QAM 5/6
                RateEntry::new(-54.0, 1755, 96), // MCS10 1024-QAM 3/4
                RateEntry::new(-52.0, 1950, 96), // MCS11 1024-QAM 5/6
            ],
            detection_threshold: -82.0,
        }
    }
}

impl RatePolicy {
    pub fn validate(&self) -> Result<()> {
        let first = self
            .entries
            .first()
            .ok_or_else(|| Error::config("rate policy needs at least one entry"))?;
        if self.entries.windows(2).any(|w| !(w[0].min_received_power < w[1].min_received_power)) {
            return Err(Error::config(
                "rate policy entries must be sorted by strictly increasing min_received_power",
            ));
        }
        if self.entries.iter().any(|e| e.bits_per_symbol == 0 || e.legacy_bits_per_symbol == 0) {
            return Err(Error::config("rate policy bits per symbol must be > 0"));
        }
        if !(self.detection_threshold <= first.min_received_power) {
            return Err(Error::config(
                "detection threshold must not exceed the lowest entry's min_received_power",
            ));
        }
        Ok(())
    }
}

/// Picks the entry with the largest threshold not above `pr_dbm`.
///
/// Returns `None` when the AP is not detectable. A detectable power that is
/// still below the lowest entry falls back to the lowest entry.
pub fn select_rates(pr_dbm: f64, policy: &RatePolicy) -> Option<Rates> {
    if !(pr_dbm >= policy.detection_threshold) {
        return None;
    }
    let idx = policy.entries.partition_point(|e| e.min_received_power <= pr_dbm);
    let entry = if idx == 0 { policy.entries.first()? } else { &policy.entries[idx - 1] };
    Some(entry.rates())
}

/// Radio view of one STA-AP pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkBudget {
    pub distance: f64,
    pub shadowing: f64,
    pub path_loss: f64,
    pub received_power: f64,
    /// `None` when the AP is not detectable from the STA.
    pub rates: Option<Rates>,
}

impl LinkBudget {
    pub fn compute(
        distance: f64,
        tx_power_dbm: f64,
        params: &PathLossParams,
        shadowing: f64,
        policy: &RatePolicy,
    ) -> Result<Self> {
        let pl = path_loss(distance, params, shadowing)?;
        let pr = received_power(tx_power_dbm, pl);
        Ok(Self {
            distance,
            shadowing,
            path_loss: pl,
            received_power: pr,
            rates: select_rates(pr, policy),
        })
    }

    pub fn detectable(&self) -> bool {
        self.rates.is_some()
    }
}
