//! Deployment generation: AP/STA placement, channel draws and the link matrix.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::airtime::{required_airtime, Demand, MacParameters};
use crate::error::{Error, Result};
use crate::radio::{path_loss, received_power, LinkBudget, PathLossParams, RatePolicy};
use crate::rng;

/// Distances below this are clamped before evaluating path loss.
pub const MIN_DISTANCE: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Position {
    pub x: f64,
    pub y: f64,
}

impl Position {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Position) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Rectangular deployment area anchored at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Area {
    pub width: f64,
    pub height: f64,
}

impl Area {
    pub fn new(width: f64, height: f64) -> Result<Self> {
        if !(width.is_finite() && height.is_finite() && width > 0.0 && height > 0.0) {
            return Err(Error::config(format!("area sides must be > 0, got {width}x{height}")));
        }
        Ok(Self { width, height })
    }

    pub fn contains(&self, p: &Position) -> bool {
        (0.0..=self.width).contains(&p.x) && (0.0..=self.height).contains(&p.y)
    }

    pub fn center(&self) -> Position {
        Position::new(self.width / 2.0, self.height / 2.0)
    }

    fn uniform_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Position {
        Position::new(rng.gen_range(0.0..=self.width), rng.gen_range(0.0..=self.height))
    }
}

/// APs at the cell centers of a `rows x cols` partition of the area.
pub fn place_aps_grid(rows: usize, cols: usize, area: &Area) -> Vec<Position> {
    let cw = area.width / cols as f64;
    let ch = area.height / rows as f64;
    (0..rows)
        .flat_map(|r| (0..cols).map(move |c| Position::new((c as f64 + 0.5) * cw, (r as f64 + 0.5) * ch)))
        .collect()
}

pub fn place_aps_uniform<R: Rng + ?Sized>(m: usize, area: &Area, rng: &mut R) -> Vec<Position> {
    (0..m).map(|_| area.uniform_point(rng)).collect()
}

pub fn place_stas_uniform<R: Rng + ?Sized>(n: usize, area: &Area, rng: &mut R) -> Vec<Position> {
    (0..n).map(|_| area.uniform_point(rng)).collect()
}

/// Square clusters of side `cluster_side` with centers drawn so the whole
/// square lies inside the area; STAs uniform inside their cluster.
///
/// STAs are returned cluster by cluster.
pub fn place_stas_clustered<R: Rng + ?Sized>(
    cluster_count: usize,
    per_cluster: usize,
    cluster_side: f64,
    area: &Area,
    rng: &mut R,
) -> Result<Vec<Position>> {
    if !(cluster_side >= 0.0) || cluster_side > area.width.min(area.height) {
        return Err(Error::config(format!(
            "cluster side {cluster_side} does not fit in a {}x{} area",
            area.width, area.height
        )));
    }
    let half = cluster_side / 2.0;
    let mut out = Vec::with_capacity(cluster_count * per_cluster);
    for _ in 0..cluster_count {
        let cx = rng.gen_range(half..=area.width - half);
        let cy = rng.gen_range(half..=area.height - half);
        for _ in 0..per_cluster {
            let (x, y) = if half > 0.0 {
                (rng.gen_range(cx - half..=cx + half), rng.gen_range(cy - half..=cy + half))
            } else {
                (cx, cy)
            };
            out.push(Position::new(x, y));
        }
    }
    Ok(out)
}

/// `n` STAs in clusters of `per_cluster`; the last cluster holds the
/// remainder when `n` is not a multiple of `per_cluster`.
pub fn place_stas_in_clusters<R: Rng + ?Sized>(
    n: usize,
    per_cluster: usize,
    cluster_side: f64,
    area: &Area,
    rng: &mut R,
) -> Result<Vec<Position>> {
    if per_cluster == 0 {
        return Err(Error::config("per_cluster must be > 0"));
    }
    let mut out = place_stas_clustered(n.div_ceil(per_cluster), per_cluster, cluster_side, area, rng)?;
    out.truncate(n);
    Ok(out)
}

/// Independent uniform draws from `1..=n_channels`.
pub fn assign_channels<R: Rng + ?Sized>(m: usize, n_channels: u32, rng: &mut R) -> Vec<u32> {
    (0..m).map(|_| rng.gen_range(1..=n_channels)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AccessPoint {
    pub position: Position,
    pub channel: u32,
    pub tx_power_dbm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Station {
    pub position: Position,
    pub demand: Demand,
}

/// Link matrix indexed `[sta][ap]`, with one frozen shadowing draw per pair.
pub fn build_links<R: Rng + ?Sized>(
    stas: &[Station],
    aps: &[AccessPoint],
    params: &PathLossParams,
    policy: &RatePolicy,
    rng: &mut R,
) -> Result<Vec<Vec<LinkBudget>>> {
    stas.iter()
        .map(|sta| {
            aps.iter()
                .map(|ap| {
                    let d = sta.position.distance(&ap.position).max(MIN_DISTANCE);
                    let gs = params.sample_shadowing(rng);
                    LinkBudget::compute(d, ap.tx_power_dbm, params, gs, policy)
                })
                .collect()
        })
        .collect()
}

/// Radio models shared by every scenario of an experiment.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RadioConfig {
    pub path_loss: PathLossParams,
    pub rates: RatePolicy,
    pub mac: MacParameters,
}

impl RadioConfig {
    pub fn validate(&self) -> Result<()> {
        self.path_loss.validate()?;
        self.rates.validate()?;
        self.mac.validate()
    }
}

/// A fully resolved deployment. Immutable once built.
#[derive(Debug, Clone, Serialize)]
pub struct Scenario {
    pub area: Area,
    pub seed: u64,
    pub aps: Vec<AccessPoint>,
    pub stas: Vec<Station>,
    pub radio: RadioConfig,
    /// `[sta][ap]`.
    pub links: Vec<Vec<LinkBudget>>,
    /// Detectable APs per STA, ascending index order.
    pub detected: Vec<Vec<usize>>,
    /// Required airtime `[sta][ap]`, `None` where the AP is not detectable.
    pub airtime: Vec<Vec<Option<f64>>>,
    /// For each AP, the other APs on the same channel within its coverage range.
    pub ap_neighbors: Vec<Vec<usize>>,
}

impl Scenario {
    /// Assembles a scenario from explicit APs and STAs. Shadowing for every
    /// STA-AP pair is drawn from `shadowing_rng`.
    pub fn assemble<R: Rng + ?Sized>(
        area: Area,
        aps: Vec<AccessPoint>,
        stas: Vec<Station>,
        radio: RadioConfig,
        seed: u64,
        shadowing_rng: &mut R,
    ) -> Result<Self> {
        radio.validate()?;
        for ap in &aps {
            if !area.contains(&ap.position) {
                return Err(Error::config(format!("AP at {:?} is outside the area", ap.position)));
            }
            if ap.channel == 0 {
                return Err(Error::config("channels are numbered from 1"));
            }
        }
        if let Some(sta) = stas.iter().find(|s| !area.contains(&s.position)) {
            return Err(Error::config(format!("STA at {:?} is outside the area", sta.position)));
        }

        let links = build_links(&stas, &aps, &radio.path_loss, &radio.rates, shadowing_rng)?;
        let detected = links
            .iter()
            .map(|row| row.iter().enumerate().filter(|(_, l)| l.detectable()).map(|(j, _)| j).collect())
            .collect();
        let airtime = links
            .iter()
            .zip(&stas)
            .map(|(row, sta)| {
                row.iter()
                    .map(|l| {
                        l.rates
                            .map(|r| required_airtime(&sta.demand, r.bits_per_symbol, r.legacy_bits_per_symbol, &radio.mac))
                            .transpose()
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let ap_neighbors = ap_coverage(&aps, &radio)?;

        Ok(Self {
            area,
            seed,
            aps,
            stas,
            radio,
            links,
            detected,
            airtime,
            ap_neighbors,
        })
    }

    pub fn n_aps(&self) -> usize {
        self.aps.len()
    }

    pub fn n_stas(&self) -> usize {
        self.stas.len()
    }

    pub fn link(&self, sta: usize, ap: usize) -> &LinkBudget {
        &self.links[sta][ap]
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// AP `k` is in range of AP `j` when `j` hears it above the detection
/// threshold with no shadowing. Only co-channel pairs are kept.
fn ap_coverage(aps: &[AccessPoint], radio: &RadioConfig) -> Result<Vec<Vec<usize>>> {
    aps.iter()
        .enumerate()
        .map(|(j, a)| {
            let mut out = Vec::new();
            for (k, b) in aps.iter().enumerate() {
                if k == j || a.channel != b.channel {
                    continue;
                }
                let d = a.position.distance(&b.position).max(MIN_DISTANCE);
                let pr = received_power(b.tx_power_dbm, path_loss(d, &radio.path_loss, 0.0)?);
                if pr >= radio.rates.detection_threshold {
                    out.push(k);
                }
            }
            Ok(out)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ApPlacement {
    Grid { rows: usize, cols: usize },
    Uniform { count: usize },
}

impl ApPlacement {
    pub fn count(&self) -> usize {
        match *self {
            ApPlacement::Grid { rows, cols } => rows * cols,
            ApPlacement::Uniform { count } => count,
        }
    }

    /// Same placement rule with a different AP count. Grids pick the most
    /// square `rows x cols` factorization.
    pub fn with_count(&self, m: usize) -> Self {
        match self {
            ApPlacement::Grid { .. } => {
                let rows = (1..=m).filter(|r| m % r == 0 && r * r <= m).max().unwrap_or(1);
                ApPlacement::Grid { rows, cols: m / rows.max(1) }
            }
            ApPlacement::Uniform { .. } => ApPlacement::Uniform { count: m },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StaPlacement {
    Uniform { count: usize },
    /// `count` STAs in square clusters of `per_cluster` STAs and side `side`
    /// meters; the last cluster may be partial.
    Clustered { count: usize, per_cluster: usize, side: f64 },
}

impl StaPlacement {
    pub fn count(&self) -> usize {
        match *self {
            StaPlacement::Uniform { count } => count,
            StaPlacement::Clustered { count, .. } => count,
        }
    }
}

/// Recipe for generating scenarios from a seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    /// `[width, height]` in meters.
    pub area: [f64; 2],
    #[serde(default = "default_channels")]
    pub n_channels: u32,
    #[serde(default = "default_tx_power")]
    pub tx_power_dbm: f64,
    /// Per-STA throughput demand, b/s.
    pub demand_bps: f64,
    pub aps: ApPlacement,
    pub stas: StaPlacement,
    #[serde(default)]
    pub path_loss: PathLossParams,
    #[serde(default)]
    pub rates: RatePolicy,
    #[serde(default)]
    pub mac: MacParameters,
}

fn default_channels() -> u32 {
    8
}

fn default_tx_power() -> f64 {
    20.0
}

impl ScenarioSpec {
    /// The 80x80 m area with a 4x4 AP grid used by the toy presets.
    pub fn toy(stas: StaPlacement) -> Self {
        Self {
            area: [80.0, 80.0],
            n_channels: 8,
            tx_power_dbm: 20.0,
            demand_bps: 4e6,
            aps: ApPlacement::Grid { rows: 4, cols: 4 },
            stas,
            path_loss: PathLossParams::default(),
            rates: RatePolicy::default(),
            mac: MacParameters::default(),
        }
    }

    pub fn radio(&self) -> RadioConfig {
        RadioConfig {
            path_loss: self.path_loss,
            rates: self.rates.clone(),
            mac: self.mac,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let area = Area::new(self.area[0], self.area[1])?;
        if self.n_channels == 0 {
            return Err(Error::config("n_channels must be >= 1"));
        }
        if !self.tx_power_dbm.is_finite() {
            return Err(Error::config("tx_power_dbm must be finite"));
        }
        Demand::new(self.demand_bps, self.mac.frame_bits)?;
        if self.aps.count() == 0 {
            return Err(Error::config("AP count must be > 0"));
        }
        if self.stas.count() == 0 {
            return Err(Error::config("STA count must be > 0"));
        }
        if let StaPlacement::Clustered { side, per_cluster, .. } = self.stas {
            if per_cluster == 0 {
                return Err(Error::config("per_cluster must be > 0"));
            }
            if !(side >= 0.0) || side > area.width.min(area.height) {
                return Err(Error::config(format!("cluster side {side} does not fit in the area")));
            }
        }
        self.radio().validate()
    }

    /// Builds the scenario for `seed`. Placement, channels and shadowing each
    /// use their own stream derived from the seed.
    pub fn build(&self, seed: u64) -> Result<Scenario> {
        self.validate()?;
        let area = Area::new(self.area[0], self.area[1])?;

        let ap_pos = match self.aps {
            ApPlacement::Grid { rows, cols } => place_aps_grid(rows, cols, &area),
            ApPlacement::Uniform { count } => place_aps_uniform(count, &area, &mut rng::stream(seed, "ap_placement", 0)),
        };
        let mut sta_rng = rng::stream(seed, "sta_placement", 0);
        let sta_pos = match self.stas {
            StaPlacement::Uniform { count } => place_stas_uniform(count, &area, &mut sta_rng),
            StaPlacement::Clustered { count, per_cluster, side } => {
                place_stas_in_clusters(count, per_cluster, side, &area, &mut sta_rng)?
            }
        };
        let channels = assign_channels(ap_pos.len(), self.n_channels, &mut rng::stream(seed, "channels", 0));

        let aps = ap_pos
            .into_iter()
            .zip(channels)
            .map(|(position, channel)| AccessPoint {
                position,
                channel,
                tx_power_dbm: self.tx_power_dbm,
            })
            .collect();
        let demand = Demand::new(self.demand_bps, self.mac.frame_bits)?;
        let stas = sta_pos.into_iter().map(|position| Station { position, demand }).collect();

        Scenario::assemble(area, aps, stas, self.radio(), seed, &mut rng::stream(seed, "shadowing", 0))
    }
}
