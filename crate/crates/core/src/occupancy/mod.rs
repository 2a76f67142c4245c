//! Probabilistic occupancy grid with log-odds Bayesian updates, per-cell
//! Shannon entropy accounting, and exact voxel ray traversal.

mod snapshot;
mod traversal;

pub use snapshot::{read_snapshot, write_snapshot, SNAPSHOT_MAGIC, SNAPSHOT_VERSION};
pub use traversal::{traverse_ray, traverse_ray_with_spans, CellSpan};

use thiserror::Error;

use crate::geometry::{Aabb, Ray, Vec3};

/// Log-odds are clamped to this magnitude so cells stay revisable and the
/// grid entropy stays finite.
pub const LOG_ODDS_CLAMP: f64 = 10.0;

#[derive(Debug, Error, PartialEq)]
pub enum OccupancyError {
    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("grid resolution must be positive, got {0}")]
    NonPositiveResolution(f64),
    #[error("grid dims must all be at least 1, got {0:?}")]
    ZeroDims([usize; 3]),
    #[error("hit distance {t} outside (0, {max_range}]")]
    HitOutOfRange { t: f64, max_range: f64 },
    #[error("sensor noise must satisfy 0.5 < p_h < 1 and 0 < p_m < 0.5, got p_h={p_h}, p_m={p_m}")]
    InvalidNoise { p_h: f64, p_m: f64 },
    #[error("snapshot: bad magic")]
    BadMagic,
    #[error("snapshot: unsupported version {0}")]
    UnsupportedVersion(u32),
    #[error("snapshot: truncated or trailing data (expected {expected} payload bytes, found {found})")]
    PayloadSizeMismatch { expected: usize, found: usize },
    #[error("snapshot: truncated header")]
    TruncatedHeader,
    #[error("snapshot: grid of {0} cells exceeds the reader limit")]
    TooLarge(usize),
}

/// Grid placement: origin corner, cubic cell size, and cell counts per axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridConfig {
    pub origin: Vec3,
    pub resolution: f64,
    pub dims: [usize; 3],
}

impl GridConfig {
    pub fn new(origin: Vec3, resolution: f64, dims: [usize; 3]) -> Result<Self, OccupancyError> {
        // the comparison is written to also reject NaN
        if !(resolution > 0.0 && resolution.is_finite()) || !origin.is_finite() {
            return Err(OccupancyError::NonPositiveResolution(resolution));
        }
        if dims.iter().any(|&d| d == 0) {
            return Err(OccupancyError::ZeroDims(dims));
        }
        Ok(GridConfig { origin, resolution, dims })
    }

    /// Grid covering `footprint` in x/y (inflated by `margin`) and `height`
    /// meters of z starting at the footprint's base.
    pub fn for_workspace(
        footprint: Aabb,
        resolution: f64,
        height: f64,
        margin: f64,
    ) -> Result<Self, OccupancyError> {
        if resolution <= 0.0 {
            return Err(OccupancyError::NonPositiveResolution(resolution));
        }
        let min = Vec3::new(footprint.min.x - margin, footprint.min.y - margin, footprint.min.z);
        let ext = Vec3::new(
            footprint.max.x - footprint.min.x + 2.0 * margin,
            footprint.max.y - footprint.min.y + 2.0 * margin,
            height,
        );
        let dims = [
            (ext.x / resolution).ceil().max(1.0) as usize,
            (ext.y / resolution).ceil().max(1.0) as usize,
            (ext.z / resolution).ceil().max(1.0) as usize,
        ];
        GridConfig::new(min, resolution, dims)
    }

    pub fn cell_count(&self) -> usize {
        self.dims[0] * self.dims[1] * self.dims[2]
    }

    pub fn aabb(&self) -> Aabb {
        let ext = Vec3::new(
            self.dims[0] as f64 * self.resolution,
            self.dims[1] as f64 * self.resolution,
            self.dims[2] as f64 * self.resolution,
        );
        Aabb { min: self.origin, max: self.origin + ext }
    }

    /// Cell containing `p`, or `None` outside the grid.
    pub fn cell_of(&self, p: Vec3) -> Option<[usize; 3]> {
        let rel = (p - self.origin) / self.resolution;
        let idx = [rel.x.floor(), rel.y.floor(), rel.z.floor()];
        for (axis, &i) in idx.iter().enumerate() {
            if i < 0.0 || i >= self.dims[axis] as f64 {
                return None;
            }
        }
        Some([idx[0] as usize, idx[1] as usize, idx[2] as usize])
    }

    pub fn cell_center(&self, cell: [usize; 3]) -> Vec3 {
        self.origin
            + Vec3::new(
                (cell[0] as f64 + 0.5) * self.resolution,
                (cell[1] as f64 + 0.5) * self.resolution,
                (cell[2] as f64 + 0.5) * self.resolution,
            )
    }
}

/// Hit and miss probabilities of the virtual sensor (`p_h`, `p_m`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensorNoiseParams {
    pub p_h: f64,
    pub p_m: f64,
}

impl SensorNoiseParams {
    pub fn new(p_h: f64, p_m: f64) -> Result<Self, OccupancyError> {
        if !(0.5 < p_h && p_h < 1.0 && 0.0 < p_m && p_m < 0.5) {
            return Err(OccupancyError::InvalidNoise { p_h, p_m });
        }
        Ok(SensorNoiseParams { p_h, p_m })
    }

    pub fn hit_log_odds(&self) -> f64 {
        (self.p_h / (1.0 - self.p_h)).ln()
    }

    pub fn miss_log_odds(&self) -> f64 {
        (self.p_m / (1.0 - self.p_m)).ln()
    }
}

impl Default for SensorNoiseParams {
    fn default() -> Self {
        SensorNoiseParams { p_h: 0.7, p_m: 0.4 }
    }
}

/// Per-ray measurement outcome fed into [`OccupancyGrid::apply_measurement`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeasurementOutcome {
    /// Contact at ray parameter `t` (meters along the ray).
    Hit { t: f64 },
    /// No contact over the whole traversed span.
    Miss,
}

/// Dense occupancy grid storing log-odds per cell; probabilities stay in
/// (0, 1) via the clamp. A fresh grid is all-unknown (p = 0.5, L = 0).
#[derive(Debug, Clone, PartialEq)]
pub struct OccupancyGrid {
    pub config: GridConfig,
    log_odds: Vec<f64>,
}

impl OccupancyGrid {
    pub fn new(config: GridConfig) -> Self {
        let n = config.cell_count();
        OccupancyGrid { config, log_odds: vec![0.0; n] }
    }

    pub(crate) fn from_raw(config: GridConfig, log_odds: Vec<f64>) -> Self {
        debug_assert_eq!(config.cell_count(), log_odds.len());
        OccupancyGrid { config, log_odds }
    }

    /// Linear index, x-fastest.
    pub fn index(&self, cell: [usize; 3]) -> usize {
        cell[0] + self.config.dims[0] * (cell[1] + self.config.dims[1] * cell[2])
    }

    pub fn log_odds_at(&self, cell: [usize; 3]) -> f64 {
        self.log_odds[self.index(cell)]
    }

    pub fn log_odds_raw(&self) -> &[f64] {
        &self.log_odds
    }

    pub fn probability_at(&self, cell: [usize; 3]) -> f64 {
        log_odds_to_probability(self.log_odds_at(cell))
    }

    pub fn add_log_odds(&mut self, cell: [usize; 3], delta: f64) {
        let i = self.index(cell);
        self.log_odds[i] = (self.log_odds[i] + delta).clamp(-LOG_ODDS_CLAMP, LOG_ODDS_CLAMP);
    }

    /// Applies one ray observation. On a hit, every traversed cell strictly
    /// before the hit cell accumulates the miss log-odds and the hit cell the
    /// hit log-odds; on a miss every traversed cell accumulates the miss
    /// log-odds. Hits that land outside the grid degrade to misses along the
    /// in-grid portion.
    pub fn apply_measurement(
        &mut self,
        ray: &Ray,
        outcome: MeasurementOutcome,
        noise: &SensorNoiseParams,
    ) -> Result<(), OccupancyError> {
        for (cell, delta) in measurement_increments(&self.config, ray, outcome, noise)? {
            self.add_log_odds(cell, delta);
        }
        Ok(())
    }

    /// Total Shannon entropy in bits: sum of per-cell binary entropies.
    pub fn entropy_bits(&self) -> f64 {
        self.log_odds
            .iter()
            .map(|&l| binary_entropy(log_odds_to_probability(l)))
            .sum()
    }
}

/// Per-cell log-odds increments a single ray observation would apply, in
/// traversal order. This is the sensor model shared by the grid update and
/// the planner's simulated (scratch) updates.
pub fn measurement_increments(
    config: &GridConfig,
    ray: &Ray,
    outcome: MeasurementOutcome,
    noise: &SensorNoiseParams,
) -> Result<Vec<([usize; 3], f64)>, OccupancyError> {
    let l_hit = noise.hit_log_odds();
    let l_miss = noise.miss_log_odds();
    match outcome {
        MeasurementOutcome::Miss => Ok(traverse_ray(config, ray)
            .into_iter()
            .map(|cell| (cell, l_miss))
            .collect()),
        MeasurementOutcome::Hit { t } => {
            if !(t > 0.0 && t <= ray.max_range) {
                return Err(OccupancyError::HitOutOfRange { t, max_range: ray.max_range });
            }
            let truncated = Ray { max_range: t, ..*ray };
            let hit_cell = config.cell_of(ray.point_at(t));
            let cells = traverse_ray(config, &truncated);
            let last_is_hit = match (hit_cell, cells.last()) {
                (Some(h), Some(&last)) => h == last,
                _ => false,
            };
            let n = cells.len();
            Ok(cells
                .into_iter()
                .enumerate()
                .map(|(i, cell)| {
                    let inc = if last_is_hit && i + 1 == n { l_hit } else { l_miss };
                    (cell, inc)
                })
                .collect())
        }
    }
}

pub fn log_odds_to_probability(l: f64) -> f64 {
    1.0 / (1.0 + (-l).exp())
}

pub fn probability_to_log_odds(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

fn binary_entropy(p: f64) -> f64 {
    let mut h = 0.0;
    if p > 0.0 {
        h -= p * p.log2();
    }
    if p < 1.0 {
        h -= (1.0 - p) * (1.0 - p).log2();
    }
    h
}

/// Binary Shannon entropy of a cell occupancy probability, in bits, with
/// `0 log 0 = 0`.
pub fn cell_entropy(p: f64) -> Result<f64, OccupancyError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(OccupancyError::InvalidProbability(p));
    }
    Ok(binary_entropy(p))
}
