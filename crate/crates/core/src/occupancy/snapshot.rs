//! Flat binary grid snapshots.
//!
//! Layout, all little-endian:
//! `"OGRD"` | `u32` version | `u32` dims x, y, z | `f64` origin x, y, z |
//! `f64` resolution | `f32` log-odds payload in x-fastest order.

use super::{GridConfig, OccupancyGrid, OccupancyError};
use crate::geometry::Vec3;

pub const SNAPSHOT_MAGIC: [u8; 4] = *b"OGRD";
pub const SNAPSHOT_VERSION: u32 = 1;

/// Reader refuses grids above this cell count (guards against hostile headers).
const MAX_CELLS: usize = 100_000_000;

pub fn write_snapshot(grid: &OccupancyGrid) -> Vec<u8> {
    let cfg = &grid.config;
    let mut out = Vec::with_capacity(44 + grid.log_odds_raw().len() * 4);
    out.extend_from_slice(&SNAPSHOT_MAGIC);
    out.extend_from_slice(&SNAPSHOT_VERSION.to_le_bytes());
    for d in cfg.dims {
        out.extend_from_slice(&(d as u32).to_le_bytes());
    }
    for v in [cfg.origin.x, cfg.origin.y, cfg.origin.z, cfg.resolution] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for &l in grid.log_odds_raw() {
        out.extend_from_slice(&(l as f32).to_le_bytes());
    }
    out
}

pub fn read_snapshot(bytes: &[u8]) -> Result<OccupancyGrid, OccupancyError> {
    const HEADER: usize = 4 + 4 + 12 + 32;
    if bytes.len() < 8 {
        return Err(OccupancyError::TruncatedHeader);
    }
    if bytes[..4] != SNAPSHOT_MAGIC {
        return Err(OccupancyError::BadMagic);
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    if version != SNAPSHOT_VERSION {
        return Err(OccupancyError::UnsupportedVersion(version));
    }
    if bytes.len() < HEADER {
        return Err(OccupancyError::TruncatedHeader);
    }
    let mut dims = [0usize; 3];
    for (i, d) in dims.iter_mut().enumerate() {
        let off = 8 + 4 * i;
        *d = u32::from_le_bytes(bytes[off..off + 4].try_into().unwrap()) as usize;
    }
    let mut f64s = [0f64; 4];
    for (i, v) in f64s.iter_mut().enumerate() {
        let off = 20 + 8 * i;
        *v = f64::from_le_bytes(bytes[off..off + 8].try_into().unwrap());
    }
    let cells = dims[0]
        .checked_mul(dims[1])
        .and_then(|v| v.checked_mul(dims[2]))
        .ok_or(OccupancyError::TooLarge(usize::MAX))?;
    if cells > MAX_CELLS {
        return Err(OccupancyError::TooLarge(cells));
    }
    let config = GridConfig::new(Vec3::new(f64s[0], f64s[1], f64s[2]), f64s[3], dims)?;
    let payload = &bytes[HEADER..];
    if payload.len() != cells * 4 {
        return Err(OccupancyError::PayloadSizeMismatch {
            expected: cells * 4,
            found: payload.len(),
        });
    }
    let log_odds: Vec<f64> = payload
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().unwrap()) as f64)
        .collect();
    if log_odds.iter().any(|l| !l.is_finite()) {
        return Err(OccupancyError::InvalidProbability(f64::NAN));
    }
    Ok(OccupancyGrid::from_raw(config, log_odds))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::occupancy::LOG_ODDS_CLAMP;

    fn sample_grid() -> OccupancyGrid {
        let cfg = GridConfig::new(Vec3::new(-0.2, 0.1, 0.0), 0.02, [5, 4, 3]).unwrap();
        let mut grid = OccupancyGrid::new(cfg);
        grid.add_log_odds([0, 0, 0], 1.5);
        grid.add_log_odds([4, 3, 2], -20.0);
        grid
    }

    #[test]
    fn round_trips_at_f32_precision() {
        let grid = sample_grid();
        let bytes = write_snapshot(&grid);
        let back = read_snapshot(&bytes).unwrap();
        assert_eq!(back.config, grid.config);
        for (a, b) in back.log_odds_raw().iter().zip(grid.log_odds_raw()) {
            assert_eq!(*a, *b as f32 as f64);
        }
        assert_eq!(back.log_odds_at([4, 3, 2]), -LOG_ODDS_CLAMP);
    }

    #[test]
    fn bad_magic_rejected() {
        let mut bytes = write_snapshot(&sample_grid());
        bytes[0] = b'X';
        assert_eq!(read_snapshot(&bytes).unwrap_err(), OccupancyError::BadMagic);
    }

    #[test]
    fn unsupported_version_rejected() {
        let mut bytes = write_snapshot(&sample_grid());
        bytes[4..8].copy_from_slice(&7u32.to_le_bytes());
        assert_eq!(read_snapshot(&bytes).unwrap_err(), OccupancyError::UnsupportedVersion(7));
    }

    #[test]
    fn truncation_rejected() {
        let bytes = write_snapshot(&sample_grid());
        let err = read_snapshot(&bytes[..bytes.len() - 3]).unwrap_err();
        assert!(matches!(err, OccupancyError::PayloadSizeMismatch { .. }));
        assert_eq!(read_snapshot(&bytes[..6]).unwrap_err(), OccupancyError::TruncatedHeader);
    }

    #[test]
    fn hostile_dims_rejected() {
        let mut bytes = write_snapshot(&sample_grid());
        bytes[8..12].copy_from_slice(&u32::MAX.to_le_bytes());
        let err = read_snapshot(&bytes).unwrap_err();
        assert!(matches!(
            err,
            OccupancyError::TooLarge(_) | OccupancyError::PayloadSizeMismatch { .. }
        ));
    }
}
