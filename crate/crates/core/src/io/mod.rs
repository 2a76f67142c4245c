//! File formats: ASCII OBJ meshes, ASCII XYZ point clouds, and binary
//! little-endian PLY point clouds. All parsers take untrusted input and
//! return structured errors instead of panicking.

mod obj;
mod ply;
mod xyz;

pub use obj::{load_obj, parse_obj, save_obj, write_obj};
pub use ply::{load_ply, parse_ply, save_ply, write_ply};
pub use xyz::{load_xyz, parse_xyz, save_xyz, write_xyz};

use thiserror::Error;

use crate::geometry::GeometryError;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("obj parse error at line {line}: {msg}")]
    ObjParse { line: usize, msg: String },
    #[error("xyz parse error at line {line}: {msg}")]
    XyzParse { line: usize, msg: String },
    #[error("ply parse error: {0}")]
    PlyParse(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}
