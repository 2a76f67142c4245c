//! Simulated workbench for active tactile reconstruction of unknown objects.
//!
//! The crate is organized around a small set of currencies: [`geometry::PointCloud`]
//! for every cloud that flows between stages, [`occupancy::OccupancyGrid`] for the
//! exploration state, and [`autoencoder::ModelParams`] for the learned
//! sparse-to-dense reconstruction network.
//!
//! Pipeline stages, in the order an experiment runs them:
//!
//! 1. [`shapes`] / [`autoencoder::generate_dataset`] — procedural category meshes
//!    and normalized training clouds.
//! 2. [`autoencoder::train`] — self-supervised training with a Chamfer loss and
//!    built-in reverse-mode differentiation.
//! 3. [`sim::run_episode`] — virtual touch/pinch probing of a hidden mesh, driven
//!    by the information-gain planner in [`planner`] over the grid in [`occupancy`].
//! 4. [`autoencoder::reconstruct`] and [`gpis`] — dense reconstruction from the
//!    sparse tactile cloud, learned and baseline.
//! 5. [`tiqf`] — category-level scale/pose estimation against the reconstruction,
//!    with an ICP baseline, scored by [`metrics`].
//!
//! All stochastic operations take explicit seeds and are deterministic per seed.

pub mod autoencoder;
pub mod config;
pub mod geometry;
pub mod gpis;
pub mod io;
pub mod metrics;
pub mod occupancy;
pub mod planner;
pub mod rng;
pub mod shapes;
pub mod sim;
pub mod tiqf;

pub use geometry::{Aabb, PointCloud, Ray, TriangleMesh, UnitQuaternion, Vec3};
