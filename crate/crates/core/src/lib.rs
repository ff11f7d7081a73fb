//! Planning toolkit for hybrid fronthaul networks serving cell-free
//! massive MIMO deployments.
//!
//! The pipeline runs in two tiers. Tier 1 builds the deployment geometry:
//! access points are grouped, connected by radio stripes (serial paths) or
//! hierarchical trees (MSTs), and associated with distributed units through
//! an iterative placement loop. Tier 2 selects a fronthaul technology
//! (fiber, mmWave, or FSO) for every leading AP by solving an integer
//! linear program exactly, subject to capacity, availability, and
//! equipment constraints.
//!
//! Supporting modules compute functional-split demand thresholds, per-link
//! achievable rates, total cost of ownership, cascading-failure resilience,
//! and a seeded Monte Carlo experiment harness.

pub mod config;
pub mod cost;
pub mod demand;
pub mod error;
pub mod experiment;
pub mod geometry;
pub mod linkbudget;
pub mod planner;
pub mod resilience;
pub mod seed;
pub mod stats;
pub mod topology;

pub use error::{Error, Result};
pub use geometry::Point2D;
