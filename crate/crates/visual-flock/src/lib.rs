//! Deterministic multi-agent simulator of vision-only collective motion.
//!
//! Agents are self-propelled disks that steer purely from a panoramic binary
//! view of their surroundings: retinal position, optical size and optic flow
//! of neighboring disks, plus an always-visible virtual anchor that confines
//! the flock without walls. The crate also ships a parameter-sweep harness
//! that maps the resulting swarming / milling / schooling phase diagram over
//! the attraction-alignment gain plane.

pub mod agent;
pub mod config;
pub mod control;
pub mod math;
pub mod metrics;
pub mod opticflow;
pub mod output;
pub mod params;
pub mod render;
pub mod rng;
pub mod simulator;
pub mod sweep;
pub mod trace;
pub mod vision;

mod error;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
