//! Exact simulation of parallel chip-firing on the complete graph `K_n`,
//! its circle-map lifts and rotation numbers, and the devil's staircases
//! traced by activity as chips are added.

pub mod chip_core;
pub mod circle_lift;
pub mod error;
pub mod io;
pub mod laws;
pub mod rational;
pub mod staircase;

pub use chip_core::{simulate_to_cycle, ChipConfig, SimulationSummary};
pub use error::{Error, Result};
pub use rational::Rational;
