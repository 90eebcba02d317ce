//! Monotone degree-one circle-map lifts.
//!
//! A preconfined configuration `σ` on `K_n` determines a lift `f` with
//! `f^t(0) = α_t / n`, so its activity is the Poincaré rotation number
//! `ρ(f)`, and the parallel update becomes the conjugation
//! `Uf = R_{-f(0)} ∘ f ∘ R_{f(0)}`. Continuum limits are described by a CDF
//! `F` through `Φ(x) = ⌈x⌉ - F(⌈x⌉ - x)`.

mod cdf;
mod config_lift;
mod lift;
mod rotation;
mod scalar;

pub use cdf::{
    lift_from_cdf, lift_from_cdf_exact, parse_exact, CdfSpec, CdfTable, PhiFamily, DEFAULT_CDF_GRID,
};
pub use config_lift::{lift_from_config, rotation_number_exact, rotation_number_from_orbit};
pub use lift::{iterate, update_lift, ExactLift, FloatLift, MonotoneLift};
pub use rotation::{
    certifies_rotation, displacement_range, probe_points, rotation_at_least, rotation_at_most,
    rotation_number_numeric, stair_interval, RotationEstimate, RotationOptions, StairInterval,
};
pub use scalar::{Scalar, Q};
