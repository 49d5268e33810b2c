//! Brute-force and Monte-Carlo cross-checks.
//!
//! Nothing here calls the closed-form solvers in [`crate::deployment`] or
//! [`crate::power`]. The grid oracles score candidates with the SINR of the
//! full 3-D geometry, and the Monte-Carlo estimator works on raw channel
//! vectors and sampled noise.

mod coherent;
mod grid;
mod montecarlo;
mod power_grid;

pub use coherent::verify_coherent;
pub use grid::{grid_deploy, GridConfig};
pub use montecarlo::{mc_rate_af, mc_rate_af_at, McConfig, McEstimate, NoiseModel};
pub use power_grid::{grid_min_total_power, PowerGrid};
