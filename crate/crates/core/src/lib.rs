//! Analytical models for comparing a UAV-borne intelligent reflecting surface
//! (IRS) against full-duplex amplify-and-forward (AF) and decode-and-forward
//! (DF) relays.
//!
//! The crate is organised bottom-up:
//!
//! * [`units`] and [`system`] hold the shared value types and dB conversions.
//! * [`channel`] builds the line-of-sight channel vectors, the coherent IRS
//!   phase profile and the MRT/MRC beamformers.
//! * [`rate`] evaluates the closed-form achievable rates.
//! * [`deployment`] places the UAV, [`power`] finds the minimum transmit
//!   power for a target rate and [`planner`] alternates the two.
//! * [`energy`] turns power budgets into energy efficiency.
//! * [`oracle`] holds brute-force and Monte-Carlo cross-checks that share no
//!   code path with the closed forms they verify.
//!
//! Everything works in linear SI units. Decibel values only appear through
//! the helpers in [`units`].

pub mod channel;
pub mod deployment;
pub mod energy;
mod error;
pub mod oracle;
pub mod par;
pub mod planner;
pub mod power;
pub mod rate;
pub mod search;
pub mod system;
pub mod units;

pub use error::{Error, Result};
pub use system::{Geometry, PowerBudget, SchemeKind, SystemParams, Violation};
