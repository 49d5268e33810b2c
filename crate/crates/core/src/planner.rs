//! Joint placement and power minimisation by alternating optimisation.
//!
//! One iteration re-places the UAV for the current powers and then solves the
//! minimum powers for the new placement. Each half-step is an exact
//! conditional optimum, so the total transmit power never increases.
//!
//! For DF the minimum-power step balances both hops at the current position,
//! and the balanced position is exactly what the placement step returns for
//! those powers. The DF iteration therefore stays at its starting point.

use crate::deployment::{self, DeploymentSolution};
use crate::error::{ensure_positive, Error, Result};
use crate::power::{self, PowerSolution};
use crate::rate::HopGains;
use crate::system::{Geometry, SchemeKind, SystemParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlannerConfig {
    /// Stop once an iteration lowers total transmit power by less than this
    /// many watts.
    pub epsilon: f64,
    pub max_iters: usize,
    /// Starting `x`; the midpoint when `None`.
    pub initial_x: Option<f64>,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        Self {
            epsilon: 1e-3,
            max_iters: 50,
            initial_x: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanResult {
    pub deployment: DeploymentSolution,
    pub power: PowerSolution,
    /// Completed placement + power cycles.
    pub iterations: usize,
    /// Total transmit power after every iteration.
    pub power_trace: Vec<f64>,
    pub iterates: Vec<Iterate>,
    pub converged: bool,
}

/// Placement and powers at the end of one iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Iterate {
    pub x_u: f64,
    pub power: PowerSolution,
}

fn gains_at(params: &SystemParams, geom: &Geometry, x: f64) -> Result<HopGains> {
    HopGains::from_geometry(params, &geom.at(x, 0.0, geom.h_min))
}

pub fn plan(
    scheme: SchemeKind,
    params: &SystemParams,
    geom: &Geometry,
    r0: f64,
    cfg: &PlannerConfig,
) -> Result<PlanResult> {
    ensure_positive("epsilon", cfg.epsilon)?;
    if cfg.max_iters == 0 {
        return Err(Error::OutOfRange {
            what: "max_iters",
            value: 0.0,
            allowed: ">= 1",
        });
    }
    let l = geom.l;
    let x0 = cfg.initial_x.unwrap_or(0.5 * l);
    if !(0.0..=l).contains(&x0) {
        return Err(Error::OutOfRange {
            what: "initial_x",
            value: x0,
            allowed: "[0, L]",
        });
    }

    // Powers at the starting position seed the first placement step.
    let mut power = power::min_power(scheme, params, gains_at(params, geom, x0)?, r0)?;
    let mut best: Option<(DeploymentSolution, PowerSolution)> = None;
    let mut power_trace = Vec::new();
    let mut iterates = Vec::new();
    let mut converged = false;

    while power_trace.len() < cfg.max_iters {
        let placed = deployment::deploy(scheme, l, geom.h_min, params, power.p_s, power.p_r)?;

        // Keep whichever equally-placed alternate needs less power.
        let mut step: Option<(f64, PowerSolution)> = None;
        for x in placed.candidates() {
            let cand = power::min_power(scheme, params, gains_at(params, geom, x)?, r0)?;
            if step.is_none_or(|(_, p)| cand.total < p.total) {
                step = Some((x, cand));
            }
        }
        let (x, next) = step.expect("deployment yields at least one candidate");

        power = next;
        power_trace.push(power.total);
        iterates.push(Iterate { x_u: x, power });
        if best.is_none_or(|(_, b)| power.total < b.total) {
            let deployment = DeploymentSolution {
                x_u: x,
                alternate: placed.candidates().find(|&c| c != x),
                ..placed
            };
            best = Some((deployment, power));
        }
        if let [.., prev, cur] = power_trace[..] {
            if prev - cur < cfg.epsilon {
                converged = true;
                break;
            }
        }
    }
    let iterations = power_trace.len();
    let best = best.expect("at least one iteration runs");

    Ok(PlanResult {
        deployment: best.0,
        power: best.1,
        iterations,
        power_trace,
        iterates,
        converged,
    })
}
