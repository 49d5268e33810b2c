//! Minimum transmit power that meets a target rate `r0`.
//!
//! With `γ = 2^r0 − 1`:
//!
//! * IRS: `p_s = σ²γ / (N² g_sr g_rd)`.
//! * AF: solving the AF rate for `p_s` at a fixed `p_r` gives
//!   `p_s = γ(ρ p_r + σ²)/(N g_sr) + σ²γ/(N² g_sr g_rd p_r)`, so the total is
//!   `a·p_r + b/p_r + c`. AM–GM puts the minimum at `p_r = √(b/a)` with value
//!   `2√(ab) + c`.
//! * DF: both hops must sit exactly at `γ`, which fixes
//!   `p_r = σ²γ/(N g_rd)` and `p_s = γ(ρ p_r + σ²)/g_sr`.

use crate::error::{ensure_finite, Error, Result};
use crate::rate::{self, HopGains};
use crate::system::{PowerBudget, SchemeKind, SystemParams};

/// Largest accepted rate target in bits/s/Hz.
pub const MAX_RATE: f64 = 60.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSolution {
    pub p_s: f64,
    /// Zero for IRS.
    pub p_r: f64,
    pub total: f64,
    pub achieved_rate: f64,
}

impl PowerSolution {
    fn new(scheme: SchemeKind, params: &SystemParams, g: HopGains, p_s: f64, p_r: f64) -> Self {
        let budget = budget_for(scheme, p_s, p_r);
        Self {
            p_s,
            p_r,
            total: p_s + p_r,
            achieved_rate: rate::rate(scheme, params, g, budget).unwrap_or(f64::NAN),
        }
    }

    pub fn budget(&self, scheme: SchemeKind) -> PowerBudget {
        budget_for(scheme, self.p_s, self.p_r)
    }
}

fn budget_for(scheme: SchemeKind, p_s: f64, p_r: f64) -> PowerBudget {
    if scheme.is_relay() {
        PowerBudget::relay(p_s, p_r)
    } else {
        PowerBudget::irs(p_s)
    }
}

/// `2^r0 − 1` after validating `r0 ∈ (0, MAX_RATE]`.
pub fn snr_target(r0: f64) -> Result<f64> {
    ensure_finite("r0", r0)?;
    if r0 <= 0.0 || r0 > MAX_RATE {
        return Err(Error::OutOfRange {
            what: "r0",
            value: r0,
            allowed: "(0, 60] bits/s/Hz",
        });
    }
    Ok(r0.exp2() - 1.0)
}

pub fn min_power_irs(params: &SystemParams, g: HopGains, r0: f64) -> Result<PowerSolution> {
    let gamma = snr_target(r0)?;
    let n = params.n_f64();
    let p_s = params.sigma2 * gamma / (n * n * g.g_sr * g.g_rd);
    Ok(PowerSolution::new(SchemeKind::Irs, params, g, p_s, 0.0))
}

/// Coefficients `a` and `b` of the AF total-power curve `a·p_r + b/p_r + c`.
#[derive(Debug, Clone, Copy)]
struct AfCurve {
    a: f64,
    b: f64,
    gamma: f64,
}

impl AfCurve {
    fn new(params: &SystemParams, g: HopGains, r0: f64) -> Result<Self> {
        let gamma = snr_target(r0)?;
        let n = params.n_f64();
        Ok(Self {
            a: 1.0 + gamma * params.rho / (n * g.g_sr),
            b: params.sigma2 * gamma / (n * n * g.g_sr * g.g_rd),
            gamma,
        })
    }

    fn source_power(&self, params: &SystemParams, g: HopGains, p_r: f64) -> f64 {
        let n = params.n_f64();
        self.gamma * (params.rho * p_r + params.sigma2) / (n * g.g_sr) + self.b / p_r
    }
}

/// Source power that meets `r0` over an AF relay transmitting at `p_r`.
pub fn af_source_power(params: &SystemParams, g: HopGains, r0: f64, p_r: f64) -> Result<f64> {
    if !(p_r > 0.0) {
        return Err(Error::NonPositive { what: "p_r", value: p_r });
    }
    Ok(AfCurve::new(params, g, r0)?.source_power(params, g, p_r))
}

pub fn min_power_af(params: &SystemParams, g: HopGains, r0: f64) -> Result<PowerSolution> {
    let curve = AfCurve::new(params, g, r0)?;
    let p_r = (curve.b / curve.a).sqrt();
    let p_s = curve.source_power(params, g, p_r);
    Ok(PowerSolution::new(SchemeKind::Af, params, g, p_s, p_r))
}

/// Minimum AF total power `2√(ab) + c`, written out as a closed form.
pub fn min_total_af(params: &SystemParams, g: HopGains, r0: f64) -> Result<f64> {
    let gamma = snr_target(r0)?;
    let n = params.n_f64();
    let s2 = params.sigma2;
    let root = (s2 * gamma * (n * g.g_sr + params.rho * gamma) / (n * n * n * g.g_sr * g.g_sr * g.g_rd)).sqrt();
    Ok(2.0 * root + s2 * gamma / (n * g.g_sr))
}

pub fn min_power_df(params: &SystemParams, g: HopGains, r0: f64) -> Result<PowerSolution> {
    let gamma = snr_target(r0)?;
    let n = params.n_f64();
    let s2 = params.sigma2;
    let p_r = s2 * gamma / (n * g.g_rd);
    let p_s = s2 * params.rho * gamma * gamma / (n * g.g_sr * g.g_rd) + s2 * gamma / g.g_sr;
    Ok(PowerSolution::new(SchemeKind::Df, params, g, p_s, p_r))
}

pub fn min_power(scheme: SchemeKind, params: &SystemParams, g: HopGains, r0: f64) -> Result<PowerSolution> {
    match scheme {
        SchemeKind::Irs => min_power_irs(params, g, r0),
        SchemeKind::Af => min_power_af(params, g, r0),
        SchemeKind::Df => min_power_df(params, g, r0),
    }
}
