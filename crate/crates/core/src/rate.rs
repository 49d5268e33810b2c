//! Closed-form achievable rates in bits/s/Hz.
//!
//! All three models collapse the array to its gain `N` (AF and DF relays) or
//! `N^2` (coherently phased IRS), so only the two scalar hop gains enter.
//! The AF and DF expressions are the mean-power forms that the rest of the
//! crate treats as the rate model; [`crate::oracle::mc_rate_af`] measures how
//! far the AF form sits from the simulated expectation.

use crate::error::{ensure_positive, Result};
use crate::system::{Geometry, PowerBudget, SchemeKind, SystemParams};

/// Linear power gains of the source→UAV and UAV→destination hops.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopGains {
    pub g_sr: f64,
    pub g_rd: f64,
}

impl HopGains {
    pub fn new(g_sr: f64, g_rd: f64) -> Result<Self> {
        ensure_positive("g_sr", g_sr)?;
        ensure_positive("g_rd", g_rd)?;
        Ok(Self { g_sr, g_rd })
    }

    /// Inverse-square gains for the UAV position in `geom`.
    pub fn from_geometry(params: &SystemParams, geom: &Geometry) -> Result<Self> {
        let d_sr = geom.d_sr();
        let d_rd = geom.d_rd();
        ensure_positive("d_sr", d_sr)?;
        ensure_positive("d_rd", d_rd)?;
        Self::new(params.beta0 / (d_sr * d_sr), params.beta0 / (d_rd * d_rd))
    }

    pub fn swapped(self) -> Self {
        Self {
            g_sr: self.g_rd,
            g_rd: self.g_sr,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hop {
    First,
    Second,
}

/// One SINR term: `signal / (self_interference + relay_noise + noise)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Link {
    pub signal: f64,
    pub self_interference: f64,
    /// Noise forwarded by an AF relay; zero elsewhere.
    pub relay_noise: f64,
    pub noise: f64,
}

impl Link {
    pub fn sinr(&self) -> f64 {
        self.signal / (self.self_interference + self.relay_noise + self.noise)
    }
}

/// Labelled decomposition of the SINR that each rate function uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SinrComponents {
    Irs(Link),
    Af(Link),
    Df { first: Link, second: Link },
}

impl SinrComponents {
    pub fn sinr(&self) -> f64 {
        match self {
            SinrComponents::Irs(link) | SinrComponents::Af(link) => link.sinr(),
            SinrComponents::Df { first, second } => first.sinr().min(second.sinr()),
        }
    }

    /// The limiting hop of a DF relay (`None` for single-link schemes).
    /// Ties go to the first hop.
    pub fn bottleneck(&self) -> Option<Hop> {
        match self {
            SinrComponents::Df { first, second } => Some(if first.sinr() <= second.sinr() {
                Hop::First
            } else {
                Hop::Second
            }),
            _ => None,
        }
    }

    pub fn rate(&self) -> f64 {
        log2_1p(self.sinr())
    }
}

/// `log2(1 + x)` without cancellation for tiny `x`.
pub fn log2_1p(x: f64) -> f64 {
    x.ln_1p() / std::f64::consts::LN_2
}

fn irs_link(params: &SystemParams, g: HopGains, p_s: f64) -> Link {
    let n = params.n_f64();
    Link {
        signal: n * n * p_s * g.g_sr * g.g_rd,
        self_interference: 0.0,
        relay_noise: 0.0,
        noise: params.sigma2,
    }
}

fn af_link(params: &SystemParams, g: HopGains, p_s: f64, p_r: f64) -> Link {
    let n = params.n_f64();
    Link {
        signal: n * n * p_r * p_s * g.g_sr * g.g_rd,
        self_interference: n * params.rho * p_r * p_r * g.g_rd,
        relay_noise: n * params.sigma2 * p_r * g.g_rd,
        noise: params.sigma2,
    }
}

fn df_links(params: &SystemParams, g: HopGains, p_s: f64, p_r: f64) -> (Link, Link) {
    let first = Link {
        signal: p_s * g.g_sr,
        self_interference: params.rho * p_r,
        relay_noise: 0.0,
        noise: params.sigma2,
    };
    let second = Link {
        signal: params.n_f64() * p_r * g.g_rd,
        self_interference: 0.0,
        relay_noise: 0.0,
        noise: params.sigma2,
    };
    (first, second)
}

/// `log2(1 + N^2 p_s g_sr g_rd / sigma2)`.
pub fn rate_irs(params: &SystemParams, g: HopGains, p_s: f64) -> f64 {
    log2_1p(irs_link(params, g, p_s).sinr())
}

/// `log2(1 + N^2 p_r p_s g_sr g_rd / ((N rho p_r^2 + N sigma2 p_r) g_rd + sigma2))`.
pub fn rate_af(params: &SystemParams, g: HopGains, p_s: f64, p_r: f64) -> f64 {
    log2_1p(af_link(params, g, p_s, p_r).sinr())
}

/// `log2(1 + min(p_s g_sr / (rho p_r + sigma2), N p_r g_rd / sigma2))`.
pub fn rate_df(params: &SystemParams, g: HopGains, p_s: f64, p_r: f64) -> f64 {
    let (first, second) = df_links(params, g, p_s, p_r);
    log2_1p(first.sinr().min(second.sinr()))
}

pub fn sinr_components(
    scheme: SchemeKind,
    params: &SystemParams,
    g: HopGains,
    budget: PowerBudget,
) -> Result<SinrComponents> {
    let p_r = budget.relay_power_for(scheme)?;
    let p_s = budget.p_s;
    Ok(match scheme {
        SchemeKind::Irs => SinrComponents::Irs(irs_link(params, g, p_s)),
        SchemeKind::Af => SinrComponents::Af(af_link(params, g, p_s, p_r)),
        SchemeKind::Df => {
            let (first, second) = df_links(params, g, p_s, p_r);
            SinrComponents::Df { first, second }
        }
    })
}

/// Rate of `scheme` under `budget`.
pub fn rate(scheme: SchemeKind, params: &SystemParams, g: HopGains, budget: PowerBudget) -> Result<f64> {
    sinr_components(scheme, params, g, budget).map(|c| c.rate())
}
