//! Optimal UAV placement for each scheme.
//!
//! Every solver pins the UAV to the S–D line (`y = 0`) at the lowest
//! permitted altitude `h_min`; both hop distances only grow with `|y|` and
//! `h`. What remains is a search over `x ∈ [0, L]`:
//!
//! * IRS maximises `g_sr g_rd`, i.e. minimises `f̃(x) = (x²+h²)((x−L)²+h²)`,
//!   which has the closed-form minimisers of [`deploy_irs`].
//! * AF minimises the inverse SINR `ξ₁ g̃(x) + ξ₂ f̃(x)` with
//!   `g̃(x) = x² + h²`. The minimiser lies left of the IRS S-side root, where
//!   the objective is convex, and is found by golden-section search.
//! * DF maximises the weaker hop; the optimum balances both hops or sits at
//!   an endpoint ([`deploy_df`]).

use std::fmt;

use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::search::golden_section;
use crate::system::SystemParams;

/// Which analytic branch produced a placement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseTag {
    Midpoint,
    SSide,
    DSide,
    QuadraticS,
    QuadraticD,
    Search,
    Grid,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseTag::Midpoint => "MIDPOINT",
            CaseTag::SSide => "S_SIDE",
            CaseTag::DSide => "D_SIDE",
            CaseTag::QuadraticS => "QUADRATIC_S",
            CaseTag::QuadraticD => "QUADRATIC_D",
            CaseTag::Search => "SEARCH",
            CaseTag::Grid => "GRID",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeploymentSolution {
    pub x_u: f64,
    pub y_u: f64,
    pub h_u: f64,
    pub case: CaseTag,
    /// Second, equally good `x` (the D-side root for a low-flying IRS).
    pub alternate: Option<f64>,
}

impl DeploymentSolution {
    fn on_axis(x_u: f64, h_min: f64, case: CaseTag) -> Self {
        Self {
            x_u,
            y_u: 0.0,
            h_u: h_min,
            case,
            alternate: None,
        }
    }

    /// Primary `x` followed by the alternate, if any.
    pub fn candidates(&self) -> impl Iterator<Item = f64> {
        std::iter::once(self.x_u).chain(self.alternate)
    }
}

/// `(x² + h²)((x − L)² + h²)`, the product of squared hop distances.
pub fn f_tilde(x: f64, l: f64, h: f64) -> f64 {
    g_tilde(x, h) * ((x - l) * (x - l) + h * h)
}

/// `x² + h²`, the squared source–UAV distance.
pub fn g_tilde(x: f64, h: f64) -> f64 {
    x * x + h * h
}

fn check_layout(l: f64, h_min: f64) -> Result<()> {
    ensure_finite("L", l)?;
    if l < 0.0 {
        return Err(Error::OutOfRange {
            what: "L",
            value: l,
            allowed: ">= 0",
        });
    }
    ensure_positive("h_min", h_min)?;
    Ok(())
}

/// Left end of the IRS optimum: `L/2` when `L ≤ 2h`, else `L/2 − √(L²/4 − h²)`.
fn irs_s_side_root(l: f64, h_min: f64) -> f64 {
    let half = 0.5 * l;
    if l <= 2.0 * h_min {
        half
    } else {
        let r = ((half - h_min) * (half + h_min)).sqrt();
        // Product of the two roots is h², which avoids cancellation for h ≪ L.
        h_min * h_min / (half + r)
    }
}

/// Minimisers of [`f_tilde`].
pub fn deploy_irs(l: f64, h_min: f64) -> Result<DeploymentSolution> {
    check_layout(l, h_min)?;
    if l <= 2.0 * h_min {
        return Ok(DeploymentSolution::on_axis(0.5 * l, h_min, CaseTag::Midpoint));
    }
    let left = irs_s_side_root(l, h_min);
    Ok(DeploymentSolution {
        alternate: Some(l - left),
        ..DeploymentSolution::on_axis(left, h_min, CaseTag::SSide)
    })
}

/// Weights of the AF placement objective `ξ₁ g̃(x) + ξ₂ f̃(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AfWeights {
    pub xi1: f64,
    pub xi2: f64,
}

impl AfWeights {
    /// `ξ₁ = (ρ p_r + σ²) / (N β₀ p_s)`, `ξ₂ = σ² / (N² β₀² p_s p_r)`.
    pub fn new(params: &SystemParams, p_s: f64, p_r: f64) -> Result<Self> {
        ensure_positive("p_s", p_s)?;
        ensure_positive("p_r", p_r)?;
        let n = params.n_f64();
        let b = params.beta0;
        Ok(Self {
            xi1: (params.rho * p_r + params.sigma2) / (n * b * p_s),
            xi2: params.sigma2 / (n * n * b * b * p_s * p_r),
        })
    }

    pub fn eval(&self, x: f64, l: f64, h: f64) -> f64 {
        self.xi1 * g_tilde(x, h) + self.xi2 * f_tilde(x, l, h)
    }
}

/// Inverse end-to-end AF SINR at `(x, 0, h)`.
pub fn af_objective(x: f64, l: f64, h: f64, params: &SystemParams, p_s: f64, p_r: f64) -> Result<f64> {
    Ok(AfWeights::new(params, p_s, p_r)?.eval(x, l, h))
}

/// Golden-section bracket width used by [`deploy_af`].
pub fn af_tolerance(l: f64) -> f64 {
    (1e-6 * l).max(1e-4)
}

pub fn deploy_af(l: f64, h_min: f64, params: &SystemParams, p_s: f64, p_r: f64) -> Result<DeploymentSolution> {
    check_layout(l, h_min)?;
    let w = AfWeights::new(params, p_s, p_r)?;
    let right = irs_s_side_root(l, h_min);
    let best = golden_section(|x| w.eval(x, l, h_min), 0.0, right, af_tolerance(l));
    Ok(DeploymentSolution::on_axis(best.x, h_min, CaseTag::Search))
}

/// Hop weights of the DF placement problem:
/// `μ₁ = p_s / (ρ p_r + σ²)` and `μ₂ = N p_r / σ²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DfWeights {
    pub mu1: f64,
    pub mu2: f64,
}

impl DfWeights {
    pub fn new(params: &SystemParams, p_s: f64, p_r: f64) -> Result<Self> {
        ensure_positive("p_s", p_s)?;
        ensure_finite("p_r", p_r)?;
        if p_r < 0.0 {
            return Err(Error::OutOfRange {
                what: "p_r",
                value: p_r,
                allowed: ">= 0",
            });
        }
        Ok(Self {
            mu1: p_s / (params.rho * p_r + params.sigma2),
            mu2: params.n_f64() * p_r / params.sigma2,
        })
    }

    /// Weaker of the two hop terms `μ₁/g̃(x)` and `μ₂ g̃(x)/f̃(x)`.
    pub fn min_hop(&self, x: f64, l: f64, h: f64) -> f64 {
        let first = self.mu1 / g_tilde(x, h);
        let second = self.mu2 / ((x - l) * (x - l) + h * h);
        first.min(second)
    }
}

const DF_TIE_RTOL: f64 = 1e-12;

pub fn deploy_df(l: f64, h_min: f64, params: &SystemParams, p_s: f64, p_r: f64) -> Result<DeploymentSolution> {
    check_layout(l, h_min)?;
    let DfWeights { mu1, mu2 } = DfWeights::new(params, p_s, p_r)?;
    let h2 = h_min * h_min;
    let nu = h2 / (l * l + h2);
    let at = |x, case| Ok(DeploymentSolution::on_axis(x, h_min, case));

    if mu1 <= nu * mu2 {
        return at(0.0, CaseTag::SSide);
    }
    if mu1 * nu >= mu2 {
        return at(l, CaseTag::DSide);
    }
    if (mu1 - mu2).abs() <= DF_TIE_RTOL * mu1.max(mu2) {
        return at(0.5 * l, CaseTag::Midpoint);
    }

    // Balancing μ₁((x−L)² + h²) = μ₂(x² + h²) gives x² − 2kLx + kL² + h² = 0
    // with k = μ₁/(μ₁−μ₂). Writing m = 1/k the admissible root, kL ± √(…) with
    // + for μ₁ < μ₂ and − for μ₁ > μ₂, is (L² + m h²) / (L + √(L² − m(L² + m h²)))
    // in both cases, which stays accurate as μ₁ → μ₂.
    let m = 1.0 - mu2 / mu1;
    let disc = l * l - m * (l * l + m * h2);
    let disc = if disc < 0.0 && -disc < 1e-9 * l * l {
        0.0
    } else {
        disc
    };
    if disc < 0.0 {
        return Err(Error::Invariant(format!(
            "negative discriminant {disc} in interior DF case (mu1={mu1}, mu2={mu2}, L={l}, h={h_min})"
        )));
    }
    let x = ((l * l + m * h2) / (l + disc.sqrt())).clamp(0.0, l);
    let case = if mu1 < mu2 {
        CaseTag::QuadraticS
    } else {
        CaseTag::QuadraticD
    };
    at(x, case)
}

/// Dispatches to the scheme's solver. IRS ignores the powers.
pub fn deploy(
    scheme: crate::SchemeKind,
    l: f64,
    h_min: f64,
    params: &SystemParams,
    p_s: f64,
    p_r: f64,
) -> Result<DeploymentSolution> {
    match scheme {
        crate::SchemeKind::Irs => deploy_irs(l, h_min),
        crate::SchemeKind::Af => deploy_af(l, h_min, params, p_s, p_r),
        crate::SchemeKind::Df => deploy_df(l, h_min, params, p_s, p_r),
    }
}
