//! Self-check of the closed forms against the brute-force oracles.

use std::f64::consts::PI;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use skyrelay::channel::Angles;
use skyrelay::oracle::{self, GridConfig, McConfig, NoiseModel};
use skyrelay::rate::{self, HopGains};
use skyrelay::{deployment, power, Geometry, PowerBudget, SchemeKind, SystemParams};

use crate::config::RunConfig;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub measured: f64,
    pub limit: f64,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: measured {:.3e}, limit {:.3e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            self.limit
        )?;
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    /// Relative error injected into the optimal AF relay power.
    pub perturb: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { perturb: 0.0 }
    }
}

fn dbm(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    10f64.powf((rng.random_range(lo..hi) - 30.0) / 10.0)
}

fn inverse_sinr(scheme: SchemeKind, params: &SystemParams, geom: &Geometry, budget: PowerBudget) -> Result<f64, CliError> {
    let g = HopGains::from_geometry(params, geom)?;
    Ok(1.0 / rate::sinr_components(scheme, params, g, budget)?.sinr())
}

fn random_gains(rng: &mut ChaCha8Rng, params: &SystemParams) -> Result<HopGains, CliError> {
    let l = rng.random_range(10.0..500.0);
    let h = rng.random_range(10.0..200.0);
    let x = rng.random_range(0.0..=l);
    Ok(HopGains::from_geometry(params, &Geometry::new(l, h, h).at(x, 0.0, h))?)
}

/// Closed-form placements never lose to a 0.1 m grid.
fn deployment_grid(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<Check, CliError> {
    let mut worst: f64 = 0.0;
    for scheme in SchemeKind::ALL {
        for _ in 0..cfg.instances {
            let params = cfg.params.with_elements(rng.random_range(1..=64));
            let l = rng.random_range(10.0..500.0);
            let h = rng.random_range(10.0..200.0);
            let (p_s, p_r) = (dbm(rng, -10.0, 50.0), dbm(rng, -10.0, 50.0));
            let budget = if scheme.is_relay() {
                PowerBudget::relay(p_s, p_r)
            } else {
                PowerBudget::irs(p_s)
            };
            let geom = Geometry::new(l, h, h);
            let closed = deployment::deploy(scheme, l, h, &params, p_s, p_r)?;
            let grid = oracle::grid_deploy(scheme, &params, &geom, budget, GridConfig::uniform(0.1))?;
            let c = inverse_sinr(scheme, &params, &geom.at(closed.x_u, 0.0, h), budget)?;
            let b = inverse_sinr(scheme, &params, &geom.at(grid.x_u, grid.y_u, grid.h_u), budget)?;
            worst = worst.max((c - b) / b);
        }
    }
    Ok(Check {
        name: "deployment vs 0.1 m grid",
        passed: worst <= 1e-9,
        measured: worst,
        limit: 1e-9,
        detail: "relative objective excess over the grid optimum".into(),
    })
}

/// Minimum powers hit the target rate and match the relay-power grid.
fn power_grid(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<Vec<Check>, CliError> {
    let mut closure: f64 = 0.0;
    let mut gap = [0.0f64; 3];
    for _ in 0..cfg.instances {
        let params = cfg.params.with_elements(rng.random_range(1..=100));
        let g = random_gains(rng, &params)?;
        let r0 = rng.random_range(0.5..20.0);
        for (i, scheme) in SchemeKind::ALL.into_iter().enumerate() {
            let sol = power::min_power(scheme, &params, g, r0)?;
            closure = closure.max((sol.achieved_rate - r0).abs() / r0);
            let grid = oracle::grid_min_total_power(scheme, &params, g, r0)?;
            gap[i] = gap[i].max((sol.total - grid.total).abs() / grid.total);
        }
    }
    let limits = [1e-12, 1e-4, 1e-6];
    let mut out = vec![Check {
        name: "minimum power meets target rate",
        passed: closure <= 1e-9,
        measured: closure,
        limit: 1e-9,
        detail: "relative rate error".into(),
    }];
    let names = ["IRS power vs grid", "AF power vs grid", "DF power vs grid"];
    for i in 0..3 {
        out.push(Check {
            name: names[i],
            passed: gap[i] <= limits[i],
            measured: gap[i],
            limit: limits[i],
            detail: "relative total-power difference".into(),
        });
    }
    Ok(out)
}

/// The AF relay/source split is a local minimum of total power.
fn split_optimality(cfg: &RunConfig, opts: VerifyOptions, rng: &mut ChaCha8Rng) -> Result<Check, CliError> {
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.instances {
        let params = cfg.params.with_elements(rng.random_range(1..=100));
        let g = random_gains(rng, &params)?;
        let r0 = rng.random_range(0.5..20.0);
        let p_r = power::min_power_af(&params, g, r0)?.p_r * (1.0 + opts.perturb);
        let total = |p: f64| power::af_source_power(&params, g, r0, p).map(|s| s + p);
        let here = total(p_r)?;
        for step in [1.0 - 1e-3, 1.0 + 1e-3] {
            worst = worst.max((here - total(p_r * step)?) / here);
        }
    }
    Ok(Check {
        name: "AF power split optimality",
        passed: worst <= 1e-12,
        measured: worst,
        limit: 1e-12,
        detail: "largest relative saving from moving p_r by 0.1%".into(),
    })
}

fn coherent(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Check {
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.instances * 50 {
        let params = cfg.params.with_array(rng.random_range(1..=16), rng.random_range(1..=16));
        let a = Angles::new(rng.random_range(0.0..PI / 2.0), rng.random_range(-PI..PI));
        let b = Angles::new(rng.random_range(0.0..PI / 2.0), rng.random_range(-PI..PI));
        worst = worst.max(oracle::verify_coherent(&params, a, b));
    }
    Check {
        name: "coherent reflection gain",
        passed: worst < 1e-10,
        measured: worst,
        limit: 1e-10,
        detail: "relative error of |h_rd^H Psi h_sr|".into(),
    }
}

fn monte_carlo(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<Vec<Check>, CliError> {
    let mut mean_err: f64 = 0.0;
    let mut below: f64 = f64::NEG_INFINITY;
    let trials = cfg.instances.min(10);
    for _ in 0..trials {
        let params = cfg.params.with_elements(rng.random_range(1..=16));
        let l = rng.random_range(10.0..500.0);
        let h = rng.random_range(10.0..200.0);
        let geom = Geometry::new(l, h, h).at(rng.random_range(0.0..=l), 0.0, h);
        let (p_s, p_r) = (dbm(rng, -10.0, 50.0), dbm(rng, -10.0, 50.0));
        let g = HopGains::from_geometry(&params, &geom)?;
        let cf = rate::rate_af(&params, g, p_s, p_r);

        let exact = McConfig { noise: NoiseModel::MeanPower, ..McConfig::new(16, cfg.seed) };
        let m = oracle::mc_rate_af_at(&params, &geom, p_s, p_r, &exact)?;
        mean_err = mean_err.max((m.mean - cf).abs() / cf.max(f64::MIN_POSITIVE));

        let est = oracle::mc_rate_af_at(&params, &geom, p_s, p_r, &McConfig::new(cfg.samples, rng.random()))?;
        // Sampled noise can only raise the average rate above the rate at the
        // mean noise power.
        let z = (cf - est.mean) / est.std_error.max(f64::MIN_POSITIVE);
        below = below.max(z);
    }
    Ok(vec![
        Check {
            name: "Monte Carlo at mean noise power",
            passed: mean_err <= 1e-9,
            measured: mean_err,
            limit: 1e-9,
            detail: "relative difference to the closed-form AF rate".into(),
        },
        Check {
            name: "Monte Carlo not below closed form",
            passed: below <= 3.0,
            measured: below,
            limit: 3.0,
            detail: "standard errors by which the estimate falls short".into(),
        },
    ])
}

pub fn run(cfg: &RunConfig, opts: VerifyOptions) -> Result<Vec<Check>, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut checks = vec![deployment_grid(cfg, &mut rng)?];
    checks.extend(power_grid(cfg, &mut rng)?);
    checks.push(split_optimality(cfg, opts, &mut rng)?);
    checks.push(coherent(cfg, &mut rng));
    checks.extend(monte_carlo(cfg, &mut rng)?);
    Ok(checks)
}
