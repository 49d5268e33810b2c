use crate::deployment::{CaseTag, DeploymentSolution};
use crate::error::{ensure_positive, Error, Result};
use crate::par::{self, Execution};
use crate::rate::{self, HopGains};
use crate::system::{Geometry, PowerBudget, SchemeKind, SystemParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridConfig {
    pub step_x: f64,
    pub step_h: f64,
    /// Also sweep `y ∈ [−L/2, L/2]` with this step. `None` pins `y = 0`.
    pub step_y: Option<f64>,
    pub exec: Execution,
}

impl GridConfig {
    pub fn uniform(step: f64) -> Self {
        Self {
            step_x: step,
            step_h: step,
            step_y: None,
            exec: Execution::default(),
        }
    }
}

/// Points `lo, lo + step, …` up to and including `hi`.
fn axis(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    let mut pts: Vec<f64> = (0..=n).map(|i| lo + i as f64 * step).collect();
    if pts.last().is_some_and(|&p| hi - p > 1e-9 * step.max(1.0)) {
        pts.push(hi);
    }
    pts
}

/// Inverse SINR of `scheme` at a UAV position, from hop distances alone.
fn cost(scheme: SchemeKind, params: &SystemParams, geom: &Geometry, budget: PowerBudget) -> Result<f64> {
    let g = HopGains::from_geometry(params, geom)?;
    Ok(1.0 / rate::sinr_components(scheme, params, g, budget)?.sinr())
}

/// Exhaustive search over `x ∈ [0, L]`, `h ∈ [h_min, h_max]` and optionally
/// `y`. Ties keep the grid point visited first (smallest `x`, then `h`, then
/// `y`), so the result does not depend on the execution mode.
pub fn grid_deploy(
    scheme: SchemeKind,
    params: &SystemParams,
    geom: &Geometry,
    budget: PowerBudget,
    grid: GridConfig,
) -> Result<DeploymentSolution> {
    let l = ensure_positive("L", geom.l)?;
    let steps = [Some(grid.step_x), Some(grid.step_h), grid.step_y];
    for step in steps.into_iter().flatten() {
        ensure_positive("grid step", step)?;
        if step > l / 10.0 {
            return Err(Error::OutOfRange {
                what: "grid step",
                value: step,
                allowed: "<= L/10",
            });
        }
    }
    if !(geom.h_max >= geom.h_min) {
        return Err(Error::OutOfRange {
            what: "h_max",
            value: geom.h_max,
            allowed: ">= h_min",
        });
    }

    let xs = axis(0.0, l, grid.step_x);
    let hs = axis(geom.h_min, geom.h_max, grid.step_h);
    let ys = match grid.step_y {
        Some(step) => axis(-0.5 * l, 0.5 * l, step),
        None => vec![0.0],
    };

    let per_x = par::map(grid.exec, &xs, |&x| -> Result<(f64, f64, f64, f64)> {
        let mut best = (f64::INFINITY, x, 0.0, geom.h_min);
        for &h in &hs {
            for &y in &ys {
                let c = cost(scheme, params, &geom.at(x, y, h), budget)?;
                if c < best.0 {
                    best = (c, x, y, h);
                }
            }
        }
        Ok(best)
    });

    let mut best: Option<(f64, f64, f64, f64)> = None;
    for cand in per_x {
        let cand = cand?;
        if best.is_none_or(|b| cand.0 < b.0) {
            best = Some(cand);
        }
    }
    let (_, x_u, y_u, h_u) = best.expect("grid has at least one point");
    Ok(DeploymentSolution {
        x_u,
        y_u,
        h_u,
        case: CaseTag::Grid,
        alternate: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fine() -> GridConfig {
        GridConfig::uniform(0.1)
    }

    #[test]
    fn axis_includes_both_ends() {
        assert_eq!(axis(0.0, 1.0, 0.25), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(axis(0.0, 1.0, 0.3).last(), Some(&1.0));
        assert_eq!(axis(5.0, 5.0, 1.0), vec![5.0]);
    }

    #[test]
    fn high_irs_sits_at_midpoint() {
        let p = SystemParams::default().with_elements(16);
        let geom = Geometry::new(100.0, 60.0, 60.0);
        let s = grid_deploy(SchemeKind::Irs, &p, &geom, PowerBudget::irs(1.0), fine()).unwrap();
        assert!((s.x_u - 50.0).abs() <= 0.1);
        assert_eq!(s.h_u, 60.0);
        assert_eq!(s.case, CaseTag::Grid);
    }

    #[test]
    fn altitude_sweep_returns_floor() {
        let p = SystemParams::default().with_elements(4);
        let geom = Geometry::new(100.0, 20.0, 80.0);
        let grid = GridConfig {
            step_x: 1.0,
            step_h: 1.0,
            step_y: Some(5.0),
            exec: Execution::default(),
        };
        for (scheme, budget) in [
            (SchemeKind::Irs, PowerBudget::irs(0.1)),
            (SchemeKind::Af, PowerBudget::relay(0.1, 0.01)),
            (SchemeKind::Df, PowerBudget::relay(0.1, 0.01)),
        ] {
            let s = grid_deploy(scheme, &p, &geom, budget, grid).unwrap();
            assert_eq!(s.h_u, 20.0, "{scheme}");
            assert_eq!(s.y_u, 0.0, "{scheme}");
        }
    }

    #[test]
    fn df_quadratic_d_instance() {
        // p_s = 40 mW, p_r = 1 mW puts the source hop weight at twice the relay's.
        let p = SystemParams::default().with_elements(10);
        let geom = Geometry::new(100.0, 30.0, 30.0);
        let s = grid_deploy(SchemeKind::Df, &p, &geom, PowerBudget::relay(0.04, 1e-3), fine()).unwrap();
        assert!((s.x_u - (200.0 - 19_100f64.sqrt())).abs() <= 0.1, "{}", s.x_u);
    }

    #[test]
    fn execution_modes_agree() {
        let p = SystemParams::default().with_elements(9);
        let geom = Geometry::new(250.0, 30.0, 60.0);
        let budget = PowerBudget::relay(0.2, 0.05);
        let mut grid = GridConfig::uniform(0.5);
        grid.exec = Execution::Sequential;
        let a = grid_deploy(SchemeKind::Af, &p, &geom, budget, grid).unwrap();
        grid.exec = Execution::Parallel;
        let b = grid_deploy(SchemeKind::Af, &p, &geom, budget, grid).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn coarse_grid_rejected() {
        let p = SystemParams::default();
        let geom = Geometry::new(100.0, 20.0, 20.0);
        let err = grid_deploy(SchemeKind::Irs, &p, &geom, PowerBudget::irs(1.0), GridConfig::uniform(11.0));
        assert!(err.is_err());
        let err = grid_deploy(SchemeKind::Irs, &p, &geom, PowerBudget::irs(1.0), GridConfig::uniform(0.0));
        assert!(err.is_err());
    }
}
