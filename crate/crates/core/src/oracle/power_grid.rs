//! Brute-force minimum transmit power.
//!
//! Every SINR here is linear in `p_s` (the DF second hop does not involve
//! `p_s` at all), so for a fixed relay power the cheapest source power is
//! `γ / SINR(p_s = 1)`. The relay power is swept on a log grid and the best
//! grid cell is then refined locally.

use crate::error::{ensure_finite, Error, Result};
use crate::power::PowerSolution;
use crate::rate::{self, HopGains, SinrComponents};
use crate::search::golden_section;
use crate::system::{PowerBudget, SchemeKind, SystemParams};

/// Decades the window moves when the optimum sits on its edge.
const SHIFT_DECADES: f64 = 6.0;
const MAX_SHIFTS: usize = 8;

/// Log-spaced relay-power grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerGrid {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl Default for PowerGrid {
    fn default() -> Self {
        Self {
            lo: 1e-9,
            hi: 1e3,
            points: 10_000,
        }
    }
}

impl PowerGrid {
    fn values(&self) -> Vec<f64> {
        let (a, b) = (self.lo.ln(), self.hi.ln());
        let last = (self.points - 1) as f64;
        (0..self.points).map(|i| (a + (b - a) * i as f64 / last).exp()).collect()
    }

    fn shifted(&self, decades: f64) -> Self {
        let k = 10f64.powf(decades);
        Self {
            lo: self.lo * k,
            hi: self.hi * k,
            points: self.points,
        }
    }

    pub fn min_total_power(
        &self,
        scheme: SchemeKind,
        params: &SystemParams,
        g: HopGains,
        r0: f64,
    ) -> Result<PowerSolution> {
        ensure_finite("r0", r0)?;
        if r0 <= 0.0 {
            return Err(Error::OutOfRange {
                what: "r0",
                value: r0,
                allowed: "> 0",
            });
        }
        if self.points < 3 || !(self.lo > 0.0 && self.hi > self.lo && self.hi.is_finite()) {
            return Err(Error::Invariant(format!("unusable power grid {self:?}")));
        }
        let gamma = r0.exp2() - 1.0;
        let (p_s, p_r) = match scheme {
            SchemeKind::Irs => (gamma / unit_sinr(scheme, params, g, 0.0)?.sinr(), 0.0),
            SchemeKind::Af => self.search_af(params, g, gamma)?,
            SchemeKind::Df => self.search_df(params, g, gamma)?,
        };
        let budget = if scheme.is_relay() {
            PowerBudget::relay(p_s, p_r)
        } else {
            PowerBudget::irs(p_s)
        };
        Ok(PowerSolution {
            p_s,
            p_r,
            total: p_s + p_r,
            achieved_rate: rate::rate(scheme, params, g, budget)?,
        })
    }

    fn search_af(&self, params: &SystemParams, g: HopGains, gamma: f64) -> Result<(f64, f64)> {
        let source = |p_r: f64| unit_sinr(SchemeKind::Af, params, g, p_r).map(|c| gamma / c.sinr());
        let mut grid = *self;
        for _ in 0..=MAX_SHIFTS {
            let prs = grid.values();
            let totals = prs
                .iter()
                .map(|&p_r| source(p_r).map(|p_s| p_s + p_r))
                .collect::<Result<Vec<_>>>()?;
            let i = argmin(&totals);
            if i == 0 {
                grid = grid.shifted(-SHIFT_DECADES);
                continue;
            }
            if i == prs.len() - 1 {
                grid = grid.shifted(SHIFT_DECADES);
                continue;
            }
            let total = |t: f64| {
                let p_r = t.exp();
                source(p_r).map_or(f64::INFINITY, |p_s| p_s + p_r)
            };
            let m = golden_section(total, prs[i - 1].ln(), prs[i + 1].ln(), 1e-12);
            let (t, best) = if m.value < totals[i] { (m.x, m.value) } else { (prs[i].ln(), totals[i]) };
            let p_r = t.exp();
            return Ok((best - p_r, p_r));
        }
        Err(Error::Invariant("AF power optimum not bracketed".into()))
    }

    fn search_df(&self, params: &SystemParams, g: HopGains, gamma: f64) -> Result<(f64, f64)> {
        let hops = |p_r: f64| -> Result<(f64, f64)> {
            match unit_sinr(SchemeKind::Df, params, g, p_r)? {
                SinrComponents::Df { first, second } => Ok((first.sinr(), second.sinr())),
                _ => unreachable!("DF budget yields DF components"),
            }
        };
        let feasible = |p_r: f64| hops(p_r).map(|(_, second)| second >= gamma);
        let mut grid = *self;
        for _ in 0..=MAX_SHIFTS {
            let prs = grid.values();
            let mut first_ok = None;
            for (i, &p_r) in prs.iter().enumerate() {
                if feasible(p_r)? {
                    first_ok = Some(i);
                    break;
                }
            }
            let i = match first_ok {
                None => {
                    grid = grid.shifted(SHIFT_DECADES);
                    continue;
                }
                Some(0) => {
                    grid = grid.shifted(-SHIFT_DECADES);
                    continue;
                }
                Some(i) => i,
            };
            // Bisect the second-hop feasibility edge inside the grid cell.
            let (mut bad, mut ok) = (prs[i - 1], prs[i]);
            for _ in 0..200 {
                let mid = 0.5 * (bad + ok);
                if mid <= bad || mid >= ok {
                    break;
                }
                if feasible(mid)? {
                    ok = mid;
                } else {
                    bad = mid;
                }
            }
            let mut best: Option<(f64, f64)> = None;
            for &p_r in std::iter::once(&ok).chain(&prs[i..]) {
                let p_s = gamma / hops(p_r)?.0;
                if best.is_none_or(|(s, r)| p_s + p_r < s + r) {
                    best = Some((p_s, p_r));
                }
            }
            return Ok(best.expect("at least one feasible point"));
        }
        Err(Error::Invariant("no feasible DF relay power found".into()))
    }
}

/// SINR components with `p_s = 1`.
fn unit_sinr(scheme: SchemeKind, params: &SystemParams, g: HopGains, p_r: f64) -> Result<SinrComponents> {
    let budget = if scheme.is_relay() {
        PowerBudget::relay(1.0, p_r)
    } else {
        PowerBudget::irs(1.0)
    };
    rate::sinr_components(scheme, params, g, budget)
}

fn argmin(v: &[f64]) -> usize {
    v.iter()
        .enumerate()
        .fold((0, f64::INFINITY), |(bi, bv), (i, &x)| if x < bv { (i, x) } else { (bi, bv) })
        .0
}

/// Minimum total transmit power meeting `r0`, found on the default grid
/// `p_r ∈ [1e−9, 1e3] W` with `10⁴` points.
pub fn grid_min_total_power(scheme: SchemeKind, params: &SystemParams, g: HopGains, r0: f64) -> Result<PowerSolution> {
    PowerGrid::default().min_total_power(scheme, params, g, r0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::power;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn irs_is_exact() {
        let p = SystemParams::default().with_elements(100);
        let g = HopGains::new(2e-10, 7e-11).unwrap();
        let a = grid_min_total_power(SchemeKind::Irs, &p, g, 4.0).unwrap();
        let b = power::min_power_irs(&p, g, 4.0).unwrap();
        assert!(rel(a.total, b.total) < 1e-14);
        assert_eq!(a.p_r, 0.0);
    }

    #[test]
    fn af_and_df_match_closed_forms() {
        for n in [1, 10, 100] {
            let p = SystemParams::default().with_elements(n);
            for (gs, gr, r0) in [(1e-10, 1e-10, 4.0), (4e-8, 2e-11, 0.5), (1e-11, 5e-9, 18.0)] {
                let g = HopGains::new(gs, gr).unwrap();
                let af = grid_min_total_power(SchemeKind::Af, &p, g, r0).unwrap();
                assert!(rel(af.total, power::min_power_af(&p, g, r0).unwrap().total) < 1e-6);
                assert!(rel(af.achieved_rate, r0) < 1e-9);
                let df = grid_min_total_power(SchemeKind::Df, &p, g, r0).unwrap();
                assert!(rel(df.total, power::min_power_df(&p, g, r0).unwrap().total) < 1e-9);
            }
        }
    }

    #[test]
    fn window_moves_to_tiny_relay_powers() {
        // High gains push the optimal relay power below the default window.
        let p = SystemParams::default().with_elements(100);
        let g = HopGains::new(1.0, 1.0).unwrap();
        for scheme in [SchemeKind::Af, SchemeKind::Df] {
            let got = grid_min_total_power(scheme, &p, g, 0.5).unwrap();
            let want = power::min_power(scheme, &p, g, 0.5).unwrap();
            assert!(want.p_r < 1e-9);
            assert!(rel(got.total, want.total) < 1e-6, "{scheme}");
        }
    }

    #[test]
    fn rejects_nonpositive_target() {
        let p = SystemParams::default();
        let g = HopGains::new(1e-10, 1e-10).unwrap();
        assert!(grid_min_total_power(SchemeKind::Af, &p, g, 0.0).is_err());
        assert!(grid_min_total_power(SchemeKind::Af, &p, g, f64::NAN).is_err());
    }
}
