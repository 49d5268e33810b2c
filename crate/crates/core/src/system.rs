//! Shared value types: radio constants, node geometry, scheme selection and
//! transmit-power budgets.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Radio constants in linear units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Channel power gain at the 1 m reference distance.
    pub beta0: f64,
    /// Receiver noise power in watts.
    pub sigma2: f64,
    /// Residual self-interference factor of a full-duplex relay.
    pub rho: f64,
    pub n_x: u32,
    pub n_y: u32,
    /// Element spacing in wavelengths.
    pub d_over_lambda: f64,
}

impl Default for SystemParams {
    /// -60 dB reference gain, -110 dBm noise, -110 dB self-interference,
    /// a single element at half-wavelength spacing.
    fn default() -> Self {
        Self {
            beta0: 1e-6,
            sigma2: 1e-14,
            rho: 1e-11,
            n_x: 1,
            n_y: 1,
            d_over_lambda: 0.5,
        }
    }
}

impl SystemParams {
    /// Number of surface elements (IRS) or antennas per array (relay).
    pub fn n(&self) -> u32 {
        self.n_x * self.n_y
    }

    pub fn n_f64(&self) -> f64 {
        f64::from(self.n())
    }

    pub fn with_array(mut self, n_x: u32, n_y: u32) -> Self {
        self.n_x = n_x;
        self.n_y = n_y;
        self
    }

    /// Uses the most square `n_x × n_y` factorisation of `n` (`n_x ≥ n_y`).
    pub fn with_elements(self, n: u32) -> Self {
        let n = n.max(1);
        let mut n_y = (f64::from(n).sqrt().floor() as u32).max(1);
        while !n.is_multiple_of(n_y) {
            n_y -= 1;
        }
        self.with_array(n / n_y, n_y)
    }

    pub fn with_rho(mut self, rho: f64) -> Self {
        self.rho = rho;
        self
    }

    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        check(&mut out, "beta0", self.beta0 > 0.0 && self.beta0.is_finite(), "beta0 must be > 0");
        check(&mut out, "sigma2", self.sigma2 > 0.0 && self.sigma2.is_finite(), "sigma2 must be > 0");
        check(&mut out, "rho", self.rho >= 0.0 && self.rho.is_finite(), "rho must be >= 0");
        check(&mut out, "n_x", self.n_x >= 1, "n_x must be >= 1");
        check(&mut out, "n_y", self.n_y >= 1, "n_y must be >= 1");
        check(
            &mut out,
            "d_over_lambda",
            self.d_over_lambda > 0.0 && self.d_over_lambda.is_finite(),
            "d_over_lambda must be > 0",
        );
        out
    }
}

/// Source at the origin, destination at `(l, 0, 0)`, UAV at `(x_u, y_u, h_u)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    pub l: f64,
    pub x_u: f64,
    pub y_u: f64,
    pub h_u: f64,
    pub h_min: f64,
    pub h_max: f64,
}

impl Geometry {
    /// UAV at the midpoint, flying at `h_min`.
    pub fn new(l: f64, h_min: f64, h_max: f64) -> Self {
        Self {
            l,
            x_u: l / 2.0,
            y_u: 0.0,
            h_u: h_min,
            h_min,
            h_max,
        }
    }

    pub fn at(mut self, x_u: f64, y_u: f64, h_u: f64) -> Self {
        self.x_u = x_u;
        self.y_u = y_u;
        self.h_u = h_u;
        self
    }

    pub fn d_sr(&self) -> f64 {
        (self.x_u * self.x_u + self.y_u * self.y_u + self.h_u * self.h_u).sqrt()
    }

    pub fn d_rd(&self) -> f64 {
        let dx = self.x_u - self.l;
        (dx * dx + self.y_u * self.y_u + self.h_u * self.h_u).sqrt()
    }

    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let finite = [self.l, self.x_u, self.y_u, self.h_u, self.h_min, self.h_max]
            .iter()
            .all(|v| v.is_finite());
        check(&mut out, "geometry", finite, "all coordinates must be finite");
        check(&mut out, "l", self.l >= 0.0, "l must be >= 0");
        check(&mut out, "h_min", self.h_min > 0.0, "h_min must be > 0");
        check(
            &mut out,
            "h_min/h_max",
            self.h_min <= self.h_max,
            "altitude bounds must satisfy h_min <= h_max",
        );
        check(
            &mut out,
            "h_u",
            self.h_u >= self.h_min && self.h_u <= self.h_max,
            "h_u must lie within [h_min, h_max]",
        );
        check(&mut out, "d_sr", self.d_sr() > 0.0, "UAV must not coincide with the source");
        check(&mut out, "d_rd", self.d_rd() > 0.0, "UAV must not coincide with the destination");
        out
    }
}

/// A violated invariant, reported as data rather than as an error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub field: &'static str,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

fn check(out: &mut Vec<Violation>, field: &'static str, ok: bool, message: &str) {
    if !ok {
        out.push(Violation {
            field,
            message: message.to_string(),
        });
    }
}

/// Returns every violated invariant of `params` and `geom`.
pub fn validate(params: &SystemParams, geom: &Geometry) -> std::result::Result<(), Vec<Violation>> {
    let mut all = params.violations();
    all.extend(geom.violations());
    if all.is_empty() {
        Ok(())
    } else {
        Err(all)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeKind {
    Irs,
    Af,
    Df,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 3] = [SchemeKind::Irs, SchemeKind::Af, SchemeKind::Df];

    pub fn is_relay(self) -> bool {
        !matches!(self, SchemeKind::Irs)
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SchemeKind::Irs => "IRS",
            SchemeKind::Af => "AF",
            SchemeKind::Df => "DF",
        })
    }
}

impl FromStr for SchemeKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "IRS" => Ok(SchemeKind::Irs),
            "AF" => Ok(SchemeKind::Af),
            "DF" => Ok(SchemeKind::Df),
            other => Err(format!("unknown scheme `{other}` (expected IRS, AF or DF)")),
        }
    }
}

/// Transmit powers in watts. A reflecting surface has no relay power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerBudget {
    pub p_s: f64,
    pub p_r: Option<f64>,
}

impl PowerBudget {
    pub fn irs(p_s: f64) -> Self {
        Self { p_s, p_r: None }
    }

    pub fn relay(p_s: f64, p_r: f64) -> Self {
        Self { p_s, p_r: Some(p_r) }
    }

    pub fn total(&self) -> f64 {
        self.p_s + self.p_r.unwrap_or(0.0)
    }

    /// Relay power for `scheme`, rejecting budgets of the wrong shape or sign.
    pub(crate) fn relay_power_for(&self, scheme: SchemeKind) -> Result<f64> {
        if !(self.p_s >= 0.0) || self.p_r.is_some_and(|p| !(p >= 0.0)) {
            return Err(Error::OutOfRange {
                what: "transmit power",
                value: self.p_r.map_or(self.p_s, |p| p.min(self.p_s)),
                allowed: ">= 0",
            });
        }
        match (scheme, self.p_r) {
            (SchemeKind::Irs, None) => Ok(0.0),
            (SchemeKind::Af | SchemeKind::Df, Some(p_r)) => Ok(p_r),
            _ => Err(Error::BudgetMismatch(scheme)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn element_count_is_exact_product() {
        let p = SystemParams::default().with_array(7, 3);
        assert_eq!(p.n(), 21);
        for n in [1, 2, 10, 16, 100, 101, 1000, 256] {
            let p = SystemParams::default().with_elements(n);
            assert_eq!(p.n(), n);
            assert!(p.n_x >= p.n_y);
        }
        let p = SystemParams::default().with_elements(100);
        assert_eq!((p.n_x, p.n_y), (10, 10));
    }

    #[test]
    fn defaults_validate() {
        let g = Geometry::new(200.0, 100.0, 300.0);
        assert_eq!(validate(&SystemParams::default(), &g), Ok(()));
    }

    #[test]
    fn zero_noise_reported_by_field() {
        let p = SystemParams {
            sigma2: 0.0,
            ..SystemParams::default()
        };
        let errs = validate(&p, &Geometry::new(100.0, 50.0, 100.0)).unwrap_err();
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].field, "sigma2");
        assert_eq!(errs[0].message, "sigma2 must be > 0");
    }

    #[test]
    fn inverted_altitude_bounds_reported() {
        let g = Geometry {
            h_min: 120.0,
            h_max: 100.0,
            h_u: 110.0,
            ..Geometry::new(100.0, 50.0, 100.0)
        };
        let errs = validate(&SystemParams::default(), &g).unwrap_err();
        assert!(errs.iter().any(|v| v.field == "h_min/h_max"));
    }

    #[test]
    fn collects_every_violation() {
        let p = SystemParams {
            beta0: -1.0,
            rho: -1.0,
            n_x: 0,
            ..SystemParams::default()
        };
        let fields: Vec<_> = p.violations().iter().map(|v| v.field).collect();
        assert_eq!(fields, ["beta0", "rho", "n_x"]);
    }

    #[test]
    fn scheme_round_trips_through_text() {
        for s in SchemeKind::ALL {
            assert_eq!(s.to_string().parse::<SchemeKind>().unwrap(), s);
        }
        assert!("FD".parse::<SchemeKind>().is_err());
    }

    #[test]
    fn budget_shape_must_match_scheme() {
        assert_eq!(PowerBudget::irs(1.0).relay_power_for(SchemeKind::Irs), Ok(0.0));
        assert_eq!(PowerBudget::relay(1.0, 2.0).relay_power_for(SchemeKind::Df), Ok(2.0));
        assert_eq!(
            PowerBudget::irs(1.0).relay_power_for(SchemeKind::Af),
            Err(Error::BudgetMismatch(SchemeKind::Af))
        );
        assert!(PowerBudget::relay(1.0, 2.0).relay_power_for(SchemeKind::Irs).is_err());
        assert!(PowerBudget::relay(-1.0, 2.0).relay_power_for(SchemeKind::Af).is_err());
    }
}
