//! Total consumed power and energy efficiency.

use crate::error::{Error, Result};
use crate::rate::{self, HopGains};
use crate::system::{PowerBudget, SchemeKind, SystemParams, Violation};

/// Static power draw of every node plus per-element costs, in watts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardwareProfile {
    pub p_node_s: f64,
    pub p_node_d: f64,
    pub p_node_r_af: f64,
    pub p_node_r_df: f64,
    /// Per reflecting element.
    pub p_element: f64,
    /// Per relay antenna. A relay carries two arrays of `N` antennas.
    pub p_antenna: f64,
    /// Amplifier drain efficiency in `(0, 1]`.
    pub omega: f64,
}

impl Default for HardwareProfile {
    fn default() -> Self {
        Self {
            p_node_s: 0.1,
            p_node_d: 0.1,
            p_node_r_af: 0.1,
            p_node_r_df: 0.1,
            p_element: 0.33e-3,
            p_antenna: 0.5e-3,
            omega: 0.5,
        }
    }
}

impl HardwareProfile {
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let fields = [
            ("p_node_s", self.p_node_s),
            ("p_node_d", self.p_node_d),
            ("p_node_r_af", self.p_node_r_af),
            ("p_node_r_df", self.p_node_r_df),
            ("p_element", self.p_element),
            ("p_antenna", self.p_antenna),
        ];
        for (field, v) in fields {
            if !(v >= 0.0 && v.is_finite()) {
                out.push(Violation {
                    field,
                    message: format!("{field} must be >= 0"),
                });
            }
        }
        if !(self.omega > 0.0 && self.omega <= 1.0) {
            out.push(Violation {
                field: "omega",
                message: "omega must lie in (0, 1]".to_string(),
            });
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyReport {
    pub total_power: f64,
    pub rate: f64,
    /// bits/s/Hz per watt.
    pub efficiency: f64,
}

/// Consumed power for `n` surface elements (IRS) or `n` antennas per relay
/// array.
pub fn total_power(scheme: SchemeKind, hw: &HardwareProfile, budget: PowerBudget, n: u32) -> Result<f64> {
    let p_r = budget.relay_power_for(scheme)?;
    let n = f64::from(n);
    let radiated = (budget.p_s + p_r) / hw.omega;
    let nodes = hw.p_node_s + hw.p_node_d;
    Ok(match scheme {
        SchemeKind::Irs => radiated + nodes + n * hw.p_element,
        SchemeKind::Af => radiated + nodes + hw.p_node_r_af + 2.0 * n * hw.p_antenna,
        SchemeKind::Df => radiated + nodes + hw.p_node_r_df + 2.0 * n * hw.p_antenna,
    })
}

pub fn energy_efficiency(
    scheme: SchemeKind,
    hw: &HardwareProfile,
    params: &SystemParams,
    g: HopGains,
    budget: PowerBudget,
) -> Result<EnergyReport> {
    let rate = rate::rate(scheme, params, g, budget)?;
    let total_power = total_power(scheme, hw, budget, params.n())?;
    if !(total_power > 0.0) {
        return Err(Error::NonPositive {
            what: "total consumed power",
            value: total_power,
        });
    }
    Ok(EnergyReport {
        total_power,
        rate,
        efficiency: rate / total_power,
    })
}
