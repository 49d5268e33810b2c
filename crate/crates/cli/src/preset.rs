//! Built-in figure setups.

use std::fmt;
use std::str::FromStr;

use skyrelay::SchemeKind;

use crate::config::{RunConfig, Series, Sweep, SweepVar};
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Preset {
    Fig2,
    Fig3,
    Fig4a,
    Fig4b,
    Fig4c,
}

impl Preset {
    pub const ALL: [Preset; 5] = [Preset::Fig2, Preset::Fig3, Preset::Fig4a, Preset::Fig4b, Preset::Fig4c];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4a => "fig4a",
            Preset::Fig4b => "fig4b",
            Preset::Fig4c => "fig4c",
        }
    }

    /// The subcommand whose output the preset describes.
    pub fn command(self) -> &'static str {
        match self {
            Preset::Fig2 => "deploy",
            Preset::Fig4a => "minpower",
            Preset::Fig3 | Preset::Fig4b | Preset::Fig4c => "ee",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            Preset::Fig2 => "Optimal UAV position versus minimum altitude (N = 10, L = 100 m)",
            Preset::Fig3 => "Energy efficiency versus N",
            Preset::Fig4a => "Minimum transmit power versus distance L",
            Preset::Fig4b => "Energy efficiency versus target rate",
            Preset::Fig4c => "Energy efficiency versus minimum altitude",
        }
    }

    pub fn config(self) -> RunConfig {
        let base = RunConfig::default();
        let series = |list: &[(SchemeKind, Option<u32>, Option<f64>)]| -> Vec<Series> {
            list.iter()
                .map(|&(scheme, n, p_r_dbm)| Series { scheme, n, p_r_dbm })
                .collect()
        };
        use SchemeKind::{Af, Df, Irs};
        match self {
            Preset::Fig2 => {
                let mut c = base
                    .apply("n = 10\nl_m = 100\nh_min_m = 10\nh_max_m = 300\np_s_dbm = 20")
                    .expect("fig2 preset is valid");
                c.series = series(&[
                    (Irs, Some(10), None),
                    (Af, Some(10), Some(10.0)),
                    (Af, Some(10), Some(50.0)),
                    (Df, Some(10), Some(4.31615)),
                    (Df, Some(10), Some(8.5)),
                    (Df, Some(10), Some(0.0)),
                ]);
                c.sweep = Some(Sweep::linear(SweepVar::HMin, 10.0, 100.0, 91));
                c
            }
            Preset::Fig3 => {
                let mut c = base
                    .apply("l_m = 200\nh_min_m = 100\nh_max_m = 300\nr0 = 4")
                    .expect("fig3 preset is valid");
                c.series = series(&[(Irs, None, None), (Af, None, None), (Df, None, None)]);
                c.apply("sweep = n\nsweep_start = 1\nsweep_stop = 1000\nsweep_points = 60\nsweep_scale = log")
                    .expect("fig3 sweep is valid")
            }
            Preset::Fig4a => {
                let mut c = base
                    .apply("l_m = 100\nh_min_m = 100\nh_max_m = 300\nr0 = 4")
                    .expect("fig4a preset is valid");
                c.series = series(&[
                    (Irs, Some(10), None),
                    (Irs, Some(100), None),
                    (Irs, Some(1000), None),
                    (Af, Some(1), None),
                    (Df, Some(1), None),
                ]);
                c.sweep = Some(Sweep::linear(SweepVar::L, 100.0, 500.0, 41));
                c
            }
            Preset::Fig4b => {
                let mut c = base
                    .apply("l_m = 200\nh_min_m = 100\nh_max_m = 300\nr0 = 4")
                    .expect("fig4b preset is valid");
                c.series = series(&[
                    (Irs, Some(10), None),
                    (Irs, Some(100), None),
                    (Irs, Some(1000), None),
                    (Af, Some(1), None),
                    (Df, Some(1), None),
                ]);
                c.sweep = Some(Sweep::linear(SweepVar::R0, 0.5, 20.0, 40));
                c
            }
            Preset::Fig4c => {
                let mut c = base
                    .apply("l_m = 200\nh_min_m = 50\nh_max_m = 300\nr0 = 4")
                    .expect("fig4c preset is valid");
                c.series = series(&[
                    (Irs, Some(100), None),
                    (Irs, Some(1000), None),
                    (Af, Some(1), None),
                    (Df, Some(1), None),
                ]);
                c.sweep = Some(Sweep::linear(SweepVar::HMin, 50.0, 200.0, 31));
                c
            }
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| CliError::config("preset", format!("unknown preset `{s}`")))
    }
}
