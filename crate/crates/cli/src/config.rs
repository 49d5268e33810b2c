//! Flat `key = value` run configuration.
//!
//! Physical quantities carry their unit in the key (`_db`, `_dbm`, `_m`,
//! `_w`). Unknown keys and duplicate keys are errors. `#` starts a comment.
//!
//! ```text
//! n = 10
//! l_m = 100
//! p_s_dbm = 20
//! series = IRS:10, AF:10@50, DF:10@0
//! sweep = h_min_m
//! sweep_start = 10
//! sweep_stop = 100
//! sweep_points = 10
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use skyrelay::energy::HardwareProfile;
use skyrelay::planner::PlannerConfig;
use skyrelay::units::{db_to_linear, dbm_to_watts};
use skyrelay::{Geometry, SchemeKind, SystemParams};

use crate::error::CliError;

/// Every key the parser accepts.
pub const KEYS: &[&str] = &[
    "beta0_db",
    "sigma2_dbm",
    "rho_db",
    "n",
    "n_x",
    "n_y",
    "d_over_lambda",
    "l_m",
    "h_min_m",
    "h_max_m",
    "p_s_dbm",
    "p_s_w",
    "p_r_dbm",
    "p_r_w",
    "r0",
    "p_node_s_w",
    "p_node_d_w",
    "p_node_r_af_w",
    "p_node_r_df_w",
    "p_element_w",
    "p_antenna_w",
    "omega",
    "epsilon_w",
    "max_iters",
    "initial_x_m",
    "series",
    "sweep",
    "sweep_start",
    "sweep_stop",
    "sweep_points",
    "sweep_step",
    "sweep_scale",
    "samples",
    "instances",
    "seed",
    "out",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    HMin,
    L,
    N,
    R0,
    PR,
}

impl SweepVar {
    /// Column name, which is also the config spelling.
    pub fn column(self) -> &'static str {
        match self {
            SweepVar::HMin => "h_min_m",
            SweepVar::L => "l_m",
            SweepVar::N => "n",
            SweepVar::R0 => "r0",
            SweepVar::PR => "p_r_dbm",
        }
    }
}

impl FromStr for SweepVar {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        [SweepVar::HMin, SweepVar::L, SweepVar::N, SweepVar::R0, SweepVar::PR]
            .into_iter()
            .find(|v| v.column() == s)
            .ok_or_else(|| format!("unknown sweep variable `{s}` (expected h_min_m, l_m, n, r0 or p_r_dbm)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub var: SweepVar,
    pub values: Vec<f64>,
}

impl Sweep {
    pub fn linear(var: SweepVar, start: f64, stop: f64, points: usize) -> Self {
        Self::build(var, start, stop, points, Scale::Linear)
    }

    fn build(var: SweepVar, start: f64, stop: f64, points: usize, scale: Scale) -> Self {
        let last = (points - 1) as f64;
        let mut values: Vec<f64> = (0..points)
            .map(|i| {
                let t = i as f64 / last;
                match scale {
                    Scale::Linear => start + (stop - start) * t,
                    Scale::Log => (start.ln() + (stop.ln() - start.ln()) * t).exp(),
                }
            })
            .collect();
        if var == SweepVar::N {
            for v in &mut values {
                *v = v.round();
            }
            values.dedup();
        }
        Self { var, values }
    }
}

/// One curve: a scheme, its array size and optionally a fixed relay power.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub scheme: SchemeKind,
    /// Falls back to the config's `n` (or the swept `n`).
    pub n: Option<u32>,
    pub p_r_dbm: Option<f64>,
}

impl Series {
    pub fn label(&self) -> String {
        let mut s = self.scheme.to_string();
        if let Some(n) = self.n {
            s.push_str(&format!("_N{n}"));
        }
        if let Some(p) = self.p_r_dbm {
            s.push_str(&format!("_pr{p}dBm"));
        }
        s
    }
}

impl FromStr for Series {
    type Err = String;

    /// `SCHEME[:N][@P_R_DBM]`, e.g. `IRS:100`, `AF:10@50`, `DF`.
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let (head, p_r) = match s.split_once('@') {
            Some((h, p)) => (h, Some(p)),
            None => (s, None),
        };
        let (scheme, n) = match head.split_once(':') {
            Some((sc, n)) => (sc, Some(n)),
            None => (head, None),
        };
        let scheme: SchemeKind = scheme.trim().parse().map_err(|_| format!("unknown scheme in series `{s}`"))?;
        let n = n
            .map(|n| match n.trim().parse::<u32>() {
                Ok(v) if v >= 1 => Ok(v),
                _ => Err(format!("series `{s}`: N must be a positive integer")),
            })
            .transpose()?;
        let p_r_dbm = p_r
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| format!("series `{s}`: relay power must be a number in dBm"))
            })
            .transpose()?;
        if p_r_dbm.is_some() && !scheme.is_relay() {
            return Err(format!("series `{s}`: IRS takes no relay power"));
        }
        Ok(Self { scheme, n, p_r_dbm })
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.scheme)?;
        if let Some(n) = self.n {
            write!(f, ":{n}")?;
        }
        if let Some(p) = self.p_r_dbm {
            write!(f, "@{p}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: SystemParams,
    pub geom: Geometry,
    pub hw: HardwareProfile,
    pub planner: PlannerConfig,
    /// Source power for placement runs, watts.
    pub p_s: f64,
    /// Relay power for placement runs when a series gives none, watts.
    pub p_r: f64,
    pub r0: f64,
    pub series: Vec<Series>,
    pub sweep: Option<Sweep>,
    pub samples: usize,
    pub instances: usize,
    pub seed: u64,
    pub out: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            params: SystemParams::default(),
            geom: Geometry::new(200.0, 100.0, 300.0),
            hw: HardwareProfile::default(),
            planner: PlannerConfig::default(),
            p_s: 0.1,
            p_r: 0.1,
            r0: 4.0,
            series: vec![
                Series { scheme: SchemeKind::Irs, n: None, p_r_dbm: None },
                Series { scheme: SchemeKind::Af, n: None, p_r_dbm: None },
                Series { scheme: SchemeKind::Df, n: None, p_r_dbm: None },
            ],
            sweep: None,
            samples: 10_000,
            instances: 20,
            seed: 1,
            out: None,
        }
    }
}

/// Raw `key = value` pairs in file order.
pub fn parse_pairs(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut seen = BTreeMap::new();
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::config(format!("line {}", i + 1), format!("expected `key = value`, got `{line}`")));
        };
        let (k, v) = (k.trim().to_string(), v.trim().to_string());
        if !KEYS.contains(&k.as_str()) {
            return Err(CliError::config(k, "unknown key"));
        }
        if let Some(prev) = seen.insert(k.clone(), i + 1) {
            return Err(CliError::config(k, format!("duplicate key (first set on line {prev})")));
        }
        out.push((k, v));
    }
    Ok(out)
}

fn number(key: &str, v: &str) -> Result<f64, CliError> {
    v.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| CliError::config(key, format!("`{v}` is not a finite number")))
}

fn integer<T: FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.parse::<T>()
        .map_err(|_| CliError::config(key, format!("`{v}` is not a non-negative integer")))
}

fn model(key: &str, r: skyrelay::Result<f64>) -> Result<f64, CliError> {
    r.map_err(|e| CliError::config(key, e.to_string()))
}

impl RunConfig {
    /// Applies `text` on top of `self` and validates the result.
    pub fn apply(mut self, text: &str) -> Result<Self, CliError> {
        let pairs = parse_pairs(text)?;
        let has = |k: &str| pairs.iter().any(|(key, _)| key == k);
        for (a, b) in [("p_s_dbm", "p_s_w"), ("p_r_dbm", "p_r_w")] {
            if has(a) && has(b) {
                return Err(CliError::config(b, format!("conflicts with {a}")));
            }
        }
        if has("sweep_points") && has("sweep_step") {
            return Err(CliError::config("sweep_step", "conflicts with sweep_points"));
        }

        let mut sweep_var = None;
        let (mut start, mut stop, mut points, mut step, mut scale) = (None, None, None, None, Scale::Linear);
        let mut n = None;
        let (mut n_x, mut n_y) = (None, None);
        let mut h_max_set = false;

        for (k, v) in &pairs {
            let key = k.as_str();
            match key {
                "beta0_db" => self.params.beta0 = model(key, db_to_linear(number(key, v)?))?,
                "sigma2_dbm" => self.params.sigma2 = model(key, dbm_to_watts(number(key, v)?))?,
                "rho_db" => self.params.rho = model(key, db_to_linear(number(key, v)?))?,
                "n" => n = Some(integer::<u32>(key, v)?),
                "n_x" => n_x = Some(integer::<u32>(key, v)?),
                "n_y" => n_y = Some(integer::<u32>(key, v)?),
                "d_over_lambda" => self.params.d_over_lambda = number(key, v)?,
                "l_m" => self.geom.l = number(key, v)?,
                "h_min_m" => self.geom.h_min = number(key, v)?,
                "h_max_m" => {
                    self.geom.h_max = number(key, v)?;
                    h_max_set = true;
                }
                "p_s_dbm" => self.p_s = model(key, dbm_to_watts(number(key, v)?))?,
                "p_s_w" => self.p_s = number(key, v)?,
                "p_r_dbm" => self.p_r = model(key, dbm_to_watts(number(key, v)?))?,
                "p_r_w" => self.p_r = number(key, v)?,
                "r0" => self.r0 = number(key, v)?,
                "p_node_s_w" => self.hw.p_node_s = number(key, v)?,
                "p_node_d_w" => self.hw.p_node_d = number(key, v)?,
                "p_node_r_af_w" => self.hw.p_node_r_af = number(key, v)?,
                "p_node_r_df_w" => self.hw.p_node_r_df = number(key, v)?,
                "p_element_w" => self.hw.p_element = number(key, v)?,
                "p_antenna_w" => self.hw.p_antenna = number(key, v)?,
                "omega" => self.hw.omega = number(key, v)?,
                "epsilon_w" => self.planner.epsilon = number(key, v)?,
                "max_iters" => self.planner.max_iters = integer(key, v)?,
                "initial_x_m" => self.planner.initial_x = Some(number(key, v)?),
                "series" => {
                    self.series = v
                        .split(',')
                        .filter(|s| !s.trim().is_empty())
                        .map(|s| s.parse::<Series>().map_err(|e| CliError::config(key, e)))
                        .collect::<Result<_, _>>()?;
                }
                "sweep" => sweep_var = Some(v.parse::<SweepVar>().map_err(|e| CliError::config(key, e))?),
                "sweep_start" => start = Some(number(key, v)?),
                "sweep_stop" => stop = Some(number(key, v)?),
                "sweep_points" => points = Some(integer::<usize>(key, v)?),
                "sweep_step" => step = Some(number(key, v)?),
                "sweep_scale" => {
                    scale = match v.as_str() {
                        "linear" => Scale::Linear,
                        "log" => Scale::Log,
                        _ => return Err(CliError::config(key, format!("`{v}` is neither linear nor log"))),
                    }
                }
                "samples" => self.samples = integer(key, v)?,
                "instances" => self.instances = integer(key, v)?,
                "seed" => self.seed = integer(key, v)?,
                "out" => self.out = Some(v.clone()),
                _ => unreachable!("key list and match arms out of sync: {key}"),
            }
        }

        match (n, n_x, n_y) {
            (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
                return Err(CliError::config("n", "give either n or n_x/n_y, not both"))
            }
            (Some(0), None, None) => return Err(CliError::config("n", "must be >= 1")),
            (Some(n), None, None) => self.params = self.params.with_elements(n),
            (None, x, y) if x.is_some() || y.is_some() => {
                self.params = self.params.with_array(x.unwrap_or(self.params.n_x), y.unwrap_or(self.params.n_y));
            }
            _ => {}
        }
        if !h_max_set {
            self.geom.h_max = self.geom.h_max.max(self.geom.h_min);
        }
        self.geom = self.geom.at(0.5 * self.geom.l, 0.0, self.geom.h_min);

        let sweep_keys = start.is_some() || stop.is_some() || points.is_some() || step.is_some();
        let var = sweep_var.or(self.sweep.as_ref().map(|s| s.var));
        match var {
            // A bare `sweep` naming the preset's variable keeps the preset range.
            Some(v) if !sweep_keys && self.sweep.as_ref().is_some_and(|s| s.var == v) => {}
            Some(var) => {
                let (Some(start), Some(stop)) = (start, stop) else {
                    return Err(CliError::config("sweep", "needs sweep_start and sweep_stop"));
                };
                let points = match (points, step) {
                    (Some(p), None) => p,
                    (None, Some(st)) if st > 0.0 => ((stop - start).abs() / st + 1e-9).floor() as usize + 1,
                    (None, Some(_)) => return Err(CliError::config("sweep_step", "must be > 0")),
                    _ => return Err(CliError::config("sweep", "needs sweep_points or sweep_step")),
                };
                if points < 2 {
                    return Err(CliError::config("sweep_points", "must be >= 2"));
                }
                if scale == Scale::Log && !(start > 0.0 && stop > 0.0) {
                    return Err(CliError::config("sweep_scale", "log sweeps need positive bounds"));
                }
                self.sweep = Some(Sweep::build(var, start, stop, points, scale));
            }
            None if sweep_keys => return Err(CliError::config("sweep", "sweep bounds given without `sweep`")),
            None => {}
        }

        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let mut bad: Vec<(String, String)> = Vec::new();
        for v in self.params.violations().into_iter().chain(self.geom.violations()).chain(self.hw.violations()) {
            bad.push((v.field.to_string(), v.message));
        }
        if !(self.p_s > 0.0) {
            bad.push(("p_s".into(), "must be > 0".into()));
        }
        if !(self.p_r >= 0.0) {
            bad.push(("p_r".into(), "must be >= 0".into()));
        }
        if !(self.r0 > 0.0 && self.r0 <= skyrelay::power::MAX_RATE) {
            bad.push(("r0".into(), format!("must lie in (0, {}]", skyrelay::power::MAX_RATE)));
        }
        if !(self.planner.epsilon > 0.0) {
            bad.push(("epsilon_w".into(), "must be > 0".into()));
        }
        if self.planner.max_iters == 0 {
            bad.push(("max_iters".into(), "must be >= 1".into()));
        }
        if let Some(x) = self.planner.initial_x {
            if !(0.0..=self.geom.l).contains(&x) {
                bad.push(("initial_x_m".into(), "must lie in [0, l_m]".into()));
            }
        }
        if self.series.is_empty() {
            bad.push(("series".into(), "at least one series is required".into()));
        }
        if self.samples == 0 {
            bad.push(("samples".into(), "must be >= 1".into()));
        }
        if self.instances == 0 {
            bad.push(("instances".into(), "must be >= 1".into()));
        }
        if let Some(s) = &self.sweep {
            let ok = s.values.iter().all(|&v| match s.var {
                SweepVar::HMin => v > 0.0,
                SweepVar::L => v > 0.0,
                SweepVar::N => v >= 1.0 && v <= f64::from(u32::MAX),
                SweepVar::R0 => v > 0.0 && v <= skyrelay::power::MAX_RATE,
                SweepVar::PR => v.is_finite(),
            });
            if !ok {
                bad.push((s.var.column().into(), "sweep leaves the valid range".into()));
            }
            if s.var == SweepVar::PR && self.series.iter().any(|x| x.p_r_dbm.is_some()) {
                bad.push(("series".into(), "fixed relay powers conflict with a p_r_dbm sweep".into()));
            }
            if s.var == SweepVar::N && self.series.iter().any(|x| x.n.is_some()) {
                bad.push(("series".into(), "fixed sizes conflict with an n sweep".into()));
            }
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(CliError::Config(bad))
        }
    }
}
