//! Sweep commands. Each returns a [`Table`] with one row per sweep point, in
//! sweep order, and a fixed set of columns per series.

use skyrelay::deployment;
use skyrelay::energy;
use skyrelay::par::{self, Execution};
use skyrelay::planner::{self, PlanResult};
use skyrelay::rate::HopGains;
use skyrelay::units::{dbm_to_watts, linear_to_db, watts_to_dbm};
use skyrelay::{Geometry, SchemeKind, SystemParams};

use crate::config::{RunConfig, Series, Sweep, SweepVar};
use crate::error::CliError;
use crate::table::{Cell, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Deploy,
    MinPower,
    Ee,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Deploy => "deploy",
            Command::MinPower => "minpower",
            Command::Ee => "ee",
        }
    }

    /// Per-series column suffixes.
    pub fn fields(self) -> &'static [&'static str] {
        match self {
            Command::Deploy => &["x_m", "case"],
            Command::MinPower => &[
                "x_m", "p_s_w", "p_s_dbm", "p_r_w", "p_r_dbm", "total_w", "total_dbm", "iterations",
            ],
            Command::Ee => &[
                "x_m", "p_s_w", "p_s_dbm", "p_r_w", "p_r_dbm", "total_w", "total_dbm", "rate", "consumed_w", "ee",
            ],
        }
    }

    /// The column a plot of this command shows.
    pub fn headline(self) -> &'static str {
        match self {
            Command::Deploy => "x_m",
            Command::MinPower => "total_dbm",
            Command::Ee => "ee",
        }
    }

    fn default_sweep(self) -> Sweep {
        match self {
            Command::Deploy => Sweep::linear(SweepVar::HMin, 10.0, 100.0, 91),
            Command::MinPower => Sweep::linear(SweepVar::L, 100.0, 500.0, 41),
            Command::Ee => Sweep::linear(SweepVar::R0, 0.5, 20.0, 40),
        }
    }
}

/// Everything one series needs at one sweep point.
#[derive(Debug, Clone, Copy)]
pub struct Point {
    pub scheme: SchemeKind,
    pub params: SystemParams,
    pub geom: Geometry,
    pub r0: f64,
    pub p_s: f64,
    pub p_r: f64,
}

pub fn point(cfg: &RunConfig, series: &Series, var: Option<SweepVar>, value: f64) -> Result<Point, CliError> {
    let mut params = cfg.params;
    if let Some(n) = series.n {
        params = params.with_elements(n);
    }
    let mut geom = cfg.geom;
    let mut r0 = cfg.r0;
    let mut p_r = match series.p_r_dbm {
        Some(dbm) => dbm_to_watts(dbm)?,
        None => cfg.p_r,
    };
    match var {
        Some(SweepVar::HMin) => {
            geom.h_min = value;
            geom.h_max = geom.h_max.max(value);
        }
        Some(SweepVar::L) => geom.l = value,
        Some(SweepVar::N) => params = params.with_elements(value as u32),
        Some(SweepVar::R0) => r0 = value,
        Some(SweepVar::PR) => p_r = dbm_to_watts(value)?,
        None => {}
    }
    let geom = geom.at(0.5 * geom.l, 0.0, geom.h_min);
    Ok(Point {
        scheme: series.scheme,
        params,
        geom,
        r0,
        p_s: cfg.p_s,
        p_r,
    })
}

pub fn plan_at(cfg: &RunConfig, pt: &Point) -> Result<PlanResult, CliError> {
    Ok(planner::plan(pt.scheme, &pt.params, &pt.geom, pt.r0, &cfg.planner)?)
}

fn series_cells(cmd: Command, cfg: &RunConfig, pt: &Point) -> Result<Vec<Cell>, CliError> {
    let h = pt.geom.h_min;
    Ok(match cmd {
        Command::Deploy => {
            let s = deployment::deploy(pt.scheme, pt.geom.l, h, &pt.params, pt.p_s, pt.p_r)?;
            vec![Cell::Num(s.x_u), Cell::Text(s.case.to_string())]
        }
        Command::MinPower => {
            let plan = plan_at(cfg, pt)?;
            let p = plan.power;
            vec![
                Cell::Num(plan.deployment.x_u),
                Cell::Num(p.p_s),
                Cell::dbm(p.p_s),
                Cell::Num(p.p_r),
                Cell::dbm(p.p_r),
                Cell::Num(p.total),
                Cell::dbm(p.total),
                Cell::Num(plan.iterations as f64),
            ]
        }
        Command::Ee => {
            let plan = plan_at(cfg, pt)?;
            let p = plan.power;
            let g = HopGains::from_geometry(&pt.params, &pt.geom.at(plan.deployment.x_u, 0.0, h))?;
            let e = energy::energy_efficiency(pt.scheme, &cfg.hw, &pt.params, g, p.budget(pt.scheme))?;
            vec![
                Cell::Num(plan.deployment.x_u),
                Cell::Num(p.p_s),
                Cell::dbm(p.p_s),
                Cell::Num(p.p_r),
                Cell::dbm(p.p_r),
                Cell::Num(p.total),
                Cell::dbm(p.total),
                Cell::Num(e.rate),
                Cell::Num(e.total_power),
                Cell::Num(e.efficiency),
            ]
        }
    })
}

pub fn run(cmd: Command, cfg: &RunConfig, title: Option<&str>, exec: Execution) -> Result<Table, CliError> {
    let sweep = cfg.sweep.clone().unwrap_or_else(|| cmd.default_sweep());
    let mut columns = vec![sweep.var.column().to_string()];
    for s in &cfg.series {
        for f in cmd.fields() {
            columns.push(format!("{}_{f}", s.label()));
        }
    }

    let rows = par::map(exec, &sweep.values, |&v| -> Result<Vec<Cell>, CliError> {
        let mut row = vec![Cell::Num(v)];
        for s in &cfg.series {
            let pt = point(cfg, s, Some(sweep.var), v)?;
            row.extend(series_cells(cmd, cfg, &pt)?);
        }
        Ok(row)
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;

    Ok(Table {
        comments: header(cmd.name(), cfg, &sweep, title),
        columns,
        rows,
    })
}

/// Per-iteration trace of the alternating optimisation, one block of rows
/// per series.
pub fn run_plan(cfg: &RunConfig) -> Result<Table, CliError> {
    let columns = ["series", "iteration", "x_m", "total_w", "total_dbm", "converged"]
        .map(String::from)
        .to_vec();
    let mut rows = Vec::new();
    for s in &cfg.series {
        let pt = point(cfg, s, None, f64::NAN)?;
        let plan = plan_at(cfg, &pt)?;
        for (i, it) in plan.iterates.iter().enumerate() {
            rows.push(vec![
                Cell::Text(s.label()),
                Cell::Num((i + 1) as f64),
                Cell::Num(it.x_u),
                Cell::Num(it.power.total),
                Cell::dbm(it.power.total),
                Cell::Text(plan.converged.to_string()),
            ]);
        }
    }
    let mut comments = header("plan", cfg, &Sweep { var: SweepVar::L, values: vec![] }, None);
    comments.retain(|c| !c.starts_with("sweep"));
    Ok(Table { comments, columns, rows })
}

fn fmt_db(x: f64) -> String {
    linear_to_db(x).map_or_else(|_| "-inf".into(), |v| format!("{v:.4}"))
}

fn fmt_dbm(x: f64) -> String {
    watts_to_dbm(x).map_or_else(|_| "-inf".into(), |v| format!("{v:.4}"))
}

fn header(cmd: &str, cfg: &RunConfig, sweep: &Sweep, title: Option<&str>) -> Vec<String> {
    let p = &cfg.params;
    let g = &cfg.geom;
    let hw = &cfg.hw;
    let mut out = vec![format!("skyrelay {cmd}")];
    if let Some(t) = title {
        out.push(t.to_string());
    }
    out.extend([
        format!("beta0 = {:e} ({} dB)", p.beta0, fmt_db(p.beta0)),
        format!("sigma2 = {:e} W ({} dBm)", p.sigma2, fmt_dbm(p.sigma2)),
        format!("rho = {:e} ({} dB)", p.rho, fmt_db(p.rho)),
        format!("array = {} x {} (N = {}), d/lambda = {}", p.n_x, p.n_y, p.n(), p.d_over_lambda),
        format!("L = {} m, h_min = {} m, h_max = {} m", g.l, g.h_min, g.h_max),
        format!("p_s = {} W ({} dBm), p_r = {} W ({} dBm)", cfg.p_s, fmt_dbm(cfg.p_s), cfg.p_r, fmt_dbm(cfg.p_r)),
        format!("r0 = {} bits/s/Hz", cfg.r0),
        format!(
            "P_S = {} W, P_D = {} W, P_R(AF) = {} W, P_R(DF) = {} W, P_e = {} W, P_a = {} W, omega = {}",
            hw.p_node_s, hw.p_node_d, hw.p_node_r_af, hw.p_node_r_df, hw.p_element, hw.p_antenna, hw.omega
        ),
        format!("epsilon = {} W, max_iters = {}", cfg.planner.epsilon, cfg.planner.max_iters),
    ]);
    if let (Some(a), Some(b)) = (sweep.values.first(), sweep.values.last()) {
        out.push(format!("sweep {} from {a} to {b}, {} points", sweep.var.column(), sweep.values.len()));
    }
    let series: Vec<String> = cfg.series.iter().map(|s| s.to_string()).collect();
    out.push(format!("series = {}", series.join(", ")));
    out
}

/// A gnuplot script drawing the headline column of every series.
pub fn gnuplot(cmd: Command, cfg: &RunConfig, table: &Table, csv_path: &str) -> String {
    let x = &table.columns[0];
    let mut s = String::new();
    s.push_str("set datafile separator ','\nset key outside right\nset grid\n");
    s.push_str(&format!("set xlabel '{x}'\nset ylabel '{}'\n", cmd.headline()));
    if cfg.sweep.as_ref().is_some_and(|s| s.var == SweepVar::N) {
        s.push_str("set logscale x\n");
    }
    let plots: Vec<String> = cfg
        .series
        .iter()
        .filter_map(|ser| {
            let col = table.column(&format!("{}_{}", ser.label(), cmd.headline()))?;
            Some(format!(
                "'{csv_path}' every ::1 using 1:{} with linespoints title '{}'",
                col + 1,
                ser
            ))
        })
        .collect();
    s.push_str(&format!("plot {}\n", plots.join(", \\\n     ")));
    s
}
