use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use skyrelay::par::Execution;
use skyrelay_cli::verify::{self, VerifyOptions};
use skyrelay_cli::{commands, CliError, Command, Preset, RunConfig};

/// Placement, minimum power and energy efficiency of UAV-borne reflecting
/// surfaces and full-duplex relays.
#[derive(Parser)]
#[command(name = "skyrelay", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// Flat `key = value` file, applied on top of the preset.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Also write a gnuplot script for the CSV.
    #[arg(long)]
    plot: Option<PathBuf>,
    /// Evaluate sweep points one at a time.
    #[arg(long)]
    sequential: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Optimal UAV position per series over a sweep.
    Deploy(Common),
    /// Minimum total transmit power per series over a sweep.
    Minpower(Common),
    /// Energy efficiency per series over a sweep.
    Ee(Common),
    /// Iteration trace of the alternating optimisation.
    Plan(Common),
    /// Cross-check closed forms against brute-force oracles.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Scale the optimal AF relay power by `1 + PERTURB` (negative control).
        #[arg(long, default_value_t = 0.0)]
        perturb: f64,
    },
}

fn load(common: &Common) -> Result<RunConfig, CliError> {
    let mut cfg = common.preset.map_or_else(RunConfig::default, Preset::config);
    if let Some(path) = &common.config {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::config("--config", format!("{}: {e}", path.display())))?;
        cfg = cfg.apply(&text)?;
    }
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn emit(table: &skyrelay_cli::table::Table, common: &Common, cfg: &RunConfig) -> Result<(), CliError> {
    let out = common.out.clone().or_else(|| cfg.out.as_ref().map(PathBuf::from));
    match &out {
        Some(path) => table.write_csv(fs::File::create(path)?)?,
        None => table.write_csv(io::stdout().lock())?,
    }
    Ok(())
}

fn sweep(cmd: Command, common: &Common) -> Result<ExitCode, CliError> {
    let cfg = load(common)?;
    if let Some(p) = common.preset {
        if p.command() != cmd.name() {
            return Err(CliError::config(
                "--preset",
                format!("{p} belongs to `{}`, not `{}`", p.command(), cmd.name()),
            ));
        }
    }
    let exec = if common.sequential { Execution::Sequential } else { Execution::default() };
    let table = commands::run(cmd, &cfg, common.preset.map(Preset::title), exec)?;
    emit(&table, common, &cfg)?;
    if let Some(plot) = &common.plot {
        let csv = common
            .out
            .as_ref()
            .map_or_else(|| "data.csv".to_string(), |p| p.display().to_string());
        fs::write(plot, commands::gnuplot(cmd, &cfg, &table, &csv))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Cmd::Deploy(c) => sweep(Command::Deploy, &c),
        Cmd::Minpower(c) => sweep(Command::MinPower, &c),
        Cmd::Ee(c) => sweep(Command::Ee, &c),
        Cmd::Plan(c) => {
            let cfg = load(&c)?;
            emit(&commands::run_plan(&cfg)?, &c, &cfg)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify { common, perturb } => {
            if !perturb.is_finite() || perturb <= -1.0 {
                return Err(CliError::config("--perturb", "must be a finite number > -1"));
            }
            let cfg = load(&common)?;
            let checks = verify::run(&cfg, VerifyOptions { perturb })?;
            let mut stdout = io::stdout().lock();
            for c in &checks {
                writeln!(stdout, "{c}")?;
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            writeln!(stdout, "{} checks, {failed} failed", checks.len())?;
            Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
