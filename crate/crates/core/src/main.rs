use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use chiral_diode::io::commands::{self, EXIT_CONFIG};
use chiral_diode::io::scenario::{DirectionChoice, EmitterKind, SweepConfig};
use chiral_diode::io::{write_table, write_table_to, Format, GridSpec, Scenario, OUT_DIR_ENV};
use chiral_diode::tuner::TuneMode;

/// Single-photon scattering off an emitter chirally coupled to a waveguide.
///
/// Settings are resolved as: command-line flags, then the `--config` file,
/// then built-in defaults. Output goes to `--out`, else the file's
/// `output.path`, else `$CHIRAL_DIODE_OUT_DIR/<command>.<ext>`, else stdout.
/// All rates and frequencies are in units of Γ_R.
#[derive(Debug, Parser)]
#[command(name = "chiral-diode", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// T_R, T_L, R, ΔT and losses along a δ_k grid.
    Spectrum {
        #[command(flatten)]
        common: Common,
        /// δ_k grid as start:stop:count.
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<GridSpec>,
    },
    /// Λ emitter over a (Δ, Ω) grid at fixed δ_k.
    Sweep2d {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        delta_k: Option<f64>,
        /// Δ grid as start:stop:count.
        #[arg(long, allow_hyphen_values = true)]
        delta_grid: Option<GridSpec>,
        /// Ω grid as start:stop:count.
        #[arg(long, allow_hyphen_values = true)]
        omega_grid: Option<GridSpec>,
    },
    /// Laser settings that block or pass a target detuning.
    Tune {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[arg(long, allow_hyphen_values = true)]
        delta_k: Option<f64>,
    },
    /// Wavepacket simulation against the closed form.
    Oracle {
        #[command(flatten)]
        common: Common,
        /// Comma-separated carrier detunings; an empty string gives none.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_carriers)]
        carriers: Option<Carriers>,
        #[arg(long, value_enum)]
        direction: Option<DirectionArg>,
        #[arg(long)]
        sigma_k: Option<f64>,
        #[arg(long)]
        n_modes: Option<usize>,
        #[arg(long)]
        span: Option<f64>,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Closed-form ΔT against the amplitude route along a δ_k grid.
    Compare {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<GridSpec>,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// Scenario file (TOML, or JSON with a .json extension).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    #[arg(long, value_enum)]
    emitter: Option<EmitterArg>,
    #[arg(long)]
    gamma_l: Option<f64>,
    #[arg(long)]
    gamma_a: Option<f64>,
    #[arg(long)]
    gamma_c: Option<f64>,
    /// Rabi frequency; for `tune`, pins Ω in the plan.
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    delta_laser: Option<f64>,
}

#[derive(Debug, Clone)]
struct Carriers(Vec<f64>);

fn parse_carriers(s: &str) -> Result<Carriers, String> {
    if s.trim().is_empty() {
        return Ok(Carriers(Vec::new()));
    }
    s.split(',')
        .map(|c| c.trim().parse::<f64>().map_err(|e| format!("`{c}`: {e}")))
        .collect::<Result<_, _>>()
        .map(Carriers)
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum EmitterArg {
    TwoLevel,
    Lambda,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Block,
    Pass,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DirectionArg {
    FromLeft,
    FromRight,
    Both,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Spectrum { .. } => "spectrum",
            Command::Sweep2d { .. } => "sweep2d",
            Command::Tune { .. } => "tune",
            Command::Oracle { .. } => "oracle",
            Command::Compare { .. } => "compare",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Spectrum { common, .. }
            | Command::Sweep2d { common, .. }
            | Command::Tune { common, .. }
            | Command::Oracle { common, .. }
            | Command::Compare { common, .. } => common,
        }
    }
}

fn apply_common(scenario: &mut Scenario, c: &Common, is_tune: bool) {
    let e = &mut scenario.emitter;
    if let Some(k) = c.emitter {
        e.kind = match k {
            EmitterArg::TwoLevel => EmitterKind::TwoLevel,
            EmitterArg::Lambda => EmitterKind::Lambda,
        };
    }
    if let Some(v) = c.gamma_l {
        e.gamma_l = v;
    }
    if let Some(v) = c.gamma_a {
        e.gamma_a = v;
    }
    if let Some(v) = c.gamma_c {
        e.gamma_c = v;
    }
    if let Some(v) = c.delta_laser {
        e.delta_laser = v;
    }
    if let Some(v) = c.omega {
        if !is_tune {
            e.omega = v;
        }
    }
    if let Some(f) = c.format {
        scenario.output.format = Some(match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        });
    }
    if let Some(p) = &c.out {
        scenario.output.path = Some(p.clone());
    }
}

fn apply_sweep(sweep: &mut SweepConfig, cmd: &Command) {
    match (sweep, cmd) {
        (SweepConfig::Spectrum { grid }, Command::Spectrum { grid: Some(g), .. })
        | (SweepConfig::Compare { grid }, Command::Compare { grid: Some(g), .. }) => *grid = *g,
        (SweepConfig::Sweep2d { delta_k, delta_laser, omega }, Command::Sweep2d { delta_k: dk, delta_grid, omega_grid, .. }) => {
            if let Some(v) = dk {
                *delta_k = *v;
            }
            if let Some(g) = delta_grid {
                *delta_laser = *g;
            }
            if let Some(g) = omega_grid {
                *omega = *g;
            }
        }
        (SweepConfig::Tune { mode, delta_k, omega }, Command::Tune { common, mode: m, delta_k: dk }) => {
            if let Some(m) = m {
                *mode = match m {
                    ModeArg::Block => TuneMode::Block,
                    ModeArg::Pass => TuneMode::Pass,
                };
            }
            if let Some(v) = dk {
                *delta_k = *v;
            }
            if common.omega.is_some() {
                *omega = common.omega;
            }
        }
        (
            SweepConfig::Oracle(cfg),
            Command::Oracle { carriers, direction, sigma_k, n_modes, span, dt, tolerance, .. },
        ) => {
            if let Some(c) = carriers {
                cfg.carriers = c.0.clone();
            }
            if let Some(d) = direction {
                cfg.directions = match d {
                    DirectionArg::FromLeft => DirectionChoice::FromLeft,
                    DirectionArg::FromRight => DirectionChoice::FromRight,
                    DirectionArg::Both => DirectionChoice::Both,
                };
            }
            if let Some(v) = sigma_k {
                cfg.sigma_k = *v;
            }
            if let Some(v) = n_modes {
                cfg.n_modes = *v;
            }
            if let Some(v) = span {
                cfg.span = *v;
            }
            if let Some(v) = dt {
                cfg.dt = *v;
            }
            if let Some(v) = tolerance {
                cfg.tolerance = *v;
            }
        }
        _ => {}
    }
}

fn resolve(cmd: &Command) -> Result<Scenario> {
    let common = cmd.common();
    let base = match &common.config {
        Some(path) => Scenario::load(path)?,
        None => Scenario::default(),
    };
    let mut scenario = base.for_command(cmd.name())?;
    apply_common(&mut scenario, common, matches!(cmd, Command::Tune { .. }));
    if let Some(sweep) = scenario.sweep.as_mut() {
        apply_sweep(sweep, cmd);
    }
    if scenario.output.path.is_none() {
        if let Some(dir) = std::env::var_os(OUT_DIR_ENV).filter(|d| !d.is_empty()) {
            let ext = scenario.format().extension();
            scenario.output.path = Some(PathBuf::from(dir).join(format!("{}.{ext}", cmd.name())));
        }
    }
    scenario.output.format = Some(scenario.format());
    scenario.validate()?;
    Ok(scenario)
}

fn execute(cmd: &Command) -> Result<i32> {
    let scenario = resolve(cmd)?;
    let output = commands::run(&scenario)?;
    let format = scenario.format();
    match &scenario.output.path {
        Some(path) => write_table_to(&output.table, format, path)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => write_table(&output.table, format, std::io::stdout().lock())?,
    }
    Ok(output.exit_code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let start = Instant::now();
    let code = match execute(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_CONFIG
        }
    };
    eprintln!("{}: {:.3} s", cli.command.name(), start.elapsed().as_secs_f64());
    ExitCode::from(code as u8)
}
