use serde_json::{json, Value};
use thiserror::Error;

use super::scenario::{ConfigError, Scenario, SweepConfig};
use super::table::{Cell, ResultTable};
use crate::model::{CouplingRates, Detuning, EmitterSpec, LaserDrive};
use crate::oracle::compare::CompareError;
use crate::oracle::compare_to_analytic;
use crate::scattering::{
    amplitudes_lambda, delta_t_closed_form, scatter, spectrum, ScatteringError, ScatteringResult,
    CROSS_FORMULA_EQ,
};
use crate::tuner::{tune_block, tune_pass, Blocked, Feasibility, TuneError, TuneMode, TunePlan};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_TOLERANCE: i32 = 3;

pub const SPECTRUM_COLUMNS: [&str; 7] = ["delta_k", "T_R", "T_L", "R", "Delta_T", "loss_R", "loss_L"];
pub const SWEEP2D_COLUMNS: [&str; 5] = ["Delta", "Omega", "T_R", "T_L", "Delta_T"];
pub const TUNE_COLUMNS: [&str; 15] = [
    "mode",
    "status",
    "delta_k",
    "Delta",
    "Omega",
    "required_gamma_a",
    "gap",
    "blocked",
    "T_R",
    "T_L",
    "R",
    "Delta_T",
    "loss_R",
    "loss_L",
    "note",
];
pub const ORACLE_COLUMNS: [&str; 8] =
    ["carrier", "direction", "T_oracle", "T_analytic", "R_oracle", "R_analytic", "loss", "converged"];
pub const COMPARE_COLUMNS: [&str; 5] = ["delta_k", "Delta_T_amplitude", "Delta_T_closed", "abs_diff", "applicable"];

#[derive(Debug, Error)]
pub enum CommandError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Scattering(#[from] ScatteringError),
    #[error(transparent)]
    Tune(#[from] TuneError),
    #[error(transparent)]
    Oracle(#[from] CompareError),
    #[error("scenario has no `{0}` sweep")]
    MissingSweep(&'static str),
}

impl From<crate::model::ModelError> for CommandError {
    fn from(e: crate::model::ModelError) -> Self {
        CommandError::Config(e.into())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub table: ResultTable,
    pub exit_code: i32,
}

fn meta(command: &str, scenario: &Scenario) -> Value {
    json!({
        "tool": "chiral-diode",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "scenario": serde_json::to_value(scenario).expect("scenario serializes"),
    })
}

fn result_cells(r: &ScatteringResult) -> Vec<Cell> {
    vec![r.trans_r.into(), r.trans_l.into(), r.refl.into(), r.delta_t.into(), r.loss_r.into(), r.loss_l.into()]
}

/// Runs the command named by the scenario's sweep.
pub fn run(scenario: &Scenario) -> Result<CommandOutput, CommandError> {
    match scenario.sweep {
        Some(SweepConfig::Spectrum { .. }) => cmd_spectrum(scenario),
        Some(SweepConfig::Compare { .. }) => cmd_compare(scenario),
        Some(SweepConfig::Sweep2d { .. }) => cmd_sweep2d(scenario),
        Some(SweepConfig::Tune { .. }) => cmd_tune(scenario),
        Some(SweepConfig::Oracle(_)) => cmd_oracle(scenario),
        None => Err(CommandError::MissingSweep("any")),
    }
}

/// T_R, T_L, R, ΔT and losses along a δ_k grid.
pub fn cmd_spectrum(scenario: &Scenario) -> Result<CommandOutput, CommandError> {
    scenario.validate()?;
    let Some(SweepConfig::Spectrum { grid }) = &scenario.sweep else {
        return Err(CommandError::MissingSweep("spectrum"));
    };
    let spec = scenario.emitter.spec()?;
    let mut table = ResultTable::new(&SPECTRUM_COLUMNS, meta("spectrum", scenario));
    for (d, res) in spectrum(&spec, &grid.points())? {
        let mut row = vec![Cell::Num(d)];
        row.extend(result_cells(&res));
        table.push(row);
    }
    Ok(CommandOutput { table, exit_code: EXIT_OK })
}

/// Λ emitter over a (Δ, Ω) grid at fixed δ_k, Δ-major.
pub fn cmd_sweep2d(scenario: &Scenario) -> Result<CommandOutput, CommandError> {
    scenario.validate()?;
    let Some(SweepConfig::Sweep2d { delta_k, delta_laser, omega }) = &scenario.sweep else {
        return Err(CommandError::MissingSweep("sweep2d"));
    };
    let rates = scenario.emitter.rates()?;
    let omegas = omega.points();
    let mut table = ResultTable::new(&SWEEP2D_COLUMNS, meta("sweep2d", scenario));
    for delta in delta_laser.points() {
        for &om in &omegas {
            let drive = LaserDrive::new(om, delta)?;
            let res = amplitudes_lambda(&rates, &drive, Detuning(*delta_k))?;
            table.push(vec![delta.into(), om.into(), res.trans_r.into(), res.trans_l.into(), res.delta_t.into()]);
        }
    }
    Ok(CommandOutput { table, exit_code: EXIT_OK })
}

fn plan_row(plan: &TunePlan, status: &str, note: &str) -> Vec<Cell> {
    let mode = match plan.target.mode {
        TuneMode::Block => "block",
        TuneMode::Pass => "pass",
    };
    let gap = match plan.feasibility {
        Feasibility::Feasible => Cell::Num(0.0),
        Feasibility::RequiresDecayMatch { gap } => Cell::Num(gap),
    };
    let blocked = match plan.blocked {
        Some(Blocked::FromLeft) => Cell::from("from-left"),
        Some(Blocked::FromRight) => Cell::from("from-right"),
        None => Cell::Empty,
    };
    let mut row = vec![
        mode.into(),
        status.into(),
        plan.target.delta_k_target.into(),
        plan.drive.delta_laser().into(),
        plan.drive.omega_rabi().into(),
        plan.required_gamma_a.into(),
        gap,
        blocked,
    ];
    row.extend(result_cells(&plan.predicted));
    row.push(note.into());
    row
}

fn status(plan: &TunePlan) -> &'static str {
    match plan.feasibility {
        Feasibility::Feasible => "feasible",
        Feasibility::RequiresDecayMatch { .. } => "requires-decay-match",
    }
}

/// Laser plan for a blocking or passing target. Infeasible or degenerate
/// targets become rows with exit code 2.
pub fn cmd_tune(scenario: &Scenario) -> Result<CommandOutput, CommandError> {
    scenario.validate()?;
    let Some(SweepConfig::Tune { mode, delta_k, omega }) = &scenario.sweep else {
        return Err(CommandError::MissingSweep("tune"));
    };
    let rates: CouplingRates = scenario.emitter.rates()?;
    let mut table = ResultTable::new(&TUNE_COLUMNS, meta("tune", scenario));
    let outcome = match mode {
        TuneMode::Block => tune_block(*delta_k, &rates, *omega),
        TuneMode::Pass => tune_pass(*delta_k, &rates, omega.unwrap_or(scenario.emitter.omega)),
    };
    let exit_code = match outcome {
        Ok(plan) => {
            table.push(plan_row(&plan, status(&plan), ""));
            EXIT_OK
        }
        Err(TuneError::DegenerateTarget { fallback }) => {
            table.push(plan_row(&fallback, "degenerate-target", "two-level fallback with the drive off"));
            EXIT_INFEASIBLE
        }
        Err(TuneError::Infeasible { reason }) => {
            let mode = if *mode == TuneMode::Block { "block" } else { "pass" };
            let mut row = vec![mode.into(), "infeasible".into(), (*delta_k).into()];
            row.resize(TUNE_COLUMNS.len() - 1, Cell::Empty);
            row.push(reason.into());
            table.push(row);
            EXIT_INFEASIBLE
        }
        Err(e) => return Err(e.into()),
    };
    Ok(CommandOutput { table, exit_code })
}

/// Wavepacket oracle against the closed form. A trailing `max_abs_error`
/// row holds the largest T and R discrepancies in the T_oracle and R_oracle
/// columns.
pub fn cmd_oracle(scenario: &Scenario) -> Result<CommandOutput, CommandError> {
    scenario.validate()?;
    let Some(SweepConfig::Oracle(cfg)) = &scenario.sweep else {
        return Err(CommandError::MissingSweep("oracle"));
    };
    let spec: EmitterSpec = scenario.emitter.spec()?;
    let grid = cfg.grid()?;
    let settings = cfg.settings();
    let mut table = ResultTable::new(&ORACLE_COLUMNS, meta("oracle", scenario));
    let mut pass = true;
    let (mut max_t, mut max_r, mut all_converged) = (0.0f64, 0.0f64, true);
    for direction in cfg.directions.directions() {
        let report = compare_to_analytic(&spec, &cfg.carriers, &cfg.wavepacket(direction), &grid, &settings, cfg.tolerance)?;
        pass &= report.pass;
        max_t = max_t.max(report.max_t_error);
        max_r = max_r.max(report.max_r_error);
        for row in &report.rows {
            all_converged &= row.converged;
            let direction = match row.direction {
                crate::oracle::Direction::FromLeft => "from-left",
                crate::oracle::Direction::FromRight => "from-right",
            };
            table.push(vec![
                row.carrier.into(),
                direction.into(),
                row.t_oracle.into(),
                row.t_analytic.into(),
                row.r_oracle.into(),
                row.r_analytic.into(),
                row.loss.into(),
                row.converged.into(),
            ]);
        }
    }
    if !table.rows.is_empty() {
        table.push(vec![
            "max_abs_error".into(),
            Cell::Empty,
            max_t.into(),
            Cell::Empty,
            max_r.into(),
            Cell::Empty,
            Cell::Empty,
            all_converged.into(),
        ]);
    }
    let exit_code = if pass { EXIT_OK } else { EXIT_TOLERANCE };
    Ok(CommandOutput { table, exit_code })
}

/// Closed-form ΔT against |T_R − T_L| from the amplitudes.
pub fn cmd_compare(scenario: &Scenario) -> Result<CommandOutput, CommandError> {
    scenario.validate()?;
    let Some(SweepConfig::Compare { grid }) = &scenario.sweep else {
        return Err(CommandError::MissingSweep("compare"));
    };
    let spec = scenario.emitter.spec()?;
    let mut table = ResultTable::new(&COMPARE_COLUMNS, meta("compare", scenario));
    let mut ok = true;
    for d in grid.points() {
        let amplitude = scatter(&spec, Detuning(d))?.delta_t;
        match delta_t_closed_form(&spec, Detuning(d)) {
            Ok(closed) => {
                let diff = (closed - amplitude).abs();
                ok &= diff <= CROSS_FORMULA_EQ;
                table.push(vec![d.into(), amplitude.into(), closed.into(), diff.into(), true.into()]);
            }
            Err(ScatteringError::NotApplicable { .. }) => {
                table.push(vec![d.into(), amplitude.into(), Cell::Empty, Cell::Empty, false.into()]);
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(CommandOutput { table, exit_code: if ok { EXIT_OK } else { EXIT_TOLERANCE } })
}
