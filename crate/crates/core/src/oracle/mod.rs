//! Wavepacket scattering oracle.
//!
//! Evolves a single-photon Gaussian wavepacket through the emitter by direct
//! time integration of the single-excitation Schrödinger equation, with the
//! non-Hermitian −iγ/2 terms for losses, and reads transmission and
//! reflection off the final populations of the forward and backward modes.
//! It shares no code with the closed-form amplitudes and is used to validate
//! them.

pub mod compare;
mod dynamics;
mod evolve;
mod grid;

use serde::Serialize;
use thiserror::Error;

pub use compare::{compare_to_analytic, DiscrepancyReport, DiscrepancyRow};
pub use dynamics::{build_dynamics, Dynamics, OracleState};
pub use evolve::{evolve, EvolveOptions, Trajectory, MAX_STEP_GROWTH, STABILITY_FACTOR};
pub use grid::{Direction, ModeGrid, WavepacketSpec, MIN_MODES};

use crate::model::EmitterSpec;

/// Largest (T, R) shift between a run and its refined counterpart for the
/// run to count as converged.
pub const CONVERGENCE_TOL: f64 = 5e-3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("invalid mode grid: {0}")]
    InvalidGrid(String),
    #[error("invalid wavepacket: {0}")]
    InvalidWavepacket(String),
    #[error("grid too coarse: emitter half-linewidth {linewidth} < 3 × spacing {spacing}")]
    GridTooCoarse { linewidth: f64, spacing: f64 },
    #[error("quantization box too short: need {required:.1}, have {available:.1}")]
    BoxTooShort { required: f64, available: f64 },
    #[error("time step {dt} exceeds stability limit {limit}")]
    StepTooLarge { dt: f64, limit: f64 },
    #[error("step rejected at t = {time}: norm grew by {growth:e}")]
    StepRejected { time: f64, growth: f64 },
    #[error("not converged: coarse (T={:.4}, R={:.4}) vs refined (T={:.4}, R={:.4})", coarse.t, coarse.r, fine.t, fine.r)]
    NotConverged { coarse: Box<OracleResult>, fine: Box<OracleResult> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult {
    /// Population in the forward direction at the final time.
    pub t: f64,
    /// Population in the backward direction at the final time.
    pub r: f64,
    pub loss: f64,
    /// (time, total norm) samples.
    pub norm_history: Vec<(f64, f64)>,
    pub converged: bool,
    pub n_modes: usize,
    pub dt: f64,
    pub t_end: f64,
}

/// Numerical settings shared by every run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleSettings {
    /// Requested time step; clipped to the stability limit of each run.
    pub dt: f64,
    /// Emitter lifetimes (of its slowest eigenmode) to wait after the packet has passed.
    pub decay_lifetimes: f64,
    pub sample_every: usize,
}

impl Default for OracleSettings {
    fn default() -> Self {
        Self { dt: 0.01, decay_lifetimes: 10.0, sample_every: 200 }
    }
}

/// Default grid: 512 modes per direction over ±5 Γ_R around the carrier.
pub fn default_grid() -> ModeGrid {
    ModeGrid::new(512, 5.0).expect("default grid is valid")
}

/// Time needed for the packet to pass and the emitter to relax.
fn end_time(dynamics: &Dynamics, wp: &WavepacketSpec, settings: &OracleSettings) -> f64 {
    let slowest = dynamics.emitter_decay_rates()[0];
    2.0 * wp.launch_distance() + settings.decay_lifetimes / slowest
}

/// One run at fixed resolution; `converged` is left false.
pub fn simulate(
    spec: &EmitterSpec,
    wp: &WavepacketSpec,
    grid: &ModeGrid,
    settings: &OracleSettings,
) -> Result<OracleResult, OracleError> {
    let dynamics = build_dynamics(spec, grid, wp)?;
    let t_end = end_time(&dynamics, wp, settings);
    // The leading edge must not wrap around the periodic box back onto the emitter.
    let required = t_end + (wp.launch_offset + 1.0) * wp.spatial_width() - wp.launch_distance();
    if required > grid.box_length() {
        return Err(OracleError::BoxTooShort { required, available: grid.box_length() });
    }
    let dt = settings.dt.min(STABILITY_FACTOR / dynamics.max_rate());

    let mut initial = OracleState::vacuum(grid.n_modes());
    match wp.direction {
        Direction::FromLeft => initial.c_r = wp.amplitudes(grid),
        Direction::FromRight => initial.c_l = wp.amplitudes(grid),
    }
    let opts = EvolveOptions { dt, t_end, sample_every: settings.sample_every, keep_states: false };
    let traj = evolve(initial, &dynamics, &opts)?;

    let (forward, backward) = match wp.direction {
        Direction::FromLeft => (traj.final_state.population_r(), traj.final_state.population_l()),
        Direction::FromRight => (traj.final_state.population_l(), traj.final_state.population_r()),
    };
    Ok(OracleResult {
        t: forward,
        r: backward,
        loss: 1.0 - forward - backward,
        norm_history: traj.times.into_iter().zip(traj.norms).collect(),
        converged: false,
        n_modes: grid.n_modes(),
        dt,
        t_end: traj.final_time,
    })
}

/// Runs at the given resolution and again with half the step and twice the
/// modes. Returns the refined run when (T, R) moved by less than
/// [`CONVERGENCE_TOL`].
pub fn scatter_wavepacket(
    spec: &EmitterSpec,
    wp: &WavepacketSpec,
    grid: &ModeGrid,
    settings: &OracleSettings,
) -> Result<OracleResult, OracleError> {
    let coarse = simulate(spec, wp, grid, settings)?;
    let refined_settings = OracleSettings { dt: coarse.dt / 2.0, ..*settings };
    let mut fine = simulate(spec, wp, &grid.refined(), &refined_settings)?;
    let shift = (coarse.t - fine.t).abs().max((coarse.r - fine.r).abs());
    if shift < CONVERGENCE_TOL {
        fine.converged = true;
        Ok(fine)
    } else {
        Err(OracleError::NotConverged { coarse: Box::new(coarse), fine: Box::new(fine) })
    }
}
