//! Laser settings that put the device into blocking (diode) or passing (EIT)
//! mode at a prescribed photon detuning.
//!
//! Blocking requires the photon to hit a dressed-state resonance,
//! δ_k² − Δδ_k − Ω² = 0, together with the decay match γ_a = Γ_R − Γ_L. The
//! loss γ_a is fixed by the emitter's environment, so the tuner only reports
//! how far the supplied rates are from the match. Passing only needs Δ = δ_k.

use serde::Serialize;
use thiserror::Error;

use crate::model::{CouplingRates, Detuning, LaserDrive, ModelError};
use crate::scattering::{amplitudes_lambda, ScatteringError, ScatteringResult};

/// Largest acceptable |γ_a − (Γ_R − Γ_L)| for a plan to count as matched.
pub const DECAY_MATCH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TuneError {
    #[error("degenerate target δ_k = 0: only Ω = 0 solves the resonance condition")]
    DegenerateTarget { fallback: Box<TunePlan> },
    #[error("infeasible: {reason}")]
    Infeasible { reason: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Scattering(#[from] ScatteringError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TuneMode {
    Block,
    Pass,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TuneTarget {
    pub delta_k_target: f64,
    pub mode: TuneMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Feasibility {
    Feasible,
    RequiresDecayMatch { gap: f64 },
}

/// Injection side that a blocking plan suppresses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Blocked {
    /// Photons injected from the left (right-moving) are absorbed.
    FromLeft,
    /// Photons injected from the right (left-moving) are absorbed.
    FromRight,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TunePlan {
    pub target: TuneTarget,
    pub drive: LaserDrive,
    pub required_gamma_a: Option<f64>,
    pub predicted: ScatteringResult,
    pub feasibility: Feasibility,
    pub blocked: Option<Blocked>,
}

/// Dressed-state structure of the driven |a⟩, |c⟩ pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DressedStates {
    /// Frequency offset of |+⟩ from ω_a, −(Δ − √(Δ²+4Ω²))/2.
    pub freq_plus: f64,
    /// Frequency offset of |−⟩ from ω_a, −(Δ + √(Δ²+4Ω²))/2.
    pub freq_minus: f64,
    /// Larger photon detuning in resonance with a dressed state.
    pub root_plus: f64,
    pub root_minus: f64,
}

impl DressedStates {
    pub fn roots(&self) -> [f64; 2] {
        [self.root_plus, self.root_minus]
    }
}

/// Resonant detunings (Δ ± √(Δ²+4Ω²))/2 of the dressed transitions.
pub fn dressed_states(drive: &LaserDrive) -> DressedStates {
    let delta = drive.delta_laser();
    let omega = drive.omega_rabi();
    let disc = delta.hypot(2.0 * omega);
    // Product of the roots is −Ω²; take the small one from it to avoid cancellation.
    let (root_plus, root_minus) = if delta >= 0.0 {
        let big = (delta + disc) / 2.0;
        let small = if big == 0.0 { 0.0 } else { -omega * omega / big };
        (big, small)
    } else {
        let big = (delta - disc) / 2.0;
        (-omega * omega / big, big)
    };
    DressedStates { freq_plus: -root_minus, freq_minus: -root_plus, root_plus, root_minus }
}

fn blocked_side(rates: &CouplingRates) -> Blocked {
    if rates.mirrored() {
        Blocked::FromRight
    } else {
        Blocked::FromLeft
    }
}

fn ensure_target(delta_k: f64) -> Result<(), TuneError> {
    if delta_k.is_finite() {
        Ok(())
    } else {
        Err(TuneError::Infeasible { reason: format!("target detuning {delta_k} is not finite") })
    }
}

fn block_plan(delta_k: f64, rates: &CouplingRates, drive: LaserDrive) -> Result<TunePlan, TuneError> {
    let predicted = amplitudes_lambda(rates, &drive, Detuning(delta_k))?;
    let required = rates.decay_match();
    let gap = (rates.gamma_a() - required).abs();
    let feasibility = if gap > DECAY_MATCH_TOL {
        Feasibility::RequiresDecayMatch { gap }
    } else {
        Feasibility::Feasible
    };
    Ok(TunePlan {
        target: TuneTarget { delta_k_target: delta_k, mode: TuneMode::Block },
        drive,
        required_gamma_a: Some(required),
        predicted,
        feasibility,
        blocked: Some(blocked_side(rates)),
    })
}

fn check_chiral(rates: &CouplingRates) -> Result<(), TuneError> {
    if rates.gamma_r() == rates.gamma_l() {
        return Err(TuneError::Infeasible {
            reason: "symmetric coupling (C = 0) cannot be nonreciprocal".into(),
        });
    }
    Ok(())
}

fn degenerate(rates: &CouplingRates) -> Result<TunePlan, TuneError> {
    let fallback = block_plan(0.0, rates, LaserDrive::new(0.0, 0.0)?)?;
    Err(TuneError::DegenerateTarget { fallback: Box::new(fallback) })
}

/// Drive that blocks the strongly coupled direction at `delta_k`.
///
/// With `omega_choice = Some(Ω)` the laser detuning is Δ = δ_k − Ω²/δ_k.
/// Without it the canonical solution Δ = 0, Ω = |δ_k| is used.
pub fn tune_block(
    delta_k: f64,
    rates: &CouplingRates,
    omega_choice: Option<f64>,
) -> Result<TunePlan, TuneError> {
    ensure_target(delta_k)?;
    check_chiral(rates)?;
    if delta_k == 0.0 {
        return degenerate(rates);
    }
    let drive = match omega_choice {
        Some(omega) => LaserDrive::new(omega, delta_k - omega * omega / delta_k)?,
        None => LaserDrive::new(delta_k.abs(), 0.0)?,
    };
    block_plan(delta_k, rates, drive)
}

/// Blocking drive with the laser detuning pinned; Ω² = δ_k(δ_k − Δ) must be
/// non-negative.
pub fn tune_block_with_detuning(
    delta_k: f64,
    rates: &CouplingRates,
    delta_laser: f64,
) -> Result<TunePlan, TuneError> {
    ensure_target(delta_k)?;
    check_chiral(rates)?;
    if delta_k == 0.0 {
        return degenerate(rates);
    }
    let omega2 = delta_k * (delta_k - delta_laser);
    if omega2 < 0.0 {
        return Err(TuneError::Infeasible { reason: "no real Rabi frequency".into() });
    }
    block_plan(delta_k, rates, LaserDrive::new(omega2.sqrt(), delta_laser)?)
}

/// EIT drive Δ = δ_k: transparent in both directions for any γ_a.
pub fn tune_pass(delta_k: f64, rates: &CouplingRates, omega: f64) -> Result<TunePlan, TuneError> {
    ensure_target(delta_k)?;
    if !(omega > 0.0) {
        return Err(TuneError::Model(ModelError::InvalidDrive { name: "omega_rabi", value: omega }));
    }
    let drive = LaserDrive::new(omega, delta_k)?;
    let predicted = amplitudes_lambda(rates, &drive, Detuning(delta_k))?;
    Ok(TunePlan {
        target: TuneTarget { delta_k_target: delta_k, mode: TuneMode::Pass },
        drive,
        required_gamma_a: None,
        predicted,
        feasibility: Feasibility::Feasible,
        blocked: None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SwitchPlan {
    pub pass: TunePlan,
    pub block: TunePlan,
}

/// Pass and block settings for the same photon detuning, sharing one Rabi
/// frequency so the switch is toggled by the laser detuning alone.
///
/// `omega_choice = None` uses the canonical blocking drive (Ω = |δ_k|, Δ = 0).
pub fn switch_plan(
    delta_k: f64,
    rates: &CouplingRates,
    omega_choice: Option<f64>,
) -> Result<SwitchPlan, TuneError> {
    let block = tune_block(delta_k, rates, omega_choice)?;
    let pass = tune_pass(delta_k, rates, block.drive.omega_rabi())?;
    Ok(SwitchPlan { pass, block })
}
