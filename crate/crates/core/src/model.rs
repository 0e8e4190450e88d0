//! Physical parameters of the waveguide/emitter system.
//!
//! Every rate and detuning is a plain `f64` in units of the right-going
//! waveguide decay rate Γ_R (ħ = 1, v_g = 1). Absolute level frequencies never
//! enter: the photon is described by its detuning from the |b⟩↔|a⟩
//! transition, δ_k = ω_ab − |k|, and the drive by Δ = ω_ac − ω_L.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("rate `{name}` must be finite and non-negative, got {value}")]
    InvalidRate { name: &'static str, value: f64 },
    #[error("at least one waveguide rate must be strictly positive")]
    NoWaveguideCoupling,
    #[error("drive parameter `{name}` is invalid: {value}")]
    InvalidDrive { name: &'static str, value: f64 },
}

/// Decay and coupling rates of the emitter.
///
/// Stored in the orientation where `gamma_r >= gamma_l`. If the caller
/// describes the opposite orientation the two waveguide rates are swapped and
/// [`CouplingRates::mirrored`] is set; scattering results are mapped back to
/// the physical orientation before they are returned.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CouplingRates {
    gamma_r: f64,
    gamma_l: f64,
    gamma_a: f64,
    gamma_c: f64,
    mirrored: bool,
}

fn check_rate(name: &'static str, value: f64) -> Result<f64, ModelError> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(ModelError::InvalidRate { name, value })
    }
}

impl CouplingRates {
    pub fn new(gamma_r: f64, gamma_l: f64, gamma_a: f64, gamma_c: f64) -> Result<Self, ModelError> {
        let gamma_r = check_rate("gamma_r", gamma_r)?;
        let gamma_l = check_rate("gamma_l", gamma_l)?;
        let gamma_a = check_rate("gamma_a", gamma_a)?;
        let gamma_c = check_rate("gamma_c", gamma_c)?;
        let mirrored = gamma_l > gamma_r;
        let (gamma_r, gamma_l) = if mirrored { (gamma_l, gamma_r) } else { (gamma_r, gamma_l) };
        if gamma_r <= 0.0 {
            return Err(ModelError::NoWaveguideCoupling);
        }
        Ok(Self { gamma_r, gamma_l, gamma_a, gamma_c, mirrored })
    }

    /// Rates with Γ_R = 1 and no metastable-state loss.
    pub fn normalized(gamma_l: f64, gamma_a: f64) -> Result<Self, ModelError> {
        Self::new(1.0, gamma_l, gamma_a, 0.0)
    }

    pub fn with_gamma_a(self, gamma_a: f64) -> Result<Self, ModelError> {
        let (r, l) = self.physical();
        Self::new(r, l, gamma_a, self.gamma_c)
    }

    pub fn with_gamma_c(self, gamma_c: f64) -> Result<Self, ModelError> {
        let (r, l) = self.physical();
        Self::new(r, l, self.gamma_a, gamma_c)
    }

    /// The larger waveguide rate.
    pub fn gamma_r(&self) -> f64 {
        self.gamma_r
    }

    /// The smaller waveguide rate.
    pub fn gamma_l(&self) -> f64 {
        self.gamma_l
    }

    pub fn gamma_a(&self) -> f64 {
        self.gamma_a
    }

    pub fn gamma_c(&self) -> f64 {
        self.gamma_c
    }

    /// True when the caller's Γ_L exceeded Γ_R and the rates were swapped.
    pub fn mirrored(&self) -> bool {
        self.mirrored
    }

    /// (Γ_R, Γ_L) as the caller described them.
    pub fn physical(&self) -> (f64, f64) {
        if self.mirrored {
            (self.gamma_l, self.gamma_r)
        } else {
            (self.gamma_r, self.gamma_l)
        }
    }

    /// Γ_R + Γ_L.
    pub fn waveguide_total(&self) -> f64 {
        self.gamma_r + self.gamma_l
    }

    /// γ_a + Γ_R + Γ_L, the population decay rate of |a⟩.
    pub fn total_decay(&self) -> f64 {
        self.gamma_a + self.gamma_r + self.gamma_l
    }

    /// Γ_R − Γ_L in the normalized orientation; the loss γ_a that achieves
    /// critical coupling.
    pub fn decay_match(&self) -> f64 {
        self.gamma_r - self.gamma_l
    }

    /// The same rates with the physical orientation reversed.
    pub fn swapped(&self) -> Self {
        Self { mirrored: !self.mirrored && self.gamma_l != self.gamma_r, ..*self }
    }
}

/// Classical drive on the |c⟩↔|a⟩ transition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LaserDrive {
    omega_rabi: f64,
    delta_laser: f64,
}

impl LaserDrive {
    pub fn new(omega_rabi: f64, delta_laser: f64) -> Result<Self, ModelError> {
        if !(omega_rabi.is_finite() && omega_rabi >= 0.0) {
            return Err(ModelError::InvalidDrive { name: "omega_rabi", value: omega_rabi });
        }
        if !delta_laser.is_finite() {
            return Err(ModelError::InvalidDrive { name: "delta_laser", value: delta_laser });
        }
        Ok(Self { omega_rabi, delta_laser })
    }

    /// Rabi frequency Ω.
    pub fn omega_rabi(&self) -> f64 {
        self.omega_rabi
    }

    /// Laser detuning Δ = ω_ac − ω_L.
    pub fn delta_laser(&self) -> f64 {
        self.delta_laser
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EmitterSpec {
    TwoLevel { rates: CouplingRates },
    Lambda { rates: CouplingRates, drive: LaserDrive },
}

impl EmitterSpec {
    pub fn two_level(rates: CouplingRates) -> Self {
        EmitterSpec::TwoLevel { rates }
    }

    pub fn lambda(rates: CouplingRates, drive: LaserDrive) -> Self {
        EmitterSpec::Lambda { rates, drive }
    }

    pub fn rates(&self) -> &CouplingRates {
        match self {
            EmitterSpec::TwoLevel { rates } | EmitterSpec::Lambda { rates, .. } => rates,
        }
    }

    pub fn drive(&self) -> Option<&LaserDrive> {
        match self {
            EmitterSpec::TwoLevel { .. } => None,
            EmitterSpec::Lambda { drive, .. } => Some(drive),
        }
    }

    /// Same emitter with Γ_R and Γ_L exchanged.
    pub fn swapped(&self) -> Self {
        match *self {
            EmitterSpec::TwoLevel { rates } => EmitterSpec::TwoLevel { rates: rates.swapped() },
            EmitterSpec::Lambda { rates, drive } => EmitterSpec::Lambda { rates: rates.swapped(), drive },
        }
    }
}

/// Photon detuning δ_k = ω_ab − v_g|k|.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Detuning(pub f64);

impl Detuning {
    pub fn delta_k(self) -> f64 {
        self.0
    }

    /// Δ_k = Δ − δ_k, the two-photon detuning for a given drive.
    pub fn two_photon(self, drive: &LaserDrive) -> f64 {
        drive.delta_laser() - self.0
    }
}

impl From<f64> for Detuning {
    fn from(v: f64) -> Self {
        Detuning(v)
    }
}

/// Chirality C = |Γ_R − Γ_L| / (Γ_R + Γ_L).
pub fn chirality(rates: &CouplingRates) -> f64 {
    (rates.gamma_r() - rates.gamma_l()).abs() / rates.waveguide_total()
}
