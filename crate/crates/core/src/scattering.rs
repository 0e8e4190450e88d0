//! Closed-form single-photon scattering amplitudes.
//!
//! All evaluation happens in the normalized orientation (Γ_R ≥ Γ_L); when the
//! rates were mirrored at construction the transmission amplitudes are
//! swapped back before returning, so results always refer to the caller's
//! physical orientation. `t_r` is the amplitude for a photon injected from the
//! left (right-moving), `t_l` for one injected from the right.

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::model::{chirality, CouplingRates, Detuning, EmitterSpec, LaserDrive};

/// Threshold on |D| below which the Λ denominator is treated as zero.
pub const DEGENERATE_DENOMINATOR: f64 = 1e-14;
/// Tolerance for cross-checking two algebraic routes to the same quantity.
pub const CROSS_FORMULA_EQ: f64 = 1e-10;
/// Probabilities this far outside [0, 1] are rounding and get clamped.
pub const PROBABILITY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScatteringError {
    #[error("non-finite {what}: {value}")]
    NonFinite { what: &'static str, value: f64 },
    #[error("degenerate denominator |D| = {magnitude:e}")]
    DegenerateDenominator { magnitude: f64 },
    #[error("closed form not applicable: {reason}")]
    NotApplicable { reason: &'static str },
    #[error("internal consistency violation: {what} = {value}")]
    Inconsistent { what: &'static str, value: f64 },
    #[error("grid must be strictly increasing (index {index})")]
    GridNotIncreasing { index: usize },
    #[error("grid point {index}: {source}")]
    AtIndex {
        index: usize,
        #[source]
        source: Box<ScatteringError>,
    },
}

/// Amplitudes and derived probabilities at one photon detuning.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScatteringResult {
    pub t_r: Complex64,
    pub t_l: Complex64,
    /// Shared reflection amplitude, r_R = r_L.
    pub r: Complex64,
    pub trans_r: f64,
    pub trans_l: f64,
    pub refl: f64,
    pub delta_t: f64,
    pub loss_r: f64,
    pub loss_l: f64,
}

fn probability(what: &'static str, p: f64) -> Result<f64, ScatteringError> {
    if !p.is_finite() {
        return Err(ScatteringError::NonFinite { what, value: p });
    }
    if !(-PROBABILITY_SLACK..=1.0 + PROBABILITY_SLACK).contains(&p) {
        return Err(ScatteringError::Inconsistent { what, value: p });
    }
    Ok(p.clamp(0.0, 1.0))
}

impl ScatteringResult {
    fn from_amplitudes(
        t_r: Complex64,
        t_l: Complex64,
        r: Complex64,
        mirrored: bool,
    ) -> Result<Self, ScatteringError> {
        let (t_r, t_l) = if mirrored { (t_l, t_r) } else { (t_r, t_l) };
        let trans_r = probability("T_R", t_r.norm_sqr())?;
        let trans_l = probability("T_L", t_l.norm_sqr())?;
        let refl = probability("R", r.norm_sqr())?;
        let loss_r = probability("loss_R", 1.0 - trans_r - refl)?;
        let loss_l = probability("loss_L", 1.0 - trans_l - refl)?;
        Ok(Self {
            t_r,
            t_l,
            r,
            trans_r,
            trans_l,
            refl,
            delta_t: (trans_r - trans_l).abs(),
            loss_r,
            loss_l,
        })
    }
}

fn finite(what: &'static str, v: f64) -> Result<f64, ScatteringError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ScatteringError::NonFinite { what, value: v })
    }
}

fn i(x: f64) -> Complex64 {
    Complex64::new(0.0, x)
}

/// Two-level emitter amplitudes.
pub fn amplitudes_two_level(
    rates: &CouplingRates,
    delta_k: Detuning,
) -> Result<ScatteringResult, ScatteringError> {
    let d = finite("delta_k", delta_k.delta_k())?;
    let (gr, gl, ga) = (rates.gamma_r(), rates.gamma_l(), rates.gamma_a());
    let denom = Complex64::new(d, -ga / 2.0 - (gr + gl) / 2.0);
    let num_r = Complex64::new(d, -ga / 2.0 + (gr - gl) / 2.0);
    let num_l = Complex64::new(d, -ga / 2.0 + (gl - gr) / 2.0);
    let t_r = num_r / denom;
    let t_l = num_l / denom;
    let r = i((gr * gl).sqrt()) / denom;
    ScatteringResult::from_amplitudes(t_r, t_l, r, rates.mirrored())
}

/// Λ-type emitter amplitudes, including the metastable-state loss γ_c through
/// Δ_k → Δ_k + iγ_c/2. A drive with Ω = 0 is evaluated with the two-level
/// formulas, which is the exact cancellation of the common Δ_k factor.
pub fn amplitudes_lambda(
    rates: &CouplingRates,
    drive: &LaserDrive,
    delta_k: Detuning,
) -> Result<ScatteringResult, ScatteringError> {
    let d = finite("delta_k", delta_k.delta_k())?;
    if drive.omega_rabi() == 0.0 {
        return amplitudes_two_level(rates, delta_k);
    }
    let (gr, gl, ga) = (rates.gamma_r(), rates.gamma_l(), rates.gamma_a());
    let omega2 = drive.omega_rabi() * drive.omega_rabi();
    let two_photon = Complex64::new(delta_k.two_photon(drive), rates.gamma_c() / 2.0);

    let denom = two_photon * Complex64::new(d, -ga / 2.0 - (gr + gl) / 2.0) + omega2;
    if denom.norm() < DEGENERATE_DENOMINATOR {
        return Err(ScatteringError::DegenerateDenominator { magnitude: denom.norm() });
    }
    let num_r = two_photon * Complex64::new(d, -ga / 2.0 + (gr - gl) / 2.0) + omega2;
    let num_l = two_photon * Complex64::new(d, -ga / 2.0 + (gl - gr) / 2.0) + omega2;
    let t_r = num_r / denom;
    let t_l = num_l / denom;
    let r = i((gr * gl).sqrt()) * two_photon / denom;
    ScatteringResult::from_amplitudes(t_r, t_l, r, rates.mirrored())
}

/// Dispatches on the emitter variant.
pub fn scatter(spec: &EmitterSpec, delta_k: Detuning) -> Result<ScatteringResult, ScatteringError> {
    match spec {
        EmitterSpec::TwoLevel { rates } => amplitudes_two_level(rates, delta_k),
        EmitterSpec::Lambda { rates, drive } => amplitudes_lambda(rates, drive, delta_k),
    }
}

/// Diode contrast |T_R − T_L| from its closed form.
///
/// Two-level: γ_a(Γ_R−Γ_L) / (δ_k² + ((γ_a+Γ_R+Γ_L)/2)²). The Λ form replaces
/// δ_k² by (Δ_kδ_k+Ω²)²/Δ_k² and is only defined for Δ_k ≠ 0 and γ_c = 0.
pub fn delta_t_closed_form(spec: &EmitterSpec, delta_k: Detuning) -> Result<f64, ScatteringError> {
    let d = finite("delta_k", delta_k.delta_k())?;
    let rates = spec.rates();
    let numerator = rates.gamma_a() * rates.decay_match();
    let half_width = rates.total_decay() / 2.0;
    let detuning_term = match spec.drive() {
        Some(drive) if drive.omega_rabi() != 0.0 => {
            if rates.gamma_c() != 0.0 {
                return Err(ScatteringError::NotApplicable { reason: "gamma_c must be zero" });
            }
            let two_photon = delta_k.two_photon(drive);
            if two_photon == 0.0 {
                return Err(ScatteringError::NotApplicable {
                    reason: "singular at the EIT point (Delta_k = 0)",
                });
            }
            let shifted = two_photon * d + drive.omega_rabi() * drive.omega_rabi();
            shifted * shifted / (two_photon * two_photon)
        }
        _ => d * d,
    };
    finite("delta_T", numerator / (detuning_term + half_width * half_width))
}

/// Peak reflection for γ_a = 0, reached on resonance: 1 − C² = 4Γ_RΓ_L/(Γ_R+Γ_L)².
pub fn max_reflection(rates: &CouplingRates) -> f64 {
    let c = chirality(rates);
    let sum = rates.waveguide_total();
    let direct = 4.0 * rates.gamma_r() * rates.gamma_l() / (sum * sum);
    debug_assert!((direct - (1.0 - c * c)).abs() < 1e-12);
    direct
}

/// Evaluates `spec` at every point of a strictly increasing grid.
pub fn spectrum(
    spec: &EmitterSpec,
    grid: &[f64],
) -> Result<Vec<(f64, ScatteringResult)>, ScatteringError> {
    for (index, pair) in grid.windows(2).enumerate() {
        if !(pair[1] > pair[0]) {
            return Err(ScatteringError::GridNotIncreasing { index: index + 1 });
        }
    }
    grid.iter()
        .enumerate()
        .map(|(index, &d)| {
            scatter(spec, Detuning(d))
                .map(|res| (d, res))
                .map_err(|e| ScatteringError::AtIndex { index, source: Box::new(e) })
        })
        .collect()
}
