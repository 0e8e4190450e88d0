use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::OracleError;

/// Smallest mode count accepted per direction.
pub const MIN_MODES: usize = 64;

/// Uniform grid of photon detunings, centered on the frame detuning.
///
/// The mode spacing dδ fixes the periodic quantization length
/// L = 2π/dδ (v_g = 1): a packet that travels further than L re-enters the
/// interaction region, which bounds the usable simulation time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeGrid {
    n_modes: usize,
    span: f64,
}

impl ModeGrid {
    pub fn new(n_modes: usize, span: f64) -> Result<Self, OracleError> {
        if n_modes < MIN_MODES {
            return Err(OracleError::InvalidGrid(format!("need at least {MIN_MODES} modes, got {n_modes}")));
        }
        if !(span.is_finite() && span > 0.0) {
            return Err(OracleError::InvalidGrid(format!("span must be positive, got {span}")));
        }
        Ok(Self { n_modes, span })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// Half-width of the detuning band.
    pub fn span(&self) -> f64 {
        self.span
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.span / (self.n_modes - 1) as f64
    }

    pub fn box_length(&self) -> f64 {
        2.0 * PI / self.spacing()
    }

    /// Mode offsets from the band center, ascending.
    pub fn offsets(&self) -> Vec<f64> {
        let dd = self.spacing();
        (0..self.n_modes).map(|j| -self.span + j as f64 * dd).collect()
    }

    /// Same band with the spacing halved; every existing mode is kept.
    pub fn refined(&self) -> Self {
        Self { n_modes: 2 * self.n_modes - 1, span: self.span }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// Injected from the left, moving right.
    FromLeft,
    /// Injected from the right, moving left.
    FromRight,
}

impl Direction {
    pub fn reversed(self) -> Self {
        match self {
            Direction::FromLeft => Direction::FromRight,
            Direction::FromRight => Direction::FromLeft,
        }
    }
}

/// Gaussian single-photon wavepacket.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WavepacketSpec {
    /// Central photon detuning δ_k.
    pub carrier: f64,
    /// Standard deviation of |φ(δ)|².
    pub sigma_k: f64,
    /// Initial distance from the emitter, in spatial standard deviations
    /// 1/(2σ_k).
    pub launch_offset: f64,
    pub direction: Direction,
}

impl WavepacketSpec {
    pub fn new(carrier: f64, sigma_k: f64, direction: Direction) -> Self {
        Self { carrier, sigma_k, launch_offset: 5.0, direction }
    }

    pub fn with_carrier(self, carrier: f64) -> Self {
        Self { carrier, ..self }
    }

    pub fn with_direction(self, direction: Direction) -> Self {
        Self { direction, ..self }
    }

    /// Spatial standard deviation of |ψ(x)|².
    pub fn spatial_width(&self) -> f64 {
        1.0 / (2.0 * self.sigma_k)
    }

    pub fn launch_distance(&self) -> f64 {
        self.launch_offset * self.spatial_width()
    }

    pub(crate) fn validate(&self, grid: &ModeGrid) -> Result<(), OracleError> {
        let bad = |reason: String| Err(OracleError::InvalidWavepacket(reason));
        if !self.carrier.is_finite() {
            return bad(format!("carrier {} is not finite", self.carrier));
        }
        if !(self.sigma_k.is_finite() && self.sigma_k > 0.0) {
            return bad(format!("sigma_k must be positive, got {}", self.sigma_k));
        }
        if self.sigma_k > grid.span() / 6.0 {
            return bad(format!("sigma_k {} exceeds span/6 = {}", self.sigma_k, grid.span() / 6.0));
        }
        if !(self.launch_offset.is_finite() && self.launch_offset >= 3.0) {
            return bad(format!("launch_offset must be at least 3, got {}", self.launch_offset));
        }
        Ok(())
    }

    /// Normalized mode amplitudes φ(x_j) e^{−i x_j D} on the grid, placing the
    /// envelope a distance D upstream of the emitter.
    pub(crate) fn amplitudes(&self, grid: &ModeGrid) -> Vec<Complex64> {
        let distance = self.launch_distance();
        let var4 = 4.0 * self.sigma_k * self.sigma_k;
        let mut amps: Vec<Complex64> = grid
            .offsets()
            .into_iter()
            .map(|x| Complex64::from_polar((-x * x / var4).exp(), -x * distance))
            .collect();
        let norm = amps.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|c| *c /= norm);
        amps
    }
}
