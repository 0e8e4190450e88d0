//! Single-excitation equations of motion in momentum space.
//!
//! Frame: energies are measured from ω_a and then shifted by the carrier
//! photon energy, so a waveguide mode with detuning δ_j = δ_c + x_j has
//! energy −x_j, |a⟩ has δ_c − iγ_a/2 and |c⟩ has δ_c − Δ − iγ_c/2. Only
//! detunings survive; the absolute level frequencies cancel. With
//! ḡ = √(Γ dδ / 2π) the discrete modes reproduce the Markovian decay rate Γ
//! into each direction.
//!
//!   i dc_Rj/dt = −x_j c_Rj + ḡ_R β_a
//!   i dc_Lj/dt = −x_j c_Lj + ḡ_L β_a
//!   i dβ_a/dt  = e_a β_a + ḡ_R Σ c_R + ḡ_L Σ c_L + Ω β_c
//!   i dβ_c/dt  = e_c β_c + Ω β_a

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{ModeGrid, OracleError, WavepacketSpec};
use crate::model::EmitterSpec;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Single-excitation amplitudes: waveguide modes plus the two excited levels.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleState {
    pub c_r: Vec<Complex64>,
    pub c_l: Vec<Complex64>,
    pub beta_a: Complex64,
    pub beta_c: Complex64,
}

impl OracleState {
    pub fn vacuum(n_modes: usize) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        Self { c_r: vec![zero; n_modes], c_l: vec![zero; n_modes], beta_a: zero, beta_c: zero }
    }

    pub fn population_r(&self) -> f64 {
        self.c_r.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn population_l(&self) -> f64 {
        self.c_l.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.population_r() + self.population_l() + self.beta_a.norm_sqr() + self.beta_c.norm_sqr()
    }

    /// Re⟨self|other⟩.
    pub fn real_overlap(&self, other: &OracleState) -> f64 {
        let modes = |a: &[Complex64], b: &[Complex64]| -> f64 {
            a.iter().zip(b).map(|(x, y)| (x.conj() * y).re).sum()
        };
        modes(&self.c_r, &other.c_r)
            + modes(&self.c_l, &other.c_l)
            + (self.beta_a.conj() * other.beta_a).re
            + (self.beta_c.conj() * other.beta_c).re
    }
}

/// Time-derivative map of the single-excitation state.
#[derive(Debug, Clone)]
pub struct Dynamics {
    mode_energy: Vec<f64>,
    g_r: f64,
    g_l: f64,
    e_a: Complex64,
    e_c: Complex64,
    omega: f64,
    total_decay: f64,
    waveguide_decay: f64,
    max_rate: f64,
}

impl Dynamics {
    /// Equations of motion in the frame rotating at photon detuning `frame`.
    pub fn new(spec: &EmitterSpec, grid: &ModeGrid, frame: f64) -> Self {
        let rates = spec.rates();
        let (gamma_r, gamma_l) = rates.physical();
        let dd = grid.spacing();
        let g_r = (gamma_r * dd / (2.0 * PI)).sqrt();
        let g_l = (gamma_l * dd / (2.0 * PI)).sqrt();
        let (omega, delta_laser) = match spec.drive() {
            Some(d) => (d.omega_rabi(), d.delta_laser()),
            None => (0.0, 0.0),
        };
        let e_a = Complex64::new(frame, -rates.gamma_a() / 2.0);
        let e_c = Complex64::new(frame - delta_laser, -rates.gamma_c() / 2.0);
        let mode_energy: Vec<f64> = grid.offsets().into_iter().map(|x| -x).collect();
        let collective = (rates.waveguide_total() * grid.span() / PI).sqrt();
        let max_rate = [grid.span(), e_a.norm(), e_c.norm(), omega, gamma_r, gamma_l, collective]
            .into_iter()
            .fold(0.0, f64::max);
        Self {
            mode_energy,
            g_r,
            g_l,
            e_a,
            e_c,
            omega,
            total_decay: rates.total_decay(),
            waveguide_decay: rates.waveguide_total(),
            max_rate,
        }
    }

    pub fn n_modes(&self) -> usize {
        self.mode_energy.len()
    }

    /// Largest frequency in the generator; RK4 steps must stay well below its inverse.
    pub fn max_rate(&self) -> f64 {
        self.max_rate
    }

    pub fn couplings(&self) -> (f64, f64) {
        (self.g_r, self.g_l)
    }

    /// Population decay rates of the two driven-emitter eigenmodes, smallest
    /// first. An undriven emitter only has the |a⟩ rate.
    pub fn emitter_decay_rates(&self) -> Vec<f64> {
        if self.omega == 0.0 {
            return vec![self.total_decay];
        }
        let m_aa = self.e_a - I * self.waveguide_decay / 2.0;
        let mean = (m_aa + self.e_c) / 2.0;
        let half_diff = (m_aa - self.e_c) / 2.0;
        let root = (half_diff * half_diff + self.omega * self.omega).sqrt();
        let mut rates = vec![-2.0 * (mean + root).im, -2.0 * (mean - root).im];
        rates.sort_by(|a, b| a.total_cmp(b));
        rates
    }

    /// Writes dy/dt into `out`.
    pub fn derivative(&self, y: &OracleState, out: &mut OracleState) {
        let sum_r: Complex64 = y.c_r.iter().sum();
        let sum_l: Complex64 = y.c_l.iter().sum();
        let src_r = self.g_r * y.beta_a;
        let src_l = self.g_l * y.beta_a;
        for ((o, c), &e) in out.c_r.iter_mut().zip(&y.c_r).zip(&self.mode_energy) {
            *o = -I * (e * c + src_r);
        }
        for ((o, c), &e) in out.c_l.iter_mut().zip(&y.c_l).zip(&self.mode_energy) {
            *o = -I * (e * c + src_l);
        }
        out.beta_a = -I * (self.e_a * y.beta_a + self.g_r * sum_r + self.g_l * sum_l + self.omega * y.beta_c);
        out.beta_c = -I * (self.e_c * y.beta_c + self.omega * y.beta_a);
    }
}

/// Checks the grid against the emitter and packet, then builds the dynamics
/// in the frame of the packet's carrier.
pub fn build_dynamics(
    spec: &EmitterSpec,
    grid: &ModeGrid,
    wp: &WavepacketSpec,
) -> Result<Dynamics, OracleError> {
    wp.validate(grid)?;
    let linewidth = spec.rates().total_decay() / 2.0;
    if linewidth < 3.0 * grid.spacing() {
        return Err(OracleError::GridTooCoarse { linewidth, spacing: grid.spacing() });
    }
    Ok(Dynamics::new(spec, grid, wp.carrier))
}
