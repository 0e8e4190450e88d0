use serde::Serialize;

use super::{scatter_wavepacket, Direction, ModeGrid, OracleError, OracleSettings, WavepacketSpec};
use crate::model::{Detuning, EmitterSpec};
use crate::scattering::{scatter, ScatteringError};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscrepancyRow {
    pub carrier: f64,
    pub direction: Direction,
    pub t_oracle: f64,
    pub t_analytic: f64,
    pub r_oracle: f64,
    pub r_analytic: f64,
    pub loss: f64,
    pub converged: bool,
}

impl DiscrepancyRow {
    pub fn t_error(&self) -> f64 {
        (self.t_oracle - self.t_analytic).abs()
    }

    pub fn r_error(&self) -> f64 {
        (self.r_oracle - self.r_analytic).abs()
    }

    pub fn passes(&self, tolerance: f64) -> bool {
        self.converged && self.t_error() < tolerance && self.r_error() < tolerance
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscrepancyReport {
    pub rows: Vec<DiscrepancyRow>,
    pub max_t_error: f64,
    pub max_r_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum CompareError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Scattering(#[from] ScatteringError),
}

/// Oracle against closed form at each carrier. Unconverged runs are kept as
/// rows (using the refined run) and fail the report.
pub fn compare_to_analytic(
    spec: &EmitterSpec,
    carriers: &[f64],
    wp_template: &WavepacketSpec,
    grid: &ModeGrid,
    settings: &OracleSettings,
    tolerance: f64,
) -> Result<DiscrepancyReport, CompareError> {
    let mut rows = Vec::with_capacity(carriers.len());
    for &carrier in carriers {
        let wp = wp_template.with_carrier(carrier);
        let (result, converged) = match scatter_wavepacket(spec, &wp, grid, settings) {
            Ok(res) => (res, true),
            Err(OracleError::NotConverged { fine, .. }) => (*fine, false),
            Err(e) => return Err(e.into()),
        };
        let analytic = scatter(spec, Detuning(carrier))?;
        let t_analytic = match wp.direction {
            Direction::FromLeft => analytic.trans_r,
            Direction::FromRight => analytic.trans_l,
        };
        rows.push(DiscrepancyRow {
            carrier,
            direction: wp.direction,
            t_oracle: result.t,
            t_analytic,
            r_oracle: result.r,
            r_analytic: analytic.refl,
            loss: result.loss,
            converged,
        });
    }
    let max_t_error = rows.iter().map(DiscrepancyRow::t_error).fold(0.0, f64::max);
    let max_r_error = rows.iter().map(DiscrepancyRow::r_error).fold(0.0, f64::max);
    let pass = rows.iter().all(|r| r.passes(tolerance));
    Ok(DiscrepancyReport { rows, max_t_error, max_r_error, tolerance, pass })
}
