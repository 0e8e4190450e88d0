//! Scenario files.
//!
//! A scenario is a TOML (or JSON) document with three tables:
//!
//! ```toml
//! [emitter]
//! kind = "lambda"        # or "two-level"
//! gamma_l = 0.1          # all rates in units of Γ_R
//! gamma_a = 0.9
//! gamma_c = 0.0
//! omega = 2.0            # Λ only
//! delta_laser = 1.0      # Λ only
//!
//! [sweep]
//! kind = "spectrum"      # spectrum | compare | sweep2d | tune | oracle
//! grid = { start = -4.0, stop = 4.0, count = 801 }
//!
//! [output]
//! format = "csv"         # or "json"
//! path = "spectrum.csv"
//! ```
//!
//! Command-line flags override file values, which override the defaults.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{CouplingRates, EmitterSpec, LaserDrive, ModelError};
use crate::oracle::{Direction, ModeGrid, OracleError, OracleSettings, WavepacketSpec};
use crate::tuner::TuneMode;

/// Upper bound on the number of points in any grid.
pub const MAX_GRID_POINTS: usize = 1_000_000;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("invalid grid `{0}`: expected start:stop:count")]
    GridSyntax(String),
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error("scenario sweep is `{found}` but the command is `{expected}`")]
    SweepMismatch { expected: &'static str, found: &'static str },
    #[error("{field}: {message}")]
    Field { field: &'static str, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum EmitterKind {
    #[default]
    TwoLevel,
    Lambda,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EmitterConfig {
    pub kind: EmitterKind,
    pub gamma_l: f64,
    pub gamma_a: f64,
    pub gamma_c: f64,
    pub omega: f64,
    pub delta_laser: f64,
}

impl Default for EmitterConfig {
    fn default() -> Self {
        Self { kind: EmitterKind::TwoLevel, gamma_l: 0.1, gamma_a: 0.9, gamma_c: 0.0, omega: 2.0, delta_laser: 1.0 }
    }
}

impl EmitterConfig {
    pub fn rates(&self) -> Result<CouplingRates, ModelError> {
        CouplingRates::new(1.0, self.gamma_l, self.gamma_a, self.gamma_c)
    }

    pub fn spec(&self) -> Result<EmitterSpec, ModelError> {
        let rates = self.rates()?;
        Ok(match self.kind {
            EmitterKind::TwoLevel => EmitterSpec::two_level(rates),
            EmitterKind::Lambda => EmitterSpec::lambda(rates, LaserDrive::new(self.omega, self.delta_laser)?),
        })
    }
}

/// `count` evenly spaced points from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn new(start: f64, stop: f64, count: usize) -> Self {
        Self { start, stop, count }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(ConfigError::Grid("bounds must be finite".into()));
        }
        if self.count == 0 || self.count > MAX_GRID_POINTS {
            return Err(ConfigError::Grid(format!("count must be in 1..={MAX_GRID_POINTS}, got {}", self.count)));
        }
        if self.count > 1 && !(self.stop > self.start) {
            return Err(ConfigError::Grid("stop must exceed start".into()));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let span = self.stop - self.start;
        let last = (self.count - 1) as f64;
        (0..self.count).map(|i| self.start + span * i as f64 / last).collect()
    }

    pub fn spacing(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.stop - self.start) / (self.count - 1) as f64
        }
    }
}

impl std::str::FromStr for GridSpec {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ConfigError::GridSyntax(s.to_string());
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let start = parts[0].trim().parse().map_err(|_| bad())?;
        let stop = parts[1].trim().parse().map_err(|_| bad())?;
        let count = parts[2].trim().parse().map_err(|_| bad())?;
        let grid = GridSpec { start, stop, count };
        grid.validate()?;
        Ok(grid)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum DirectionChoice {
    FromLeft,
    FromRight,
    #[default]
    Both,
}

impl DirectionChoice {
    pub fn directions(self) -> Vec<Direction> {
        match self {
            DirectionChoice::FromLeft => vec![Direction::FromLeft],
            DirectionChoice::FromRight => vec![Direction::FromRight],
            DirectionChoice::Both => vec![Direction::FromLeft, Direction::FromRight],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleConfig {
    pub carriers: Vec<f64>,
    pub directions: DirectionChoice,
    pub sigma_k: f64,
    pub launch_offset: f64,
    pub n_modes: usize,
    pub span: f64,
    pub dt: f64,
    pub tolerance: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            carriers: vec![0.0],
            directions: DirectionChoice::Both,
            sigma_k: 0.02,
            launch_offset: 5.0,
            n_modes: 512,
            span: 5.0,
            dt: 0.01,
            tolerance: 1e-2,
        }
    }
}

impl OracleConfig {
    pub fn grid(&self) -> Result<ModeGrid, ConfigError> {
        Ok(ModeGrid::new(self.n_modes, self.span)?)
    }

    pub fn wavepacket(&self, direction: Direction) -> WavepacketSpec {
        WavepacketSpec { carrier: 0.0, sigma_k: self.sigma_k, launch_offset: self.launch_offset, direction }
    }

    pub fn settings(&self) -> OracleSettings {
        OracleSettings { dt: self.dt, ..OracleSettings::default() }
    }
}

/// Exactly one kind of sweep per scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SweepConfig {
    /// Scattering probabilities along a δ_k grid.
    Spectrum { grid: GridSpec },
    /// Closed-form ΔT against the amplitude route along a δ_k grid.
    Compare { grid: GridSpec },
    /// Λ emitter over a (Δ, Ω) grid at fixed δ_k.
    Sweep2d { delta_k: f64, delta_laser: GridSpec, omega: GridSpec },
    Tune { mode: TuneMode, delta_k: f64, omega: Option<f64> },
    Oracle(OracleConfig),
}

impl SweepConfig {
    pub fn name(&self) -> &'static str {
        match self {
            SweepConfig::Spectrum { .. } => "spectrum",
            SweepConfig::Compare { .. } => "compare",
            SweepConfig::Sweep2d { .. } => "sweep2d",
            SweepConfig::Tune { .. } => "tune",
            SweepConfig::Oracle(_) => "oracle",
        }
    }

    /// Default sweep for a command name.
    pub fn default_for(command: &str) -> Option<Self> {
        let detuning_grid = GridSpec::new(-4.0, 4.0, 801);
        Some(match command {
            "spectrum" => SweepConfig::Spectrum { grid: detuning_grid },
            "compare" => SweepConfig::Compare { grid: detuning_grid },
            "sweep2d" => SweepConfig::Sweep2d {
                delta_k: 3.0,
                delta_laser: GridSpec::new(-5.0, 5.0, 101),
                omega: GridSpec::new(0.0, 5.0, 101),
            },
            "tune" => SweepConfig::Tune { mode: TuneMode::Block, delta_k: 3.0, omega: None },
            "oracle" => SweepConfig::Oracle(OracleConfig::default()),
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub format: Option<Format>,
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct Scenario {
    pub emitter: EmitterConfig,
    pub sweep: Option<SweepConfig>,
    pub output: OutputConfig,
}

impl Scenario {
    /// Parses TOML, or JSON when the path ends in `.json`.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Read { path: path.to_path_buf(), source })?;
        let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        if is_json {
            Self::from_json(&text).map_err(|message| ConfigError::Parse { path: path.to_path_buf(), message })
        } else {
            Self::from_toml(&text).map_err(|message| ConfigError::Parse { path: path.to_path_buf(), message })
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| format!("line {}, column {}: {e}", e.line(), e.column()))
    }

    /// Fills in the command's default sweep, or checks that the file's sweep
    /// matches the command.
    pub fn for_command(mut self, command: &'static str) -> Result<Self, ConfigError> {
        match &self.sweep {
            None => self.sweep = SweepConfig::default_for(command),
            Some(s) if s.name() != command => {
                return Err(ConfigError::SweepMismatch { expected: command, found: s.name() })
            }
            Some(_) => {}
        }
        Ok(self)
    }

    /// Checks everything that can be checked before running.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.emitter.spec()?;
        match &self.sweep {
            Some(SweepConfig::Spectrum { grid }) | Some(SweepConfig::Compare { grid }) => grid.validate()?,
            Some(SweepConfig::Sweep2d { delta_k, delta_laser, omega }) => {
                finite_field("delta_k", *delta_k)?;
                delta_laser.validate()?;
                omega.validate()?;
                if omega.start < 0.0 {
                    return Err(ConfigError::Field { field: "omega", message: "must be non-negative".into() });
                }
                if delta_laser.count.saturating_mul(omega.count) > MAX_GRID_POINTS {
                    return Err(ConfigError::Grid(format!("more than {MAX_GRID_POINTS} points")));
                }
            }
            Some(SweepConfig::Tune { delta_k, omega, .. }) => {
                finite_field("delta_k", *delta_k)?;
                if let Some(o) = omega {
                    finite_field("omega", *o)?;
                }
            }
            Some(SweepConfig::Oracle(cfg)) => {
                cfg.grid()?;
                for &c in &cfg.carriers {
                    finite_field("carriers", c)?;
                }
                if !(cfg.tolerance > 0.0) {
                    return Err(ConfigError::Field { field: "tolerance", message: "must be positive".into() });
                }
                if !(cfg.dt > 0.0) {
                    return Err(ConfigError::Field { field: "dt", message: "must be positive".into() });
                }
            }
            None => {}
        }
        Ok(())
    }

    /// Output format: explicit setting, else the path's extension, else CSV.
    pub fn format(&self) -> Format {
        if let Some(f) = self.output.format {
            return f;
        }
        match self.output.path.as_ref().and_then(|p| p.extension()).and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Csv,
        }
    }
}

fn finite_field(field: &'static str, v: f64) -> Result<(), ConfigError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(ConfigError::Field { field, message: format!("{v} is not finite") })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g: GridSpec = "-4:4:9".parse().unwrap();
        assert_eq!(g.points(), vec![-4.0, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0, 4.0]);
        let one: GridSpec = "0.5:0.5:1".parse().unwrap();
        assert_eq!(one.points(), vec![0.5]);
        assert!("1:2".parse::<GridSpec>().is_err());
        assert!("2:1:5".parse::<GridSpec>().is_err());
        assert!("0:1:0".parse::<GridSpec>().is_err());
        assert!("0:1:2000000".parse::<GridSpec>().is_err());
    }

    #[test]
    fn grid_hits_round_values() {
        let omega = GridSpec::new(0.0, 5.0, 101).points();
        assert_eq!(omega[60], 3.0);
        let delta = GridSpec::new(-5.0, 5.0, 101).points();
        assert_eq!(delta[50], 0.0);
    }

    #[test]
    fn toml_round_trip_of_defaults() {
        let s = Scenario::default().for_command("sweep2d").unwrap();
        let text = toml::to_string(&s).unwrap();
        assert_eq!(Scenario::from_toml(&text).unwrap(), s);
    }

    #[test]
    fn parses_documented_example() {
        let text = r#"
            [emitter]
            kind = "lambda"
            gamma_l = 0.1
            gamma_a = 0.9
            omega = 2.0
            delta_laser = 1.0

            [sweep]
            kind = "spectrum"
            grid = { start = -4.0, stop = 4.0, count = 801 }

            [output]
            path = "spectrum.json"
        "#;
        let s = Scenario::from_toml(text).unwrap();
        assert_eq!(s.emitter.kind, EmitterKind::Lambda);
        assert_eq!(s.format(), Format::Json);
        s.validate().unwrap();
        assert!(matches!(s.clone().for_command("tune"), Err(ConfigError::SweepMismatch { .. })));
        assert!(s.for_command("spectrum").is_ok());
    }

    #[test]
    fn unknown_fields_rejected_with_location() {
        let err = Scenario::from_toml("[emitter]\ngama_l = 0.1\n").unwrap_err();
        assert!(err.contains("gama_l"), "{err}");
        assert!(err.contains("line 2"), "{err}");
    }

    #[test]
    fn oracle_section_defaults() {
        let s = Scenario::from_toml("[sweep]\nkind = \"oracle\"\ncarriers = [0.0, 1.0]\n").unwrap();
        match s.sweep {
            Some(SweepConfig::Oracle(cfg)) => {
                assert_eq!(cfg.carriers, vec![0.0, 1.0]);
                assert_eq!(cfg.n_modes, 512);
            }
            other => panic!("{other:?}"),
        }
    }
}
