use std::path::PathBuf;

use polphase::states::StateSpec;
use polphase::{tol, EnergyBasis, PhaseGrid};
use serde::Serialize;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Values given on the command line; `None` means "not given".
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigFlags {
    pub cutoff: Option<usize>,
    pub grid_points: Option<usize>,
    pub omega: Option<f64>,
    pub hbar: Option<f64>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
    pub verbosity: u8,
}

/// Fully resolved run settings. Flags beat the state document, which beats
/// the built-in defaults.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub cutoff: usize,
    pub grid_points: usize,
    pub omega: f64,
    pub hbar: f64,
    pub format: Format,
    #[serde(skip)]
    pub output: Option<PathBuf>,
    #[serde(skip)]
    pub verbosity: u8,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            cutoff: tol::DEFAULT_CUTOFF,
            grid_points: tol::DEFAULT_GRID_POINTS,
            omega: 1.0,
            hbar: 1.0,
            format: Format::Csv,
            output: None,
            verbosity: 0,
        }
    }
}

impl RunConfig {
    pub fn resolve(flags: &ConfigFlags, spec: Option<&StateSpec>) -> Result<Self, CliError> {
        let d = RunConfig::default();
        let cfg = RunConfig {
            cutoff: flags
                .cutoff
                .or(spec.and_then(|s| s.cutoff))
                .unwrap_or(d.cutoff),
            grid_points: flags
                .grid_points
                .or(spec.and_then(|s| s.grid_points))
                .unwrap_or(d.grid_points),
            omega: flags
                .omega
                .or(spec.and_then(|s| s.omega))
                .unwrap_or(d.omega),
            hbar: flags.hbar.unwrap_or(d.hbar),
            format: flags.format.unwrap_or(d.format),
            output: flags.output.clone(),
            verbosity: flags.verbosity,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let need = 2 * (self.cutoff + 1);
        if self.grid_points < need {
            return Err(CliError::Input(format!(
                "--grid-points {} is below 2(N+1) = {need} for cutoff {}",
                self.grid_points, self.cutoff
            )));
        }
        for (name, x) in [("omega", self.omega), ("hbar", self.hbar)] {
            if !(x > 0.0 && x.is_finite()) {
                return Err(CliError::Input(format!(
                    "--{name} must be finite and > 0, got {x}"
                )));
            }
        }
        Ok(())
    }

    pub fn basis(&self) -> EnergyBasis {
        EnergyBasis::new(self.cutoff)
    }

    pub fn grid(&self) -> PhaseGrid {
        PhaseGrid::new(self.grid_points).expect("validated grid is non-empty")
    }
}
