//! Verification harness: case configuration, the two reference cases, the
//! RMSE metric, the resource sweep and CSV/plot-script emission.

mod cases;
mod config;
mod metrics;
mod output;
mod selftest;

pub use cases::{
    init_discontinuity, init_kolmogorov, run_case1, run_case2, run_classical, run_resources,
    Case1Artifacts, Case1Metrics, Case2Artifacts, CASE1_FRONT_TOL_CELLS, CASE1_PLATEAU_TOL,
    CASE2_RMSE_TOL,
};
pub use config::{default_config, parse_config_file, parse_config_str, resolve_output_dir};
pub use metrics::{rmse, RmseResult, EPS_GUARD};
pub use output::{atomic_write, emit_plot_script};
pub use selftest::{selftest, Check};

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::Error;
use crate::lattice::LatticeName;
use crate::operators::Variant;

/// Serializes a float with 17 significant digits (round-trip exact).
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Which verification case to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseKind {
    Discontinuity1d,
    Kolmogorov2d,
    Resources,
}

impl fmt::Display for CaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseKind::Discontinuity1d => write!(f, "discontinuity_1d"),
            CaseKind::Kolmogorov2d => write!(f, "kolmogorov_2d"),
            CaseKind::Resources => write!(f, "resources"),
        }
    }
}

impl FromStr for CaseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "discontinuity_1d" => Ok(CaseKind::Discontinuity1d),
            "kolmogorov_2d" => Ok(CaseKind::Kolmogorov2d),
            "resources" => Ok(CaseKind::Resources),
            other => Err(Error::Config(format!("unknown case `{other}`"))),
        }
    }
}

/// Solver path used for a case run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    ClassicalBgk,
    /// Classical quadratic form with the linear (2 - rho) prefactor.
    ClassicalQuadratic,
    QuantumEmulated,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::ClassicalBgk => write!(f, "classical_bgk"),
            Mode::ClassicalQuadratic => write!(f, "classical_quadratic"),
            Mode::QuantumEmulated => write!(f, "quantum_emulated"),
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "classical_bgk" => Ok(Mode::ClassicalBgk),
            "classical_quadratic" => Ok(Mode::ClassicalQuadratic),
            "quantum_emulated" => Ok(Mode::QuantumEmulated),
            other => Err(Error::Config(format!("unknown mode `{other}`"))),
        }
    }
}

/// Full configuration of one case run.
#[derive(Debug, Clone)]
pub struct CaseConfig {
    pub case: CaseKind,
    pub lattice: LatticeName,
    pub nx: usize,
    pub ny: usize,
    pub steps: usize,
    pub delta_rho: f64,
    /// One entry for the discontinuity case; the full sweep for the 2D case.
    pub viscosities: Vec<f64>,
    pub a_x: f64,
    pub a_y: f64,
    pub k_x: u32,
    pub k_y: u32,
    pub variant: Variant,
    pub mode: Mode,
    pub output_dir: PathBuf,
    pub seed: u64,
}
