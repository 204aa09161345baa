//! Config-file-driven experiment runs and their on-disk artifacts.
//!
//! The experiment layer ties the model layers together behind a
//! declarative TOML configuration: build the surface, synthesize sources,
//! push them through the front end, recover fields, estimate directions,
//! and write CSV/JSON artifacts plus a gnuplot script. Three run modes
//! exist — a direction sweep, a single-angle deep dive, and a noise-level
//! study — all sharing one estimation core and one seeding policy.
//!
//! Errors split into configuration problems (bad file, unknown key,
//! invalid field) and runtime problems (model errors, unwritable output);
//! the CLI maps the former to exit code 2 and the latter to exit code 3.

mod config;
mod runner;

pub use config::{
    ExperimentConfig, GeometryConfig, NoiseStudyConfig, ReferenceConfig, ScanConfig, SourceConfig,
    SweepConfig,
};
pub use runner::{
    run_noise_study, run_single, run_sweep, NoiseReport, NoiseRow, SingleReport, SweepReport,
    SweepRow, HOLOGRAM_CSV_HEADER, NOISE_CSV_HEADER, PHASE_CSV_HEADER, SPECTRUM_CSV_HEADER,
    SWEEP_CSV_HEADER,
};

use std::path::PathBuf;
use thiserror::Error;

use crate::error::HisError;

/// Errors of the experiment layer.
#[derive(Debug, Error)]
pub enum ExperimentError {
    /// A config field failed validation; `field` is its dotted path.
    #[error("config field {field}: {message}")]
    InvalidConfig { field: String, message: String },

    /// The config file is not valid TOML for the expected schema
    /// (includes unknown keys, which are rejected rather than ignored).
    #[error("config parse error: {0}")]
    Parse(#[from] toml::de::Error),

    /// A model-layer error surfaced at run time.
    #[error(transparent)]
    Model(#[from] HisError),

    /// Reading inputs or writing artifacts failed.
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl ExperimentError {
    /// Process exit code for this error: 2 for configuration problems,
    /// 3 for runtime and I/O failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::InvalidConfig { .. } | Self::Parse(_) => 2,
            Self::Model(_) | Self::Io { .. } => 3,
        }
    }
}
