//! Error taxonomy shared by the modelling layers.
//!
//! Everything that can go wrong below the experiment runner is a
//! [`HisError`]. The variants are deliberately specific: callers (and the
//! CLI) route on them, and the messages are written to be actionable
//! without a stack trace.

use thiserror::Error;

/// Errors raised by the wave, hologram, front-end, and direction-finding
/// layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum HisError {
    /// Carrier frequency must be a positive, finite number of hertz.
    #[error("carrier frequency must be positive and finite, got {0} Hz")]
    InvalidFrequency(f64),

    /// Azimuth angles are only meaningful in the front half-space.
    #[error("azimuth {0} deg is outside the supported range [-90, 90]")]
    AzimuthOutOfRange(f64),

    /// Wave amplitudes are magnitudes and must be non-negative and finite.
    #[error("amplitude must be non-negative and finite, got {0}")]
    NegativeAmplitude(f64),

    /// Array construction rejected the requested shape or pitch.
    #[error("invalid array geometry: {0}")]
    InvalidGeometry(String),

    /// Two per-unit sequences that must align do not.
    #[error("length mismatch: expected {expected} per-unit entries, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    /// Detected powers are magnitudes squared; negative or non-finite
    /// entries cannot have come from a detector.
    #[error("hologram powers must be non-negative and finite, got {value} at unit {unit}")]
    InvalidPower { value: f64, unit: usize },

    /// A snapshot is being used against a geometry it was not sampled on.
    #[error("snapshot was sampled on a different array geometry")]
    GeometryMismatch,

    /// Phase-shifting recovery divides by the reference wave; a zero
    /// reference (globally or at any single unit) makes that singular.
    #[error("reference wave is zero at one or more units; phase-shifting recovery is singular")]
    SingularReference,

    /// The textbook three-term hologram decomposition assumes a single
    /// plane wave, i.e. uniform per-unit amplitude.
    #[error(
        "object amplitude varies by {spread:.3e} across units; the three-term \
         decomposition assumes a uniform plane wave (tolerance {tolerance:.1e})"
    )]
    DecompositionUndefined { spread: f64, tolerance: f64 },

    /// A spatial spectrum cannot be normalized: the field is identically
    /// zero, or it is orthogonal to every steering vector on the grid.
    #[error("field has no projection on the scan grid; spatial spectrum is undefined")]
    DegenerateField,

    /// Scan grid construction rejected the requested span or step.
    #[error("invalid scan grid: {0}")]
    InvalidScanGrid(String),

    /// Front-end parameterization rejected a knob setting.
    #[error("invalid front-end configuration: {0}")]
    InvalidFrontend(String),
}
