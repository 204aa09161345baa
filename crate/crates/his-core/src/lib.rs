//! Desk-scale simulator of a holographic interference surface: an antenna
//! array that records power-only interference patterns between an incoming
//! object wave and a locally generated reference wave, recovers the
//! complex object wave by three-step phase-shifting, and estimates the
//! source direction from the recovered field.
//!
//! The crate is layered bottom-up:
//!
//! - [`array`] — grid geometry, plane-wave sources, the reference wave,
//!   and per-unit complex field snapshots;
//! - [`holography`] — interference hologram formation, the three-step
//!   phase-shifted triplet, exact recovery, and the textbook three-term
//!   decomposition of naive (single-hologram) reconstruction;
//! - [`frontend`] — parametric hardware impairments between the ideal
//!   model and the recorded triplets: phase-shifter quantization, divider
//!   imbalance, channel and detector noise, ADC clipping/quantization;
//! - [`doa`] — Bartlett spatial spectrum over a scan grid with parabolic
//!   peak refinement, plus sweep error metrics;
//! - [`experiment`] — config-file-driven runs that tie the layers together
//!   and write CSV/JSON artifacts for plotting and regression.
//!
//! Everything is deterministic: all randomness flows from explicit 64-bit
//! seeds through a counter-based stream cipher generator, so identical
//! configs and seeds reproduce identical outputs byte for byte.

pub mod array;
pub mod doa;
pub mod error;
pub mod experiment;
pub mod frontend;
pub mod holography;

pub use array::{
    default_his_geometry, object_field, reference_field, steering_vector, wavelength,
    ArrayGeometry, FieldSnapshot, GeometryId, PlaneWaveSource, ReferenceWave, SPEED_OF_LIGHT,
};
pub use doa::{
    bartlett_spectrum, bartlett_spectrum_averaged, estimate_doa, sweep_errors, BartlettSpectrum,
    ScanGrid, SweepErrorMetrics,
};
pub use error::HisError;
pub use frontend::{
    acquire, adc_quantize, derive_seed, noise_sweep, quantize_phase, AcquisitionRecord,
    FrontendConfig,
};
pub use holography::{
    form_hologram, naive_reconstruct, psi_recover, synthesize_triplet, unwrap_phases,
    HologramTriplet, ReconstructionComponents,
};
