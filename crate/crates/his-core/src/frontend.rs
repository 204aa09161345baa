//! Parametric hardware impairments between the ideal wave model and the
//! recorded hologram triplets.
//!
//! The chain mirrors the receive path of the physical surface: the
//! reference branch passes a digitally controlled phase shifter (finite
//! resolution) and a power-divider network (static per-unit gain error),
//! the air interface adds complex white noise to the object wave, the
//! envelope detector adds measurement noise to the detected power, and an
//! ADC clips to its full-scale range and quantizes. Every stage is
//! optional; with all knobs at their transparent settings [`acquire`]
//! reproduces [`synthesize_triplet`] bit for bit.
//!
//! Determinism contract: all randomness comes from a ChaCha8 stream
//! seeded with [`FrontendConfig::seed`], and draws happen in a fixed
//! documented order — divider gains first (one complex draw per unit,
//! once per record), then per phase state the object-wave noise (one
//! complex draw per unit) followed by the detector noise (one real draw
//! per unit). Stages whose knob is disabled draw nothing, so turning a
//! sigma to zero leaves the remaining draw sequence unchanged from a
//! config that omits the stage entirely.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use crate::array::{reference_field, ArrayGeometry, FieldSnapshot, ReferenceWave};
use crate::error::HisError;
use crate::holography::{form_hologram, psi_recover, HologramTriplet, PHASE_STEPS};

/// Knobs of the front-end impairment chain. The default is fully
/// transparent: no quantization, no noise, no clipping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FrontendConfig {
    /// Phase-shifter resolution in bits; the realized reference phase is
    /// the nearest multiple of `2*pi / 2^bits`. `None` applies the
    /// commanded phase exactly.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phase_shifter_bits: Option<u32>,
    /// Std deviation of the static complex gain error `1 + CN(0, sigma^2)`
    /// the divider network applies per unit. Drawn once per record.
    pub divider_sigma: f64,
    /// Std deviation of the complex white noise CN(0, sigma^2) added to
    /// the object wave, drawn fresh for every phase state.
    pub awgn_sigma: f64,
    /// Std deviation of the real Gaussian noise added to each detected
    /// power sample.
    pub detector_noise_sigma: f64,
    /// ADC resolution in bits (mid-rise quantizer). `None` records the
    /// analog power unquantized.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adc_bits: Option<u32>,
    /// ADC full-scale power. `None` sizes it automatically as
    /// `1.25 * (A_r + max|e_o|)^2`, 25% above the largest ideal power.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adc_full_scale: Option<f64>,
    /// Seed of the per-record noise stream.
    pub seed: u64,
}

impl Default for FrontendConfig {
    fn default() -> Self {
        Self {
            phase_shifter_bits: None,
            divider_sigma: 0.0,
            awgn_sigma: 0.0,
            detector_noise_sigma: 0.0,
            adc_bits: None,
            adc_full_scale: None,
            seed: 0,
        }
    }
}

impl FrontendConfig {
    /// Check every knob; messages name the offending field.
    pub fn validate(&self) -> Result<(), HisError> {
        if let Some(bits) = self.phase_shifter_bits {
            if !(1..=32).contains(&bits) {
                return Err(HisError::InvalidFrontend(format!(
                    "phase_shifter_bits must be in 1..=32, got {bits}"
                )));
            }
        }
        if let Some(bits) = self.adc_bits {
            if !(1..=32).contains(&bits) {
                return Err(HisError::InvalidFrontend(format!(
                    "adc_bits must be in 1..=32, got {bits}"
                )));
            }
        }
        for (name, sigma) in [
            ("divider_sigma", self.divider_sigma),
            ("awgn_sigma", self.awgn_sigma),
            ("detector_noise_sigma", self.detector_noise_sigma),
        ] {
            if !(sigma.is_finite() && sigma >= 0.0) {
                return Err(HisError::InvalidFrontend(format!(
                    "{name} must be non-negative and finite, got {sigma}"
                )));
            }
        }
        if let Some(fs) = self.adc_full_scale {
            if !(fs.is_finite() && fs > 0.0) {
                return Err(HisError::InvalidFrontend(format!(
                    "adc_full_scale must be positive and finite, got {fs}"
                )));
            }
        }
        Ok(())
    }

    /// Same knobs, different noise stream.
    pub fn with_seed(&self, seed: u64) -> Self {
        Self {
            seed,
            ..self.clone()
        }
    }
}

/// Derive an independent child seed from a base seed and a counter
/// (splitmix64-style finalizer). Used to give every trial, angle and
/// snapshot its own noise stream while keeping the whole run reproducible
/// from one top-level seed.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Realized output of a B-bit phase shifter: `phase` wrapped into
/// `[0, 2*pi)` and rounded to the nearest multiple of `2*pi / 2^bits`,
/// ties towards the smaller multiple. `bits = None` wraps without
/// rounding.
///
/// # Panics
/// Panics if `bits` is 0 or above 63 (the shifter would have more levels
/// than distinguishable doubles long before that).
pub fn quantize_phase(phase: f64, bits: Option<u32>) -> f64 {
    let wrapped = phase.rem_euclid(TAU);
    let Some(bits) = bits else {
        return wrapped;
    };
    assert!(
        (1..=63).contains(&bits),
        "phase shifter bits must be in 1..=63, got {bits}"
    );
    let levels = 1u64 << bits;
    let step = TAU / levels as f64;
    let q = wrapped / step;
    let base = q.floor();
    let idx = if q - base > 0.5 {
        base as u64 + 1
    } else {
        base as u64
    } % levels;
    idx as f64 * step
}

/// Mid-rise ADC transfer function for an input already clipped to
/// `[0, full_scale]`: with step `full_scale / 2^bits`, the output is
/// `(floor(x / step) + 0.5) * step`, the top code clamped so the result
/// never exceeds full scale.
///
/// # Panics
/// Panics if `bits` is 0 or above 63.
pub fn adc_quantize(power: f64, bits: u32, full_scale: f64) -> f64 {
    assert!(
        (1..=63).contains(&bits),
        "adc bits must be in 1..=63, got {bits}"
    );
    let levels = 1u64 << bits;
    let step = full_scale / levels as f64;
    if !step.is_finite() || step <= 0.0 {
        // Degenerate zero-range converter: nothing to resolve.
        return power;
    }
    let idx = ((power / step).floor() as u64).min(levels - 1);
    (idx as f64 + 0.5) * step
}

/// One recorded phase-shifting cycle together with everything needed to
/// interpret or replay it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcquisitionRecord {
    /// The three recordings as they left the front end.
    pub triplet: HologramTriplet,
    /// Ground-truth object field the record was synthesized from.
    pub truth: FieldSnapshot,
    /// Exact knob settings used, including the seed.
    pub config_used: FrontendConfig,
    /// Seed of the noise stream (echo of `config_used.seed`).
    pub seed_state: u64,
    /// Resolved ADC full-scale power (automatic sizing applied).
    pub full_scale: f64,
    /// Number of samples that hit a rail: detected powers pulled below
    /// zero by detector noise, or above full scale when a converter or an
    /// explicit full-scale setting is present. Counted across all three
    /// recordings.
    pub clipped: usize,
}

fn complex_normal(rng: &mut ChaCha8Rng, sigma: f64) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * (sigma * FRAC_1_SQRT_2)
}

fn auto_full_scale(reference_amplitude: f64, e_o: &FieldSnapshot) -> f64 {
    let peak = reference_amplitude + e_o.max_abs();
    1.25 * peak * peak
}

/// Record one phase-shifting cycle of `e_o` against `rw` through the
/// impairment chain configured by `cfg`.
///
/// Stage order per record: draw the divider gains, then for each of the
/// three phase states quantize the commanded reference phase, add
/// object-wave noise, detect `|e_obs + e_r|^2`, add detector noise, clip,
/// and quantize. The lower rail at zero is always enforced (a power
/// detector cannot emit negative values); the upper rail at full scale
/// applies when `adc_bits` or `adc_full_scale` is set. Both kinds of rail
/// hit count towards `clipped`.
pub fn acquire(
    e_o: &FieldSnapshot,
    rw: &ReferenceWave,
    geom: &ArrayGeometry,
    cfg: &FrontendConfig,
) -> Result<AcquisitionRecord, HisError> {
    cfg.validate()?;
    if e_o.geometry_id() != geom.id() {
        return Err(HisError::GeometryMismatch);
    }
    let n = geom.unit_count();
    if let Some(gains) = rw.per_unit_gain() {
        if gains.len() != n {
            return Err(HisError::DimensionMismatch {
                expected: n,
                actual: gains.len(),
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    // Static divider imbalance: one complex gain error per unit, held
    // constant across the three phase states of this record.
    let rw_actual = if cfg.divider_sigma > 0.0 {
        let gains: Vec<Complex64> = (0..n)
            .map(|k| {
                let imbalance =
                    Complex64::new(1.0, 0.0) + complex_normal(&mut rng, cfg.divider_sigma);
                match rw.per_unit_gain() {
                    Some(g) => g[k] * imbalance,
                    None => imbalance,
                }
            })
            .collect();
        rw.clone().with_per_unit_gain(gains)
    } else {
        rw.clone()
    };

    let full_scale = cfg
        .adc_full_scale
        .unwrap_or_else(|| auto_full_scale(rw.amplitude(), e_o));
    let rail_at_full_scale = cfg.adc_bits.is_some() || cfg.adc_full_scale.is_some();
    let mut clipped = 0usize;
    let mut recordings: Vec<Vec<f64>> = Vec::with_capacity(3);

    for offset in PHASE_STEPS {
        let commanded = rw_actual.global_phase() + offset;
        let realized = match cfg.phase_shifter_bits {
            // An unbounded shifter applies the commanded phase as-is.
            None => commanded,
            Some(bits) => quantize_phase(commanded, Some(bits)),
        };
        let e_r = reference_field(&rw_actual.with_global_phase(realized), geom)?;

        let e_obs = if cfg.awgn_sigma > 0.0 {
            let values = e_o
                .values()
                .iter()
                .map(|v| v + complex_normal(&mut rng, cfg.awgn_sigma))
                .collect();
            FieldSnapshot::from_parts(values, e_o.geometry_id())
        } else {
            e_o.clone()
        };

        let mut powers = form_hologram(&e_obs, &e_r)?;
        if cfg.detector_noise_sigma > 0.0 {
            for p in powers.iter_mut() {
                let noise: f64 = rng.sample(StandardNormal);
                *p += cfg.detector_noise_sigma * noise;
            }
        }
        for p in powers.iter_mut() {
            if *p < 0.0 {
                *p = 0.0;
                clipped += 1;
            } else if rail_at_full_scale && *p > full_scale {
                *p = full_scale;
                clipped += 1;
            }
        }
        if let Some(bits) = cfg.adc_bits {
            for p in powers.iter_mut() {
                *p = adc_quantize(*p, bits, full_scale);
            }
        }
        recordings.push(powers);
    }

    let i180 = recordings.pop().expect("three phase states were recorded");
    let i90 = recordings.pop().expect("three phase states were recorded");
    let i0 = recordings.pop().expect("three phase states were recorded");
    let triplet = HologramTriplet::new(i0, i90, i180, geom.id())?;
    Ok(AcquisitionRecord {
        triplet,
        truth: e_o.clone(),
        config_used: cfg.clone(),
        seed_state: cfg.seed,
        full_scale,
        clipped,
    })
}

/// Sweep the object-wave noise level and report the mean RMS field error
/// of phase-shifting recovery at each sigma.
///
/// For every sigma, `trials` records are acquired with per-trial seeds
/// `derive_seed(cfg.seed, trial)`; trial seeds are shared across sigmas
/// (common random numbers), which makes the returned curve smooth in
/// sigma at modest trial counts. Recovery uses the nominal reference.
/// Returns `(sigma, mean RMS per-unit error)` pairs in input order.
pub fn noise_sweep(
    e_o: &FieldSnapshot,
    rw: &ReferenceWave,
    geom: &ArrayGeometry,
    cfg: &FrontendConfig,
    sigmas: &[f64],
    trials: u32,
) -> Result<Vec<(f64, f64)>, HisError> {
    assert!(trials >= 1, "noise sweep needs at least one trial");
    let mut out = Vec::with_capacity(sigmas.len());
    for &sigma in sigmas {
        let mut rms_sum = 0.0;
        for trial in 0..trials {
            let trial_cfg = FrontendConfig {
                awgn_sigma: sigma,
                seed: derive_seed(cfg.seed, trial as u64),
                ..cfg.clone()
            };
            let record = acquire(e_o, rw, geom, &trial_cfg)?;
            let recovered = psi_recover(&record.triplet, rw)?;
            let sq_sum: f64 = recovered
                .values()
                .iter()
                .zip(e_o.values())
                .map(|(r, t)| (r - t).norm_sqr())
                .sum();
            rms_sum += (sq_sum / e_o.len() as f64).sqrt();
        }
        out.push((sigma, rms_sum / trials as f64));
    }
    Ok(out)
}
