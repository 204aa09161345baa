//! Hologram formation and phase-shifting recovery.
//!
//! Each antenna unit mixes the incoming object wave with the local
//! reference and detects only power, so a single recording at unit k is
//! the interference pattern
//!
//! ```text
//! I_k = |e_o_k + e_r_k|^2
//!     = |e_o_k|^2 + |e_r_k|^2 + e_o_k * conj(e_r_k) + conj(e_o_k) * e_r_k
//! ```
//!
//! The last two terms carry the object phase but are stuck together with
//! their conjugates; multiplying a single hologram by the reference
//! ("naive reconstruction") therefore yields a DC term, the object wave,
//! and a twin-image artifact of exactly the same strength — see
//! [`naive_reconstruct`].
//!
//! Stepping the reference phase through 0, 90 and 180 degrees gives three
//! holograms from which the complex object wave follows in closed form:
//!
//! ```text
//! e_o = (1 - j) / (4 * conj(e_r)) * [ (I(0) - I(90)) + j * (I(90) - I(180)) ]
//! ```
//!
//! a three-step variant of phase-shifting interferometry. With an ideal
//! front end the identity is algebraically exact, so [`psi_recover`]
//! inverts [`synthesize_triplet`] to floating-point precision.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::array::{reference_field, ArrayGeometry, FieldSnapshot, GeometryId, ReferenceWave};
use crate::error::HisError;

/// Reference phase offsets of the three acquisition states, radians.
pub const PHASE_STEPS: [f64; 3] = [0.0, FRAC_PI_2, PI];

/// Tolerance on per-unit object amplitude spread above which the
/// three-term plane-wave decomposition is refused.
const AMPLITUDE_UNIFORMITY_TOL: f64 = 1e-9;

/// The three power recordings of one phase-shifting cycle, per unit, with
/// reference phase offsets of 0, 90 and 180 degrees.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HologramTriplet {
    i0: Vec<f64>,
    i90: Vec<f64>,
    i180: Vec<f64>,
    geometry_id: GeometryId,
}

impl HologramTriplet {
    /// Wrap three recordings, checking that they are equally long, match
    /// the geometry, and contain only finite non-negative powers.
    pub fn new(
        i0: Vec<f64>,
        i90: Vec<f64>,
        i180: Vec<f64>,
        geometry_id: GeometryId,
    ) -> Result<Self, HisError> {
        let n = geometry_id.unit_count();
        for channel in [&i0, &i90, &i180] {
            if channel.len() != n {
                return Err(HisError::DimensionMismatch {
                    expected: n,
                    actual: channel.len(),
                });
            }
            for (unit, &value) in channel.iter().enumerate() {
                if !(value.is_finite() && value >= 0.0) {
                    return Err(HisError::InvalidPower { value, unit });
                }
            }
        }
        Ok(Self {
            i0,
            i90,
            i180,
            geometry_id,
        })
    }

    /// Recording with the reference in its nominal (0 degree) state.
    pub fn i0(&self) -> &[f64] {
        &self.i0
    }

    /// Recording with the reference advanced by 90 degrees.
    pub fn i90(&self) -> &[f64] {
        &self.i90
    }

    /// Recording with the reference advanced by 180 degrees.
    pub fn i180(&self) -> &[f64] {
        &self.i180
    }

    pub fn geometry_id(&self) -> GeometryId {
        self.geometry_id
    }

    /// Number of units per recording.
    pub fn len(&self) -> usize {
        self.i0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.i0.is_empty()
    }
}

/// Power of the interference between object and reference fields at every
/// unit: `|e_o_k + e_r_k|^2`.
///
/// Both snapshots must come from the same geometry.
pub fn form_hologram(e_o: &FieldSnapshot, e_r: &FieldSnapshot) -> Result<Vec<f64>, HisError> {
    if e_o.len() != e_r.len() {
        return Err(HisError::DimensionMismatch {
            expected: e_o.len(),
            actual: e_r.len(),
        });
    }
    if e_o.geometry_id() != e_r.geometry_id() {
        return Err(HisError::GeometryMismatch);
    }
    Ok(e_o
        .values()
        .iter()
        .zip(e_r.values())
        .map(|(o, r)| (o + r).norm_sqr())
        .collect())
}

/// Record one ideal phase-shifting cycle: three holograms of `e_o`
/// against the reference wave with phase offsets 0, 90 and 180 degrees.
pub fn synthesize_triplet(
    e_o: &FieldSnapshot,
    rw: &ReferenceWave,
    geom: &ArrayGeometry,
) -> Result<HologramTriplet, HisError> {
    if e_o.geometry_id() != geom.id() {
        return Err(HisError::GeometryMismatch);
    }
    let mut channels = Vec::with_capacity(3);
    for offset in PHASE_STEPS {
        let e_r = reference_field(&rw.with_phase_offset(offset), geom)?;
        channels.push(form_hologram(e_o, &e_r)?);
    }
    let i180 = channels.pop().expect("three channels were just recorded");
    let i90 = channels.pop().expect("three channels were just recorded");
    let i0 = channels.pop().expect("three channels were just recorded");
    HologramTriplet::new(i0, i90, i180, geom.id())
}

/// Recover the complex object wave from a phase-shifted triplet.
///
/// Applies the closed-form three-step inversion unit by unit, dividing by
/// the conjugate of the reference in its nominal state (including any
/// per-unit gain attached to `rw`). The reference must be non-zero at
/// every unit; otherwise the division is singular.
///
/// For triplets recorded through an ideal front end this reproduces the
/// object wave to floating-point precision; noise and quantization in the
/// recordings propagate linearly into the estimate.
pub fn psi_recover(
    triplet: &HologramTriplet,
    rw: &ReferenceWave,
) -> Result<FieldSnapshot, HisError> {
    let n = triplet.len();
    if rw.amplitude() == 0.0 {
        return Err(HisError::SingularReference);
    }
    if let Some(gains) = rw.per_unit_gain() {
        if gains.len() != n {
            return Err(HisError::DimensionMismatch {
                expected: n,
                actual: gains.len(),
            });
        }
        if gains.iter().any(|g| g.norm_sqr() == 0.0) {
            return Err(HisError::SingularReference);
        }
    }
    let base = Complex64::from_polar(rw.amplitude(), rw.global_phase());
    let coeff = Complex64::new(0.25, -0.25); // (1 - j) / 4
    let values = (0..n)
        .map(|k| {
            let e_r = match rw.per_unit_gain() {
                Some(gains) => base * gains[k],
                None => base,
            };
            let combined = Complex64::new(
                triplet.i0()[k] - triplet.i90()[k],
                triplet.i90()[k] - triplet.i180()[k],
            );
            coeff * combined / e_r.conj()
        })
        .collect();
    Ok(FieldSnapshot::from_parts(values, triplet.geometry_id()))
}

/// The three per-unit terms of naive single-hologram reconstruction,
/// `e_r_k * I_k` split as DC + object + conjugate twin.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionComponents {
    /// `(|e_o_k|^2 + |e_r_k|^2) * e_r_k` — the reference-shaped DC term.
    pub dc_term: Vec<Complex64>,
    /// `|e_r_k|^2 * e_o_k` — the object wave, scaled.
    pub object_term: Vec<Complex64>,
    /// `e_r_k^2 * conj(e_o_k)` — the twin image; same magnitude as the
    /// object term, which is why power-only recording needs phase
    /// shifting at all.
    pub conjugate_term: Vec<Complex64>,
}

impl ReconstructionComponents {
    /// Per-unit sum of the three terms; equals `e_r_k * I_k` for the
    /// nominal-state hologram.
    pub fn total(&self) -> Vec<Complex64> {
        self.dc_term
            .iter()
            .zip(&self.object_term)
            .zip(&self.conjugate_term)
            .map(|((d, o), c)| d + o + c)
            .collect()
    }
}

/// Split naive reconstruction of the nominal-state hologram into its DC,
/// object, and conjugate-twin terms.
///
/// The textbook split assumes a single plane wave, i.e. uniform per-unit
/// object amplitude; inputs whose amplitude spread exceeds 1e-9 are
/// refused rather than silently mislabelled.
pub fn naive_reconstruct(
    e_o: &FieldSnapshot,
    rw: &ReferenceWave,
    geom: &ArrayGeometry,
) -> Result<ReconstructionComponents, HisError> {
    if e_o.geometry_id() != geom.id() {
        return Err(HisError::GeometryMismatch);
    }
    let mags: Vec<f64> = e_o.values().iter().map(|v| v.norm()).collect();
    let max = mags.iter().cloned().fold(f64::MIN, f64::max);
    let min = mags.iter().cloned().fold(f64::MAX, f64::min);
    let spread = max - min;
    if spread > AMPLITUDE_UNIFORMITY_TOL {
        return Err(HisError::DecompositionUndefined {
            spread,
            tolerance: AMPLITUDE_UNIFORMITY_TOL,
        });
    }
    let e_r = reference_field(rw, geom)?;
    let mut dc_term = Vec::with_capacity(e_o.len());
    let mut object_term = Vec::with_capacity(e_o.len());
    let mut conjugate_term = Vec::with_capacity(e_o.len());
    for (o, r) in e_o.values().iter().zip(e_r.values()) {
        dc_term.push((o.norm_sqr() + r.norm_sqr()) * r);
        object_term.push(r.norm_sqr() * o);
        conjugate_term.push(r * r * o.conj());
    }
    Ok(ReconstructionComponents {
        dc_term,
        object_term,
        conjugate_term,
    })
}

/// Unwrap a sequence of phases in radians: adjust each successive value by
/// a multiple of 2*pi so that no step exceeds pi in magnitude.
///
/// Valid whenever the true underlying increment stays below pi, which
/// holds for the default geometry over the whole scan range (maximum
/// per-column increment 0.52 * 2*pi * sin(60 deg) = 2.83 rad).
pub fn unwrap_phases(phases: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(phases.len());
    let mut previous: Option<f64> = None;
    for &p in phases {
        let value = match previous {
            None => p,
            Some(prev) => {
                let d = p - prev;
                prev + d - TAU * (d / TAU).round()
            }
        };
        out.push(value);
        previous = Some(value);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::{default_his_geometry, object_field, steering_vector, PlaneWaveSource};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn uniform_snapshot(value: Complex64, geom: &ArrayGeometry) -> FieldSnapshot {
        FieldSnapshot::from_values(vec![value; geom.unit_count()], geom).unwrap()
    }

    #[test]
    fn hologram_of_half_amplitude_source_against_unit_reference() {
        // |0.5 * exp(j*pi/3) + 1|^2 = 1.25 + cos(pi/3) = 1.75
        let geom = default_his_geometry();
        let e_o = uniform_snapshot(Complex64::from_polar(0.5, PI / 3.0), &geom);
        let e_r = uniform_snapshot(Complex64::new(1.0, 0.0), &geom);
        let holo = form_hologram(&e_o, &e_r).unwrap();
        assert_eq!(holo.len(), 32);
        for v in holo {
            assert!((v - 1.75).abs() < 1e-12, "got {v}");
        }
    }

    #[test]
    fn holograms_are_non_negative_for_arbitrary_fields() {
        let geom = default_his_geometry();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let wave = |rng: &mut ChaCha8Rng| {
                let vals = (0..geom.unit_count())
                    .map(|_| {
                        Complex64::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0))
                    })
                    .collect();
                FieldSnapshot::from_values(vals, &geom).unwrap()
            };
            let e_o = wave(&mut rng);
            let e_r = wave(&mut rng);
            for (h, (o, r)) in form_hologram(&e_o, &e_r)
                .unwrap()
                .iter()
                .zip(e_o.values().iter().zip(e_r.values()))
            {
                assert!(*h >= 0.0);
                assert!((h - (o + r).norm_sqr()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn form_hologram_rejects_snapshots_from_different_geometries() {
        let a = default_his_geometry();
        let b = ArrayGeometry::new(4, 8, 0.055, 0.060).unwrap();
        let e_a = uniform_snapshot(Complex64::new(1.0, 0.0), &a);
        let e_b = uniform_snapshot(Complex64::new(1.0, 0.0), &b);
        assert_eq!(
            form_hologram(&e_a, &e_b).unwrap_err(),
            HisError::GeometryMismatch
        );
    }

    #[test]
    fn broadside_unit_waves_give_the_4_2_0_triplet() {
        // e_o = 1 and e_r = 1: |1+1|^2 = 4, |1+j|^2 = 2, |1-1|^2 = 0.
        let geom = default_his_geometry();
        let src = PlaneWaveSource::new(1.0, 0.0, 2.6e9, 0.0).unwrap();
        let e_o = object_field(&src, &geom);
        let rw = ReferenceWave::new(1.0, 2.6e9, 0.0).unwrap();
        let triplet = synthesize_triplet(&e_o, &rw, &geom).unwrap();
        for k in 0..32 {
            assert!((triplet.i0()[k] - 4.0).abs() < 1e-12);
            assert!((triplet.i90()[k] - 2.0).abs() < 1e-12);
            assert!(triplet.i180()[k].abs() < 1e-12);
        }
    }

    #[test]
    fn triplet_linear_combinations_reproduce_sum_and_cross_terms() {
        // I(0)+I(180) = 2(Ao^2+Ar^2), I(0)-I(180) = 4 Re(e_o conj(e_r)),
        // 2 I(90)-I(0)-I(180) = 4 Im(e_o conj(e_r)) at every unit.
        let geom = default_his_geometry();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..200 {
            let a_o = rng.random_range(1e-6..2.0);
            let a_r = rng.random_range(1e-6..10.0);
            let theta = rng.random_range(-60.0..60.0);
            let phase_o = rng.random_range(0.0..TAU);
            let phase_r = rng.random_range(0.0..TAU);
            let src = PlaneWaveSource::new(a_o, theta, 2.6e9, phase_o).unwrap();
            let e_o = object_field(&src, &geom);
            let rw = ReferenceWave::new(a_r, 2.6e9, phase_r).unwrap();
            let e_r = reference_field(&rw, &geom).unwrap();
            let triplet = synthesize_triplet(&e_o, &rw, &geom).unwrap();
            let power_sum = 2.0 * (a_o * a_o + a_r * a_r);
            for k in 0..geom.unit_count() {
                let cross = e_o.values()[k] * e_r.values()[k].conj();
                assert!(
                    (triplet.i0()[k] + triplet.i180()[k] - power_sum).abs() < 1e-12,
                    "sum identity"
                );
                assert!(
                    (triplet.i0()[k] - triplet.i180()[k] - 4.0 * cross.re).abs() < 1e-12,
                    "real cross identity"
                );
                assert!(
                    (2.0 * triplet.i90()[k] - triplet.i0()[k] - triplet.i180()[k] - 4.0 * cross.im)
                        .abs()
                        < 1e-12,
                    "imaginary cross identity"
                );
            }
        }
    }

    #[test]
    fn recovery_inverts_synthesis_to_machine_precision() {
        let geom = default_his_geometry();
        let src = PlaneWaveSource::new(0.8, 37.5, 2.6e9, 2.2).unwrap();
        let e_o = object_field(&src, &geom);
        let rw = ReferenceWave::new(1.3, 2.6e9, 0.4).unwrap();
        let triplet = synthesize_triplet(&e_o, &rw, &geom).unwrap();
        let recovered = psi_recover(&triplet, &rw).unwrap();
        for (rec, truth) in recovered.values().iter().zip(e_o.values()) {
            assert!((rec - truth).norm() < 1e-12, "rec {rec}, truth {truth}");
        }
    }

    #[test]
    fn recovery_stays_exact_with_per_unit_reference_gain() {
        // A known divider imbalance is invertible: the recovery divides by
        // the same per-unit reference it was recorded with.
        let geom = default_his_geometry();
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let gains: Vec<Complex64> = (0..geom.unit_count())
            .map(|_| Complex64::new(rng.random_range(0.7..1.3), rng.random_range(-0.2..0.2)))
            .collect();
        let src = PlaneWaveSource::new(1.1, -25.0, 2.6e9, 0.9).unwrap();
        let e_o = object_field(&src, &geom);
        let rw = ReferenceWave::new(1.0, 2.6e9, 0.0)
            .unwrap()
            .with_per_unit_gain(gains);
        let triplet = synthesize_triplet(&e_o, &rw, &geom).unwrap();
        let recovered = psi_recover(&triplet, &rw).unwrap();
        for (rec, truth) in recovered.values().iter().zip(e_o.values()) {
            assert!((rec - truth).norm() < 1e-11);
        }
    }

    #[test]
    fn recovery_rejects_a_zero_reference() {
        let geom = default_his_geometry();
        let e_o = uniform_snapshot(Complex64::new(1.0, 0.0), &geom);
        let rw_ok = ReferenceWave::new(1.0, 2.6e9, 0.0).unwrap();
        let triplet = synthesize_triplet(&e_o, &rw_ok, &geom).unwrap();

        let rw_zero = ReferenceWave::new(0.0, 2.6e9, 0.0).unwrap();
        assert_eq!(
            psi_recover(&triplet, &rw_zero).unwrap_err(),
            HisError::SingularReference
        );

        let mut gains = vec![Complex64::new(1.0, 0.0); geom.unit_count()];
        gains[7] = Complex64::new(0.0, 0.0);
        let rw_hole = ReferenceWave::new(1.0, 2.6e9, 0.0)
            .unwrap()
            .with_per_unit_gain(gains);
        assert_eq!(
            psi_recover(&triplet, &rw_hole).unwrap_err(),
            HisError::SingularReference
        );
    }

    #[test]
    fn recovery_checks_gain_length_against_the_triplet() {
        let geom = default_his_geometry();
        let e_o = uniform_snapshot(Complex64::new(1.0, 0.0), &geom);
        let rw = ReferenceWave::new(1.0, 2.6e9, 0.0).unwrap();
        let triplet = synthesize_triplet(&e_o, &rw, &geom).unwrap();
        let rw_short = rw.with_per_unit_gain(vec![Complex64::new(1.0, 0.0); 5]);
        assert_eq!(
            psi_recover(&triplet, &rw_short).unwrap_err(),
            HisError::DimensionMismatch {
                expected: 32,
                actual: 5
            }
        );
    }

    #[test]
    fn triplet_constructor_rejects_negative_power_and_bad_lengths() {
        let geom = default_his_geometry();
        let good = vec![1.0; 32];
        let mut bad = good.clone();
        bad[3] = -0.5;
        assert_eq!(
            HologramTriplet::new(good.clone(), bad, good.clone(), geom.id()).unwrap_err(),
            HisError::InvalidPower {
                value: -0.5,
                unit: 3
            }
        );
        assert_eq!(
            HologramTriplet::new(good.clone(), good.clone(), vec![1.0; 31], geom.id()).unwrap_err(),
            HisError::DimensionMismatch {
                expected: 32,
                actual: 31
            }
        );
        assert!(HologramTriplet::new(good.clone(), good.clone(), good, geom.id()).is_ok());
    }

    #[test]
    fn naive_reconstruction_terms_sum_to_reference_times_hologram() {
        let geom = default_his_geometry();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..100 {
            let a_o = rng.random_range(1e-3..2.0);
            let a_r = rng.random_range(1e-3..4.0);
            let src = PlaneWaveSource::new(
                a_o,
                rng.random_range(-60.0..60.0),
                2.6e9,
                rng.random_range(0.0..TAU),
            )
            .unwrap();
            let e_o = object_field(&src, &geom);
            let rw = ReferenceWave::new(a_r, 2.6e9, rng.random_range(0.0..TAU)).unwrap();
            let parts = naive_reconstruct(&e_o, &rw, &geom).unwrap();
            let e_r = reference_field(&rw, &geom).unwrap();
            let holo = form_hologram(&e_o, &e_r).unwrap();
            for (k, total) in parts.total().iter().enumerate() {
                let direct = e_r.values()[k] * holo[k];
                assert!((total - direct).norm() < 1e-12, "unit {k}");
                // Twin image is exactly as strong as the object term.
                assert!(
                    (parts.conjugate_term[k].norm() - a_r * a_r * a_o).abs() < 1e-12,
                    "conjugate magnitude"
                );
                assert!(
                    (parts.object_term[k].norm() - parts.conjugate_term[k].norm()).abs() < 1e-12,
                    "object and twin magnitudes"
                );
            }
        }
    }

    #[test]
    fn naive_reconstruction_object_term_is_a_scaled_replica() {
        let geom = default_his_geometry();
        let src = PlaneWaveSource::new(0.6, 18.0, 2.6e9, 1.0).unwrap();
        let e_o = object_field(&src, &geom);
        let rw = ReferenceWave::new(2.0, 2.6e9, 0.0).unwrap();
        let parts = naive_reconstruct(&e_o, &rw, &geom).unwrap();
        for (term, truth) in parts.object_term.iter().zip(e_o.values()) {
            assert!((term - 4.0 * truth).norm() < 1e-12);
        }
        // DC term is spatially uniform for a plane wave and uniform reference.
        let first = parts.dc_term[0];
        for term in &parts.dc_term {
            assert!((term - first).norm() < 1e-12);
        }
    }

    #[test]
    fn naive_reconstruction_refuses_non_uniform_object_amplitude() {
        let geom = default_his_geometry();
        let mut values = vec![Complex64::new(1.0, 0.0); geom.unit_count()];
        values[0] = Complex64::new(1.5, 0.0);
        let e_o = FieldSnapshot::from_values(values, &geom).unwrap();
        let rw = ReferenceWave::new(1.0, 2.6e9, 0.0).unwrap();
        match naive_reconstruct(&e_o, &rw, &geom).unwrap_err() {
            HisError::DecompositionUndefined { spread, tolerance } => {
                assert!((spread - 0.5).abs() < 1e-12);
                assert_eq!(tolerance, 1e-9);
            }
            other => panic!("expected DecompositionUndefined, got {other:?}"),
        }
    }

    #[test]
    fn unwrap_recovers_a_linear_ramp_from_wrapped_phases() {
        let slope = 2.1;
        let truth: Vec<f64> = (0..8).map(|k| 0.3 + slope * k as f64).collect();
        let wrapped: Vec<f64> = truth.iter().map(|p| p.rem_euclid(TAU)).collect();
        let unwrapped = unwrap_phases(&wrapped);
        for (u, t) in unwrapped.iter().zip(&truth) {
            // Unwrapping is relative: compare increments, not offsets.
            assert!(((u - unwrapped[0]) - (t - truth[0])).abs() < 1e-12);
        }
    }

    #[test]
    fn unwrap_handles_trivial_sequences() {
        assert!(unwrap_phases(&[]).is_empty());
        assert_eq!(unwrap_phases(&[1.25]), vec![1.25]);
        let constant = unwrap_phases(&[0.5, 0.5, 0.5]);
        assert_eq!(constant, vec![0.5, 0.5, 0.5]);
    }

    #[test]
    fn recovered_phase_ramp_matches_the_steering_phase_at_40_degrees() {
        // End-to-end phase check: recover the field at 40 degrees and
        // verify the per-column unwrapped phase increment equals
        // 2*pi * pitch * sin(40 deg) / lambda = 2.1016 rad.
        let geom = default_his_geometry();
        let src = PlaneWaveSource::new(1.0, 40.0, 2.6e9, 0.0).unwrap();
        let e_o = object_field(&src, &geom);
        let rw = ReferenceWave::new(1.0, 2.6e9, 0.0).unwrap();
        let triplet = synthesize_triplet(&e_o, &rw, &geom).unwrap();
        let recovered = psi_recover(&triplet, &rw).unwrap();

        let lambda = crate::array::wavelength(2.6e9).unwrap();
        let expected = TAU * 0.060 * 40.0_f64.to_radians().sin() / lambda;
        for row in 0..geom.n_rows() {
            let phases: Vec<f64> = (0..geom.n_cols())
                .map(|s| recovered.values()[row * geom.n_cols() + s].arg())
                .collect();
            let unwrapped = unwrap_phases(&phases);
            for s in 0..geom.n_cols() - 1 {
                assert!(
                    (unwrapped[s + 1] - unwrapped[s] - expected).abs() < 1e-9,
                    "row {row}, col {s}"
                );
            }
        }
        let sv = steering_vector(&geom, 40.0, 2.6e9).unwrap();
        for (rec, ideal) in recovered.values().iter().zip(sv.values()) {
            assert!((rec - ideal).norm() < 1e-11);
        }
    }
}
