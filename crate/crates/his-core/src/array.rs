//! Array geometry, incident waves, and per-unit complex field snapshots.
//!
//! The surface is a uniform rectangular grid of antenna units in the z = 0
//! plane. A far-field source arrives as a plane wave from an azimuth angle
//! measured in the horizontal (x–z) plane, so the phase progression across
//! the surface depends only on the unit's x coordinate. All fields are
//! complex baseband phasors: the common `exp(j*omega*t)` factor is
//! suppressed, and a snapshot holds one phasor per unit in row-major
//! order.
//!
//! Units at the boundary: constructors take millimetres/degrees only in
//! the experiment-config layer; everything here is metres, radians, hertz.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::HisError;

/// Free-space propagation speed in metres per second.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Free-space wavelength `c / f` in metres.
///
/// ```
/// let lambda = his_core::wavelength(2.6e9).unwrap();
/// assert!((lambda - 0.11530).abs() < 1e-5);
/// ```
pub fn wavelength(carrier_hz: f64) -> Result<f64, HisError> {
    if !(carrier_hz.is_finite() && carrier_hz > 0.0) {
        return Err(HisError::InvalidFrequency(carrier_hz));
    }
    Ok(SPEED_OF_LIGHT / carrier_hz)
}

/// Compact identity of an array geometry, used to tag snapshots so that
/// fields sampled on one surface are not accidentally combined with
/// another. Two geometries get the same id exactly when their shape and
/// pitches are bit-identical.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeometryId {
    rows: u32,
    cols: u32,
    pitch_h_bits: u64,
    pitch_v_bits: u64,
}

impl GeometryId {
    /// Number of units on the surface this id describes.
    pub fn unit_count(&self) -> usize {
        self.rows as usize * self.cols as usize
    }
}

/// Uniform rectangular grid of antenna units in the z = 0 plane.
///
/// Unit (p, s) — row p, column s — sits at `(s * pitch_h, p * pitch_v, 0)`
/// with the corner unit at the origin. Units are enumerated row-major:
/// index = p * n_cols + s.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayGeometry {
    n_rows: usize,
    n_cols: usize,
    pitch_h: f64,
    pitch_v: f64,
    positions: Vec<[f64; 3]>,
}

impl ArrayGeometry {
    /// Build a grid with `n_rows x n_cols` units spaced `pitch_h` metres
    /// along x (columns) and `pitch_v` metres along y (rows).
    pub fn new(n_rows: usize, n_cols: usize, pitch_h: f64, pitch_v: f64) -> Result<Self, HisError> {
        if n_rows == 0 || n_cols == 0 {
            return Err(HisError::InvalidGeometry(format!(
                "need at least one row and one column, got {n_rows} x {n_cols}"
            )));
        }
        if !(pitch_h.is_finite() && pitch_h > 0.0) || !(pitch_v.is_finite() && pitch_v > 0.0) {
            return Err(HisError::InvalidGeometry(format!(
                "unit pitch must be positive and finite, got {pitch_h} m x {pitch_v} m"
            )));
        }
        let mut positions = Vec::with_capacity(n_rows * n_cols);
        for p in 0..n_rows {
            for s in 0..n_cols {
                positions.push([s as f64 * pitch_h, p as f64 * pitch_v, 0.0]);
            }
        }
        Ok(Self {
            n_rows,
            n_cols,
            pitch_h,
            pitch_v,
            positions,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    /// Horizontal (column) spacing in metres.
    pub fn pitch_h(&self) -> f64 {
        self.pitch_h
    }

    /// Vertical (row) spacing in metres.
    pub fn pitch_v(&self) -> f64 {
        self.pitch_v
    }

    pub fn unit_count(&self) -> usize {
        self.positions.len()
    }

    /// Unit positions in metres, row-major.
    pub fn positions(&self) -> &[[f64; 3]] {
        &self.positions
    }

    /// Position of unit (row, col) in metres.
    ///
    /// # Panics
    /// Panics if the indices are out of range.
    pub fn position(&self, row: usize, col: usize) -> [f64; 3] {
        assert!(
            row < self.n_rows && col < self.n_cols,
            "unit index out of range"
        );
        self.positions[row * self.n_cols + col]
    }

    /// Overall panel footprint `(width_x, height_y)` in metres, counting a
    /// full pitch-sized cell per unit.
    pub fn footprint(&self) -> (f64, f64) {
        (
            self.n_cols as f64 * self.pitch_h,
            self.n_rows as f64 * self.pitch_v,
        )
    }

    pub fn id(&self) -> GeometryId {
        GeometryId {
            rows: self.n_rows as u32,
            cols: self.n_cols as u32,
            pitch_h_bits: self.pitch_h.to_bits(),
            pitch_v_bits: self.pitch_v.to_bits(),
        }
    }
}

/// The desk-scale surface used throughout: 4 rows by 8 columns of units on
/// a 60 mm square pitch, 32 units total, fitting a 250 mm x 480 mm panel.
pub fn default_his_geometry() -> ArrayGeometry {
    ArrayGeometry::new(4, 8, 0.060, 0.060).expect("built-in geometry parameters are valid")
}

/// One complex phasor per unit, tagged with the geometry it was sampled
/// on. Row-major order matches [`ArrayGeometry::positions`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSnapshot {
    values: Vec<Complex64>,
    geometry_id: GeometryId,
}

impl FieldSnapshot {
    /// Wrap externally computed per-unit values, checking the count
    /// against the geometry.
    pub fn from_values(values: Vec<Complex64>, geom: &ArrayGeometry) -> Result<Self, HisError> {
        if values.len() != geom.unit_count() {
            return Err(HisError::DimensionMismatch {
                expected: geom.unit_count(),
                actual: values.len(),
            });
        }
        Ok(Self {
            values,
            geometry_id: geom.id(),
        })
    }

    pub(crate) fn from_parts(values: Vec<Complex64>, geometry_id: GeometryId) -> Self {
        Self {
            values,
            geometry_id,
        }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn geometry_id(&self) -> GeometryId {
        self.geometry_id
    }

    /// Largest per-unit magnitude, 0 for an empty snapshot.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// A far-field plane wave impinging on the surface from `azimuth_deg` in
/// the horizontal plane (0 = broadside, positive towards +x).
///
/// Construction validates every field, so downstream synthesis cannot
/// fail: amplitude non-negative and finite, azimuth within [-90, 90],
/// carrier positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWaveSource {
    amplitude: f64,
    azimuth_deg: f64,
    carrier_hz: f64,
    phase0: f64,
}

impl PlaneWaveSource {
    pub fn new(
        amplitude: f64,
        azimuth_deg: f64,
        carrier_hz: f64,
        phase0: f64,
    ) -> Result<Self, HisError> {
        if !(amplitude.is_finite() && amplitude >= 0.0) {
            return Err(HisError::NegativeAmplitude(amplitude));
        }
        if !(azimuth_deg.is_finite() && (-90.0..=90.0).contains(&azimuth_deg)) {
            return Err(HisError::AzimuthOutOfRange(azimuth_deg));
        }
        wavelength(carrier_hz)?;
        if !phase0.is_finite() {
            return Err(HisError::InvalidGeometry(format!(
                "source phase must be finite, got {phase0}"
            )));
        }
        Ok(Self {
            amplitude,
            azimuth_deg,
            carrier_hz,
            phase0,
        })
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn azimuth_deg(&self) -> f64 {
        self.azimuth_deg
    }

    pub fn carrier_hz(&self) -> f64 {
        self.carrier_hz
    }

    /// Phase of the wave at the origin unit, radians.
    pub fn phase0(&self) -> f64 {
        self.phase0
    }
}

/// The locally generated reference wave distributed to every unit.
///
/// Nominally the divider network feeds all units with equal amplitude and
/// phase; `per_unit_gain` models departures from that (static imbalance),
/// multiplying the nominal phasor element-wise.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceWave {
    amplitude: f64,
    carrier_hz: f64,
    global_phase: f64,
    per_unit_gain: Option<Vec<Complex64>>,
}

impl ReferenceWave {
    pub fn new(amplitude: f64, carrier_hz: f64, global_phase: f64) -> Result<Self, HisError> {
        if !(amplitude.is_finite() && amplitude >= 0.0) {
            return Err(HisError::NegativeAmplitude(amplitude));
        }
        wavelength(carrier_hz)?;
        if !global_phase.is_finite() {
            return Err(HisError::InvalidGeometry(format!(
                "reference phase must be finite, got {global_phase}"
            )));
        }
        Ok(Self {
            amplitude,
            carrier_hz,
            global_phase,
            per_unit_gain: None,
        })
    }

    /// Attach a static per-unit complex gain (divider imbalance). Length
    /// is checked where the wave meets a geometry, in
    /// [`reference_field`].
    pub fn with_per_unit_gain(mut self, gains: Vec<Complex64>) -> Self {
        self.per_unit_gain = Some(gains);
        self
    }

    /// Same wave with the global phase advanced by `delta` radians — the
    /// phase-shifter control action.
    pub fn with_phase_offset(&self, delta: f64) -> Self {
        let mut out = self.clone();
        out.global_phase += delta;
        out
    }

    /// Same wave with the global phase replaced outright.
    pub fn with_global_phase(&self, phase: f64) -> Self {
        let mut out = self.clone();
        out.global_phase = phase;
        out
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn carrier_hz(&self) -> f64 {
        self.carrier_hz
    }

    pub fn global_phase(&self) -> f64 {
        self.global_phase
    }

    pub fn per_unit_gain(&self) -> Option<&[Complex64]> {
        self.per_unit_gain.as_deref()
    }
}

/// Unit-modulus steering vector of the surface towards `azimuth_deg`.
///
/// Entry k is `exp(j * 2*pi/lambda * sin(azimuth) * x_k)` where `x_k` is
/// the unit's horizontal position; a plane wave from that azimuth produces
/// exactly this phase progression. With the default 60 mm pitch the
/// spacing is 0.52 wavelengths at 2.6 GHz, so the mapping from azimuth to
/// phase gradient stays unambiguous over the whole [-60, 60] degree scan.
pub fn steering_vector(
    geom: &ArrayGeometry,
    azimuth_deg: f64,
    carrier_hz: f64,
) -> Result<FieldSnapshot, HisError> {
    if !(azimuth_deg.is_finite() && (-90.0..=90.0).contains(&azimuth_deg)) {
        return Err(HisError::AzimuthOutOfRange(azimuth_deg));
    }
    let lambda = wavelength(carrier_hz)?;
    let k_sin = TAU / lambda * azimuth_deg.to_radians().sin();
    let values = geom
        .positions()
        .iter()
        .map(|p| Complex64::from_polar(1.0, k_sin * p[0]))
        .collect();
    Ok(FieldSnapshot::from_parts(values, geom.id()))
}

/// Per-unit phasors of a plane-wave source sampled on the surface: the
/// steering vector scaled by `amplitude * exp(j*phase0)`.
pub fn object_field(src: &PlaneWaveSource, geom: &ArrayGeometry) -> FieldSnapshot {
    let sv = steering_vector(geom, src.azimuth_deg(), src.carrier_hz())
        .expect("PlaneWaveSource construction already validated azimuth and carrier");
    let scale = Complex64::from_polar(src.amplitude, src.phase0);
    let values = sv.values.iter().map(|v| scale * v).collect();
    FieldSnapshot::from_parts(values, sv.geometry_id)
}

/// Per-unit phasors of the reference wave on the surface: the nominal
/// `amplitude * exp(j*global_phase)` at every unit, times the per-unit
/// gain when one is attached.
pub fn reference_field(
    rw: &ReferenceWave,
    geom: &ArrayGeometry,
) -> Result<FieldSnapshot, HisError> {
    let base = Complex64::from_polar(rw.amplitude, rw.global_phase);
    let values = match rw.per_unit_gain() {
        None => vec![base; geom.unit_count()],
        Some(gains) => {
            if gains.len() != geom.unit_count() {
                return Err(HisError::DimensionMismatch {
                    expected: geom.unit_count(),
                    actual: gains.len(),
                });
            }
            gains.iter().map(|g| base * g).collect()
        }
    };
    Ok(FieldSnapshot::from_parts(values, geom.id()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64, what: &str) {
        assert!((a - b).abs() <= tol, "{what}: {a} vs {b} (tol {tol})");
    }

    #[test]
    fn wavelength_at_2_6_ghz_is_about_115_mm() {
        let lambda = wavelength(2.6e9).unwrap();
        assert_close(lambda, 0.11530, 1e-5, "wavelength(2.6 GHz)");
    }

    #[test]
    fn wavelength_rejects_non_positive_and_non_finite_frequencies() {
        for f in [0.0, -2.6e9, f64::NAN, f64::INFINITY] {
            assert!(
                matches!(wavelength(f), Err(HisError::InvalidFrequency(_))),
                "f = {f}"
            );
        }
    }

    #[test]
    fn default_geometry_has_32_units_on_60_mm_pitch() {
        let geom = default_his_geometry();
        assert_eq!(geom.n_rows(), 4);
        assert_eq!(geom.n_cols(), 8);
        assert_eq!(geom.unit_count(), 32);
        assert_eq!(geom.pitch_h(), 0.060);
        assert_eq!(geom.pitch_v(), 0.060);
    }

    #[test]
    fn default_geometry_fits_the_250_by_480_mm_panel() {
        let (width, height) = default_his_geometry().footprint();
        assert!(width <= 0.480 + 1e-12, "panel width {width} m");
        assert!(height <= 0.250 + 1e-12, "panel height {height} m");
    }

    #[test]
    fn positions_are_row_major_on_the_grid() {
        let geom = default_his_geometry();
        assert_eq!(geom.position(0, 0), [0.0, 0.0, 0.0]);
        assert_eq!(geom.position(0, 3), [0.180, 0.0, 0.0]);
        assert_eq!(geom.position(2, 0), [0.0, 0.120, 0.0]);
        // Row-major enumeration: unit 11 is row 1, col 3.
        assert_eq!(geom.positions()[11], geom.position(1, 3));
        // Every unit lies in the z = 0 plane.
        assert!(geom.positions().iter().all(|p| p[2] == 0.0));
    }

    #[test]
    fn geometry_rejects_empty_shapes_and_bad_pitch() {
        assert!(matches!(
            ArrayGeometry::new(0, 8, 0.06, 0.06),
            Err(HisError::InvalidGeometry(_))
        ));
        assert!(matches!(
            ArrayGeometry::new(4, 0, 0.06, 0.06),
            Err(HisError::InvalidGeometry(_))
        ));
        assert!(matches!(
            ArrayGeometry::new(4, 8, 0.0, 0.06),
            Err(HisError::InvalidGeometry(_))
        ));
        assert!(matches!(
            ArrayGeometry::new(4, 8, 0.06, -0.06),
            Err(HisError::InvalidGeometry(_))
        ));
        assert!(matches!(
            ArrayGeometry::new(4, 8, f64::NAN, 0.06),
            Err(HisError::InvalidGeometry(_))
        ));
    }

    #[test]
    fn geometry_ids_distinguish_different_surfaces() {
        let a = default_his_geometry();
        let b = ArrayGeometry::new(4, 8, 0.060, 0.060).unwrap();
        let c = ArrayGeometry::new(8, 4, 0.060, 0.060).unwrap();
        let d = ArrayGeometry::new(4, 8, 0.055, 0.060).unwrap();
        assert_eq!(a.id(), b.id());
        assert_ne!(a.id(), c.id());
        assert_ne!(a.id(), d.id());
        assert_eq!(a.id().unit_count(), 32);
    }

    #[test]
    fn steering_vector_at_broadside_is_all_ones() {
        let geom = default_his_geometry();
        let sv = steering_vector(&geom, 0.0, 2.6e9).unwrap();
        assert_eq!(sv.len(), 32);
        for v in sv.values() {
            assert_eq!(*v, Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn steering_vector_entries_have_unit_modulus() {
        let geom = default_his_geometry();
        for theta in [-90.0, -60.0, -17.3, 0.0, 5.0, 41.2, 90.0] {
            let sv = steering_vector(&geom, theta, 2.6e9).unwrap();
            for v in sv.values() {
                assert_close(v.norm(), 1.0, 1e-12, "steering modulus");
            }
        }
    }

    #[test]
    fn steering_vector_column_increment_matches_the_geometry() {
        // Per-column phase increment is 2*pi*pitch*sin(theta)/lambda;
        // check it at 40 degrees, where sin = 0.642788.
        let geom = default_his_geometry();
        let lambda = wavelength(2.6e9).unwrap();
        let expected = TAU * 0.060 * 40.0_f64.to_radians().sin() / lambda;
        let sv = steering_vector(&geom, 40.0, 2.6e9).unwrap();
        for s in 0..geom.n_cols() - 1 {
            let inc = (sv.values()[s + 1] * sv.values()[s].conj()).arg();
            assert_close(inc, expected, 1e-12, "column phase increment");
        }
        // And the rows repeat the same pattern (azimuth only).
        for p in 1..geom.n_rows() {
            for s in 0..geom.n_cols() {
                let a = sv.values()[p * geom.n_cols() + s];
                let b = sv.values()[s];
                assert!((a - b).norm() < 1e-12, "row repetition at ({p}, {s})");
            }
        }
        assert_close(expected, 2.1016, 1e-4, "increment magnitude at 40 deg");
    }

    #[test]
    fn steering_vector_of_opposite_azimuths_are_conjugates() {
        let geom = default_his_geometry();
        for theta in [10.0, 33.3, 60.0, 89.0] {
            let plus = steering_vector(&geom, theta, 2.6e9).unwrap();
            let minus = steering_vector(&geom, -theta, 2.6e9).unwrap();
            for (a, b) in plus.values().iter().zip(minus.values()) {
                assert!(
                    (a.conj() - b).norm() < 1e-12,
                    "conjugate symmetry at {theta}"
                );
            }
        }
    }

    #[test]
    fn steering_vector_rejects_out_of_range_azimuth() {
        let geom = default_his_geometry();
        assert!(matches!(
            steering_vector(&geom, 90.001, 2.6e9),
            Err(HisError::AzimuthOutOfRange(_))
        ));
        assert!(matches!(
            steering_vector(&geom, -120.0, 2.6e9),
            Err(HisError::AzimuthOutOfRange(_))
        ));
        assert!(matches!(
            steering_vector(&geom, f64::NAN, 2.6e9),
            Err(HisError::AzimuthOutOfRange(_))
        ));
    }

    #[test]
    fn object_field_with_unit_amplitude_and_zero_phase_is_the_steering_vector() {
        let geom = default_his_geometry();
        let src = PlaneWaveSource::new(1.0, 25.0, 2.6e9, 0.0).unwrap();
        let field = object_field(&src, &geom);
        let sv = steering_vector(&geom, 25.0, 2.6e9).unwrap();
        assert_eq!(field, sv);
    }

    #[test]
    fn object_field_scales_with_amplitude_and_initial_phase() {
        let geom = default_his_geometry();
        let src = PlaneWaveSource::new(0.7, -12.0, 2.6e9, 1.2).unwrap();
        let field = object_field(&src, &geom);
        let sv = steering_vector(&geom, -12.0, 2.6e9).unwrap();
        let scale = Complex64::from_polar(0.7, 1.2);
        for (f, v) in field.values().iter().zip(sv.values()) {
            assert!((f - scale * v).norm() < 1e-12);
        }
    }

    #[test]
    fn zero_amplitude_source_gives_an_all_zero_snapshot() {
        let geom = default_his_geometry();
        let src = PlaneWaveSource::new(0.0, 30.0, 2.6e9, 0.4).unwrap();
        let field = object_field(&src, &geom);
        assert!(field.values().iter().all(|v| v.norm() == 0.0));
        assert_eq!(field.max_abs(), 0.0);
    }

    #[test]
    fn plane_wave_source_validates_its_parameters() {
        assert!(matches!(
            PlaneWaveSource::new(-1.0, 0.0, 2.6e9, 0.0),
            Err(HisError::NegativeAmplitude(_))
        ));
        assert!(matches!(
            PlaneWaveSource::new(1.0, 91.0, 2.6e9, 0.0),
            Err(HisError::AzimuthOutOfRange(_))
        ));
        assert!(matches!(
            PlaneWaveSource::new(1.0, 0.0, 0.0, 0.0),
            Err(HisError::InvalidFrequency(_))
        ));
        assert!(PlaneWaveSource::new(1.0, -90.0, 2.6e9, 7.0).is_ok());
    }

    #[test]
    fn reference_field_is_uniform_without_per_unit_gain() {
        let geom = default_his_geometry();
        let rw = ReferenceWave::new(2.0, 2.6e9, 0.5).unwrap();
        let field = reference_field(&rw, &geom).unwrap();
        let expected = Complex64::from_polar(2.0, 0.5);
        assert_eq!(field.len(), 32);
        for v in field.values() {
            assert_eq!(*v, expected);
        }
    }

    #[test]
    fn reference_field_applies_per_unit_gain_elementwise() {
        let geom = ArrayGeometry::new(1, 3, 0.06, 0.06).unwrap();
        let gains = vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.9, 0.1),
            Complex64::new(1.1, -0.2),
        ];
        let rw = ReferenceWave::new(1.5, 2.6e9, 0.0)
            .unwrap()
            .with_per_unit_gain(gains.clone());
        let field = reference_field(&rw, &geom).unwrap();
        for (v, g) in field.values().iter().zip(&gains) {
            assert!((v - 1.5 * g).norm() < 1e-15);
        }
    }

    #[test]
    fn reference_field_rejects_gain_length_mismatch() {
        let geom = default_his_geometry();
        let rw = ReferenceWave::new(1.0, 2.6e9, 0.0)
            .unwrap()
            .with_per_unit_gain(vec![Complex64::new(1.0, 0.0); 8]);
        assert_eq!(
            reference_field(&rw, &geom).unwrap_err(),
            HisError::DimensionMismatch {
                expected: 32,
                actual: 8
            }
        );
    }

    #[test]
    fn phase_offset_shifts_every_unit_equally() {
        let geom = default_his_geometry();
        let rw = ReferenceWave::new(1.0, 2.6e9, 0.3).unwrap();
        let base = reference_field(&rw, &geom).unwrap();
        let shifted = reference_field(&rw.with_phase_offset(0.9), &geom).unwrap();
        let rot = Complex64::from_polar(1.0, 0.9);
        for (s, b) in shifted.values().iter().zip(base.values()) {
            assert!((s - rot * b).norm() < 1e-12);
        }
    }

    #[test]
    fn snapshot_from_values_checks_the_unit_count() {
        let geom = default_his_geometry();
        let ok = FieldSnapshot::from_values(vec![Complex64::new(0.0, 1.0); 32], &geom);
        assert!(ok.is_ok());
        let bad = FieldSnapshot::from_values(vec![Complex64::new(0.0, 1.0); 31], &geom);
        assert_eq!(
            bad.unwrap_err(),
            HisError::DimensionMismatch {
                expected: 32,
                actual: 31
            }
        );
    }
}
