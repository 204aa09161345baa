//! Execute configured experiments and write their artifacts.
//!
//! All three run modes share one estimation core: synthesize the object
//! field, acquire `snapshots` records through the front end, recover each
//! snapshot, average their Bartlett spectra, and take the refined peak.
//! Seeding is hierarchical — angle index, then trial, then snapshot — so
//! every acquisition has its own reproducible stream derived from the one
//! top-level seed.
//!
//! Artifacts use pinned CSV headers (a stable contract for downstream
//! tooling), a JSON report embedding the full config echo, and a gnuplot
//! script for quick inspection. Floats are written with shortest
//! round-trip formatting and nothing time- or machine-dependent is
//! recorded, so identical configs and seeds reproduce every artifact byte
//! for byte.

use serde::Serialize;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::array::{object_field, ArrayGeometry, FieldSnapshot, ReferenceWave};
use crate::doa::{
    bartlett_spectrum, bartlett_spectrum_averaged, sweep_errors, BartlettSpectrum, ScanGrid,
};
use crate::frontend::{acquire, derive_seed, noise_sweep, AcquisitionRecord, FrontendConfig};
use crate::holography::{psi_recover, unwrap_phases};

use super::config::ExperimentConfig;
use super::ExperimentError;

pub const SWEEP_CSV_HEADER: &str = "true_deg,est_deg,err_deg,peak_value,clipped";
pub const HOLOGRAM_CSV_HEADER: &str = "row,col,i0,i90,i180";
pub const PHASE_CSV_HEADER: &str = "row,col,phase_rad";
pub const SPECTRUM_CSV_HEADER: &str = "angle_deg,value";
pub const NOISE_CSV_HEADER: &str = "sigma,rms_field_error,doa_rmse_deg";

/// One swept direction. `est_deg` is the trial-mean estimate; the two
/// optional statistics appear in the JSON report when `trials > 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub true_deg: f64,
    pub est_deg: f64,
    pub err_deg: f64,
    /// Trial-mean pre-normalization Bartlett peak (1 = perfect match).
    pub peak_value: f64,
    /// Rail hits summed over all trials and snapshots at this angle.
    pub clipped: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_abs_err_deg: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub std_err_deg: Option<f64>,
}

/// Everything a sweep run produced; serialized as `report.json`.
#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub tool_version: String,
    pub seed: u64,
    pub trials: u32,
    pub snapshots: u32,
    pub max_abs_error_deg: f64,
    pub rmse_deg: f64,
    pub total_clipped: u64,
    pub rows: Vec<SweepRow>,
    pub config: ExperimentConfig,
}

/// Everything a single-angle run produced; the spectrum, the raw record
/// and the unwrapped phases are returned in memory and written as CSV but
/// kept out of the JSON report.
#[derive(Debug, Clone, Serialize)]
pub struct SingleReport {
    pub tool_version: String,
    pub seed: u64,
    pub theta_deg: f64,
    pub est_deg: f64,
    pub err_deg: f64,
    pub peak_value: f64,
    pub clipped: u64,
    /// Mean per-column step of the unwrapped recovered phase, radians;
    /// for a plane wave this is `2*pi * pitch * sin(theta) / lambda`.
    pub mean_column_phase_step_rad: f64,
    pub config: ExperimentConfig,
    #[serde(skip)]
    pub spectrum: BartlettSpectrum,
    #[serde(skip)]
    pub record: AcquisitionRecord,
    /// Unwrapped recovered phase per row, radians.
    #[serde(skip)]
    pub phase_rows: Vec<Vec<f64>>,
}

/// One noise level of the study.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoiseRow {
    pub sigma: f64,
    /// Mean RMS per-unit error of the recovered field.
    pub rms_field_error: f64,
    /// RMS direction error across trials, degrees.
    pub doa_rmse_deg: f64,
}

/// Everything a noise study produced; serialized as `report.json`.
#[derive(Debug, Clone, Serialize)]
pub struct NoiseReport {
    pub tool_version: String,
    pub seed: u64,
    pub theta_deg: f64,
    pub trials: u32,
    pub rows: Vec<NoiseRow>,
    pub config: ExperimentConfig,
}

struct RunContext<'a> {
    cfg: &'a ExperimentConfig,
    geom: ArrayGeometry,
    rw: ReferenceWave,
    grid: ScanGrid,
}

impl<'a> RunContext<'a> {
    fn build(cfg: &'a ExperimentConfig) -> Result<Self, ExperimentError> {
        Ok(Self {
            cfg,
            geom: cfg.build_geometry()?,
            rw: cfg.build_reference()?,
            grid: cfg.build_scan_grid()?,
        })
    }
}

struct TrialEstimate {
    est_deg: f64,
    peak_value: f64,
    clipped: u64,
    spectrum: BartlettSpectrum,
    first_record: AcquisitionRecord,
    first_field: FieldSnapshot,
}

/// The shared estimation core: one trial at one true direction.
fn estimate_trial(
    ctx: &RunContext,
    theta_deg: f64,
    trial_seed: u64,
) -> Result<TrialEstimate, ExperimentError> {
    let src = ctx.cfg.build_source(theta_deg)?;
    let e_o = object_field(&src, &ctx.geom);
    let mut fields = Vec::with_capacity(ctx.cfg.snapshots as usize);
    let mut clipped = 0u64;
    let mut first_record = None;
    for snapshot in 0..ctx.cfg.snapshots {
        let fcfg = ctx
            .cfg
            .frontend
            .with_seed(derive_seed(trial_seed, snapshot as u64));
        let record = acquire(&e_o, &ctx.rw, &ctx.geom, &fcfg)?;
        clipped += record.clipped as u64;
        fields.push(psi_recover(&record.triplet, &ctx.rw)?);
        if snapshot == 0 {
            first_record = Some(record);
        }
    }
    let spectrum = bartlett_spectrum_averaged(&fields, &ctx.geom, ctx.cfg.carrier_hz, &ctx.grid)?;
    let first_field = fields
        .into_iter()
        .next()
        .expect("at least one snapshot was acquired");
    Ok(TrialEstimate {
        est_deg: spectrum.peak_deg(),
        peak_value: spectrum.peak_value(),
        clipped,
        spectrum,
        first_record: first_record.expect("at least one snapshot was acquired"),
        first_field,
    })
}

/// Sweep the true direction, estimating each angle `trials` times, and
/// write `sweep.csv`, `report.json` and `plot.gp` into the output
/// directory.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<SweepReport, ExperimentError> {
    cfg.validate()?;
    let ctx = RunContext::build(cfg)?;
    let angles = cfg.sweep_angles();
    let mut rows = Vec::with_capacity(angles.len());
    let mut total_clipped = 0u64;
    for (angle_index, &theta) in angles.iter().enumerate() {
        let angle_seed = derive_seed(cfg.seed, angle_index as u64);
        let mut estimates = Vec::with_capacity(cfg.trials as usize);
        let mut peak_sum = 0.0;
        let mut clipped = 0u64;
        for trial in 0..cfg.trials {
            let est = estimate_trial(&ctx, theta, derive_seed(angle_seed, trial as u64))?;
            estimates.push(est.est_deg);
            peak_sum += est.peak_value;
            clipped += est.clipped;
        }
        let est_mean = estimates.iter().sum::<f64>() / estimates.len() as f64;
        let (mean_abs_err_deg, std_err_deg) = if cfg.trials > 1 {
            let mean_abs =
                estimates.iter().map(|e| (e - theta).abs()).sum::<f64>() / estimates.len() as f64;
            let var = estimates
                .iter()
                .map(|e| (e - est_mean).powi(2))
                .sum::<f64>()
                / (estimates.len() - 1) as f64;
            (Some(mean_abs), Some(var.sqrt()))
        } else {
            (None, None)
        };
        total_clipped += clipped;
        rows.push(SweepRow {
            true_deg: theta,
            est_deg: est_mean,
            err_deg: est_mean - theta,
            peak_value: peak_sum / cfg.trials as f64,
            clipped,
            mean_abs_err_deg,
            std_err_deg,
        });
    }
    let est: Vec<f64> = rows.iter().map(|r| r.est_deg).collect();
    let metrics = sweep_errors(&angles, &est)?;
    let report = SweepReport {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: cfg.seed,
        trials: cfg.trials,
        snapshots: cfg.snapshots,
        max_abs_error_deg: metrics.max_abs_error_deg,
        rmse_deg: metrics.rmse_deg,
        total_clipped,
        rows,
        config: cfg.clone(),
    };
    ensure_out_dir(&cfg.out_dir)?;
    write_text(&cfg.out_dir.join("sweep.csv"), &sweep_csv(&report.rows))?;
    write_text(&cfg.out_dir.join("report.json"), &json_report(&report))?;
    write_text(&cfg.out_dir.join("plot.gp"), SWEEP_PLOT)?;
    Ok(report)
}

/// Run one direction in depth and write `holograms.csv`, `phase.csv`,
/// `spectrum.csv`, `report.json` and `plot.gp`. The direction comes from
/// `source.theta_deg`.
pub fn run_single(cfg: &ExperimentConfig) -> Result<SingleReport, ExperimentError> {
    cfg.validate()?;
    let theta = cfg
        .source
        .theta_deg
        .ok_or_else(|| ExperimentError::InvalidConfig {
            field: "source.theta_deg".into(),
            message: "single-angle runs need a direction; set it in the config or pass --theta"
                .into(),
        })?;
    let ctx = RunContext::build(cfg)?;
    let est = estimate_trial(&ctx, theta, derive_seed(derive_seed(cfg.seed, 0), 0))?;

    let n_cols = ctx.geom.n_cols();
    let phase_rows: Vec<Vec<f64>> = (0..ctx.geom.n_rows())
        .map(|row| {
            let wrapped: Vec<f64> = (0..n_cols)
                .map(|col| est.first_field.values()[row * n_cols + col].arg())
                .collect();
            unwrap_phases(&wrapped)
        })
        .collect();
    let mut step_sum = 0.0;
    let mut step_count = 0usize;
    for row in &phase_rows {
        for pair in row.windows(2) {
            step_sum += pair[1] - pair[0];
            step_count += 1;
        }
    }
    let mean_column_phase_step_rad = if step_count > 0 {
        step_sum / step_count as f64
    } else {
        0.0
    };

    let report = SingleReport {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: cfg.seed,
        theta_deg: theta,
        est_deg: est.est_deg,
        err_deg: est.est_deg - theta,
        peak_value: est.peak_value,
        clipped: est.clipped,
        mean_column_phase_step_rad,
        config: cfg.clone(),
        spectrum: est.spectrum,
        record: est.first_record,
        phase_rows,
    };
    ensure_out_dir(&cfg.out_dir)?;
    write_text(
        &cfg.out_dir.join("holograms.csv"),
        &hologram_csv(&report, n_cols),
    )?;
    write_text(
        &cfg.out_dir.join("phase.csv"),
        &phase_csv(&report.phase_rows),
    )?;
    write_text(
        &cfg.out_dir.join("spectrum.csv"),
        &spectrum_csv(&report.spectrum),
    )?;
    write_text(&cfg.out_dir.join("report.json"), &json_report(&report))?;
    write_text(&cfg.out_dir.join("plot.gp"), SINGLE_PLOT)?;
    Ok(report)
}

/// Sweep the object-wave noise level at a fixed direction
/// (`source.theta_deg`, or 20 degrees when unset) and write `noise.csv`,
/// `report.json` and `plot.gp`. Field-error and direction-error columns
/// are computed from the same per-trial noise streams.
pub fn run_noise_study(cfg: &ExperimentConfig) -> Result<NoiseReport, ExperimentError> {
    cfg.validate()?;
    let ctx = RunContext::build(cfg)?;
    let theta = cfg.source.theta_deg.unwrap_or(20.0);
    let src = cfg.build_source(theta)?;
    let e_o = object_field(&src, &ctx.geom);
    let base = cfg.frontend.with_seed(cfg.seed);
    let field_curve = noise_sweep(
        &e_o,
        &ctx.rw,
        &ctx.geom,
        &base,
        &cfg.noise.sigmas,
        cfg.noise.trials,
    )?;

    let mut rows = Vec::with_capacity(field_curve.len());
    for (sigma, rms_field_error) in field_curve {
        let mut sq_sum = 0.0;
        for trial in 0..cfg.noise.trials {
            let fcfg = FrontendConfig {
                awgn_sigma: sigma,
                seed: derive_seed(cfg.seed, trial as u64),
                ..cfg.frontend.clone()
            };
            let record = acquire(&e_o, &ctx.rw, &ctx.geom, &fcfg)?;
            let recovered = psi_recover(&record.triplet, &ctx.rw)?;
            let spectrum = bartlett_spectrum(&recovered, &ctx.geom, cfg.carrier_hz, &ctx.grid)?;
            let err = spectrum.peak_deg() - theta;
            sq_sum += err * err;
        }
        rows.push(NoiseRow {
            sigma,
            rms_field_error,
            doa_rmse_deg: (sq_sum / cfg.noise.trials as f64).sqrt(),
        });
    }
    let report = NoiseReport {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: cfg.seed,
        theta_deg: theta,
        trials: cfg.noise.trials,
        rows,
        config: cfg.clone(),
    };
    ensure_out_dir(&cfg.out_dir)?;
    write_text(&cfg.out_dir.join("noise.csv"), &noise_csv(&report.rows))?;
    write_text(&cfg.out_dir.join("report.json"), &json_report(&report))?;
    write_text(&cfg.out_dir.join("plot.gp"), NOISE_PLOT)?;
    Ok(report)
}

fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            r.true_deg, r.est_deg, r.err_deg, r.peak_value, r.clipped
        )
        .expect("string write");
    }
    out
}

fn hologram_csv(report: &SingleReport, n_cols: usize) -> String {
    let mut out = String::from(HOLOGRAM_CSV_HEADER);
    out.push('\n');
    let triplet = &report.record.triplet;
    for k in 0..triplet.len() {
        writeln!(
            out,
            "{},{},{},{},{}",
            k / n_cols,
            k % n_cols,
            triplet.i0()[k],
            triplet.i90()[k],
            triplet.i180()[k]
        )
        .expect("string write");
    }
    out
}

fn phase_csv(phase_rows: &[Vec<f64>]) -> String {
    let mut out = String::from(PHASE_CSV_HEADER);
    out.push('\n');
    for (row, phases) in phase_rows.iter().enumerate() {
        for (col, phase) in phases.iter().enumerate() {
            writeln!(out, "{row},{col},{phase}").expect("string write");
        }
    }
    out
}

fn spectrum_csv(spectrum: &BartlettSpectrum) -> String {
    let mut out = String::from(SPECTRUM_CSV_HEADER);
    out.push('\n');
    for (angle, value) in spectrum.angles_deg().iter().zip(spectrum.values()) {
        writeln!(out, "{angle},{value}").expect("string write");
    }
    out
}

fn noise_csv(rows: &[NoiseRow]) -> String {
    let mut out = String::from(NOISE_CSV_HEADER);
    out.push('\n');
    for r in rows {
        writeln!(out, "{},{},{}", r.sigma, r.rms_field_error, r.doa_rmse_deg)
            .expect("string write");
    }
    out
}

fn json_report<T: Serialize>(report: &T) -> String {
    let mut text = serde_json::to_string_pretty(report).expect("report serializes");
    text.push('\n');
    text
}

fn ensure_out_dir(dir: &Path) -> Result<(), ExperimentError> {
    fs::create_dir_all(dir).map_err(|source| ExperimentError::Io {
        path: dir.to_path_buf(),
        source,
    })
}

fn write_text(path: &Path, text: &str) -> Result<(), ExperimentError> {
    fs::write(path, text).map_err(|source| ExperimentError::Io {
        path: path.to_path_buf(),
        source,
    })
}

const SWEEP_PLOT: &str = "\
# Estimated vs true direction. Usage: gnuplot plot.gp
set datafile separator ','
set key left top
set xlabel 'true direction (deg)'
set ylabel 'estimated direction (deg)'
set terminal pngcairo size 800,600
set output 'sweep.png'
plot 'sweep.csv' skip 1 using 1:2 with points pt 7 title 'estimate', \\
     x with lines dt 2 lc 'gray' title 'identity'
";

const SINGLE_PLOT: &str = "\
# Bartlett spectrum of the recovered field. Usage: gnuplot plot.gp
set datafile separator ','
set xlabel 'azimuth (deg)'
set ylabel 'normalized spectrum'
set terminal pngcairo size 800,600
set output 'spectrum.png'
plot 'spectrum.csv' skip 1 using 1:2 with lines title 'Bartlett spectrum'
";

const NOISE_PLOT: &str = "\
# Recovery and direction error vs noise level. Usage: gnuplot plot.gp
set datafile separator ','
set logscale xy
set xlabel 'object-wave noise sigma'
set ylabel 'error'
set terminal pngcairo size 800,600
set output 'noise.png'
plot 'noise.csv' skip 1 using 1:2 with linespoints title 'RMS field error', \\
     'noise.csv' skip 1 using 1:3 with linespoints title 'direction RMSE (deg)'
";
