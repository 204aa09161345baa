//! Minimal end-to-end run: one noisy acquisition at 40 degrees, field
//! recovery, and a Bartlett scan for the direction estimate.

use his_core::{
    acquire, bartlett_spectrum, default_his_geometry, object_field, psi_recover, FrontendConfig,
    HisError, PlaneWaveSource, ReferenceWave, ScanGrid,
};

fn main() -> Result<(), HisError> {
    let geom = default_his_geometry();
    let src = PlaneWaveSource::new(1.0, 40.0, 2.6e9, 0.0)?;
    let rw = ReferenceWave::new(1.0, 2.6e9, 0.0)?;
    let incident = object_field(&src, &geom);

    let frontend = FrontendConfig {
        awgn_sigma: 0.01,
        ..FrontendConfig::default()
    };
    let record = acquire(&incident, &rw, &geom, &frontend)?;
    let recovered = psi_recover(&record.triplet, &rw)?;
    let spectrum = bartlett_spectrum(&recovered, &geom, 2.6e9, &ScanGrid::default())?;
    println!("estimated azimuth: {:.2} deg", spectrum.peak_deg());
    Ok(())
}
