//! Shared fixtures for the benchmarks in `benches/`.

use vortfront_core::{build_wave, Params, Region, WaveField};

/// The representative wave of each region at `eps`.
pub fn region_waves(eps: f64) -> Vec<(Region, WaveField)> {
    Region::ALL
        .into_iter()
        .filter_map(|r| {
            let (h, w0) = r.representative()?;
            let p = Params::new(h, w0, eps).ok()?;
            Some((r, build_wave(&p).ok()?))
        })
        .collect()
}
