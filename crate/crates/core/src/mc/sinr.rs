use serde::{Deserialize, Serialize};

use super::channel::{
    distributional_desired_gain, distributional_leakage, explicit_desired_gain, explicit_leakage,
};
use super::rng::{substream, Purpose};
use super::{GeometryRealization, PrecoderMode, SimulationConfig};
use crate::error::{Error, Result};

const MAX_PRECODER_RESAMPLES: u32 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SinrSample {
    pub sinr: f64,
    /// `|h_0^H w_0|^2` including pathloss.
    pub desired_gain: f64,
    /// `sum_i ||h_i^H W_i||^2` over interfering APs, including pathloss.
    pub interference_gain: f64,
    /// Singular precoders redrawn while producing this sample.
    pub precoder_resamples: u32,
}

/// One fading realization of the SINR for the typical UE:
///
/// `(1 - eps^2) g0 / (sum_i g_i + eps^2 g0 + sigma^2 / rho)`.
///
/// The distortion noise is Gaussian with a known conditional variance, so it
/// enters through that variance rather than as a sampled term.
pub fn simulate_sinr(
    config: &SimulationConfig,
    geometry: &GeometryRealization,
    fading_index: u64,
) -> Result<SinrSample> {
    let mut rng = substream(config.master_seed, Purpose::Fading, fading_index);
    let p = &config.propagation;
    let m = config.design.m as usize;
    let k = config.design.k as usize;
    let pathloss = |d: f64| d.powf(-p.alpha) / p.omega;
    let mut resamples = 0u32;

    let mut retry = |f: &mut dyn FnMut() -> Result<f64>| -> Result<f64> {
        loop {
            match f() {
                Ok(v) => return Ok(v),
                Err(Error::SingularPrecoder(msg)) => {
                    resamples += 1;
                    if resamples > MAX_PRECODER_RESAMPLES {
                        return Err(Error::SingularPrecoder(msg));
                    }
                }
                Err(e) => return Err(e),
            }
        }
    };

    let v0 = pathloss(geometry.serving_distance);
    let desired_gain = match config.precoder_mode {
        PrecoderMode::ExplicitZf => retry(&mut || explicit_desired_gain(&mut rng, m, k, v0))?,
        PrecoderMode::Distributional => distributional_desired_gain(&mut rng, m, k, v0),
    };

    let mut interference_gain = 0.0;
    if config.include_interference {
        for &d in &geometry.interferer_distances {
            let v = pathloss(d);
            interference_gain += match config.precoder_mode {
                PrecoderMode::ExplicitZf => retry(&mut || explicit_leakage(&mut rng, m, k, v))?,
                PrecoderMode::Distributional => distributional_leakage(&mut rng, k, v),
            };
        }
    }

    let eps2 = p.epsilon * p.epsilon;
    let noise = if config.design.rho.is_infinite() {
        0.0
    } else {
        p.sigma2 / config.design.rho
    };
    let sinr = (1.0 - eps2) * desired_gain / (interference_gain + eps2 * desired_gain + noise);
    Ok(SinrSample {
        sinr,
        desired_gain,
        interference_gain,
        precoder_resamples: resamples,
    })
}
