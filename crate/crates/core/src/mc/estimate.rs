use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{sample_geometry, simulate_sinr, SimulationConfig};
use crate::error::Result;
use crate::stats::McEstimate;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeEstimate {
    /// Ergodic SE [bit/symbol/user]; one sample per geometry, averaged over
    /// its fading draws.
    pub se: McEstimate,
    pub empty_window_resamples: u64,
    pub precoder_resamples: u64,
}

/// Monte-Carlo estimate of the ergodic SE, `E{log2(1 + SINR)}` over PPP
/// geometries and fading.
///
/// Trials run on the current rayon pool. Per-trial results are collected in
/// trial order and reduced sequentially, so the estimate is bit-identical for
/// a given `master_seed` whatever the number of workers.
pub fn estimate_ergodic_se(config: &SimulationConfig) -> Result<SeEstimate> {
    config.validate()?;
    let draws = config.fading_draws_per_geometry as u64;
    let per_trial: Vec<(f64, u64, u64)> = (0..config.trials as u64)
        .into_par_iter()
        .map(|trial| {
            let geometry = sample_geometry(config, trial)?;
            let mut sum = 0.0;
            let mut precoder = 0u64;
            for j in 0..draws {
                let s = simulate_sinr(config, &geometry, trial * draws + j)?;
                sum += (1.0 + s.sinr).log2();
                precoder += s.precoder_resamples as u64;
            }
            Ok((sum / draws as f64, geometry.empty_resamples as u64, precoder))
        })
        .collect::<Result<_>>()?;

    let samples: Vec<f64> = per_trial.iter().map(|t| t.0).collect();
    Ok(SeEstimate {
        se: McEstimate::from_samples(&samples),
        empty_window_resamples: per_trial.iter().map(|t| t.1).sum(),
        precoder_resamples: per_trial.iter().map(|t| t.2).sum(),
    })
}
