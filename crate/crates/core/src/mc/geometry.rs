use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use super::rng::{substream, Purpose};
use super::SimulationConfig;
use crate::error::{invalid, Error, Result};

const MAX_EMPTY_RESAMPLES: u32 = 10_000;

/// AP distances seen from the typical UE for one PPP draw.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometryRealization {
    /// Distance to the nearest (serving) AP [m].
    pub serving_distance: f64,
    /// Distances to every other AP in the window, each above the serving one.
    pub interferer_distances: Vec<f64>,
    /// Empty windows redrawn before this one.
    pub empty_resamples: u32,
}

/// Draws a PPP in the window for trial index `trial`.
///
/// The AP count is Poisson with mean `lambda pi R^2` and distances follow
/// from uniform positions in the disc. Empty windows are redrawn from the
/// same substream and counted.
pub fn sample_geometry(config: &SimulationConfig, trial: u64) -> Result<GeometryRealization> {
    let mut rng = substream(config.master_seed, Purpose::Geometry, trial);
    let mean = config.expected_ap_count();
    let poisson = Poisson::new(mean)
        .map_err(|e| invalid(format!("bad AP count mean {mean}: {e}")))?;
    let radius = config.window_radius;

    for attempt in 0..=MAX_EMPTY_RESAMPLES {
        let count = poisson.sample(&mut rng) as usize;
        if count == 0 {
            continue;
        }
        let mut distances: Vec<f64> = (0..count)
            .map(|_| radius * rng.random::<f64>().sqrt())
            .collect();
        let (nearest, _) = distances
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("count > 0");
        let serving_distance = distances.swap_remove(nearest);
        return Ok(GeometryRealization {
            serving_distance,
            interferer_distances: distances,
            empty_resamples: attempt,
        });
    }
    Err(Error::DegenerateGeometry(format!(
        "window held no AP in {MAX_EMPTY_RESAMPLES} draws (mean count {mean})"
    )))
}

/// Distances of PPP points with intensity `lambda` in the annulus
/// `inner < d <= outer`.
pub fn sample_annulus_distances<R: Rng>(
    rng: &mut R,
    lambda: f64,
    inner: f64,
    outer: f64,
) -> Result<Vec<f64>> {
    if !(outer > inner) || !(inner >= 0.0) {
        return Err(invalid(format!("bad annulus ({inner}, {outer}]")));
    }
    let area = std::f64::consts::PI * (outer * outer - inner * inner);
    let poisson = Poisson::new(lambda * area)
        .map_err(|e| invalid(format!("bad annulus count mean: {e}")))?;
    let count = poisson.sample(rng) as usize;
    let (a2, b2) = (inner * inner, outer * outer);
    Ok((0..count)
        .map(|_| (a2 + rng.random::<f64>() * (b2 - a2)).sqrt())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{DesignPoint, PropagationParams};
    use crate::stats::{ks_one_sample, McEstimate};

    fn config(lambda: f64, radius: f64) -> SimulationConfig {
        let mut c = SimulationConfig::new(
            PropagationParams::reference(),
            DesignPoint::new(1e-12, lambda, 20, 4),
            1,
            42,
        )
        .unwrap();
        c.window_radius = radius;
        c
    }

    #[test]
    fn deterministic_for_fixed_trial() {
        let c = config(1e-4, 2000.0);
        assert_eq!(sample_geometry(&c, 9).unwrap(), sample_geometry(&c, 9).unwrap());
        assert_ne!(sample_geometry(&c, 9).unwrap(), sample_geometry(&c, 10).unwrap());
    }

    #[test]
    fn serving_is_nearest() {
        let c = config(1e-4, 2000.0);
        for t in 0..20 {
            let g = sample_geometry(&c, t).unwrap();
            assert!(g.interferer_distances.iter().all(|&d| d > g.serving_distance));
            assert!(g.interferer_distances.iter().all(|&d| d <= 2000.0));
        }
    }

    #[test]
    fn mean_ap_count_matches_poisson_mean() {
        let c = config(1e-4, 2000.0);
        let counts: Vec<f64> = (0..4000)
            .map(|t| {
                let g = sample_geometry(&c, t).unwrap();
                (g.interferer_distances.len() + 1) as f64
            })
            .collect();
        let e = McEstimate::from_samples(&counts);
        let expected = 1e-4 * std::f64::consts::PI * 2000f64.powi(2);
        assert!((expected - 1256.637).abs() < 1e-3);
        assert!((e.mean - expected).abs() < 1.5 * e.half_width, "{e:?} vs {expected}");
    }

    #[test]
    fn serving_distance_is_rayleigh() {
        let lambda = 1e-4;
        let c = config(lambda, 2000.0);
        let d: Vec<f64> = (0..10_000)
            .map(|t| sample_geometry(&c, t).unwrap().serving_distance)
            .collect();
        let ks = ks_one_sample(&d, |r| 1.0 - (-std::f64::consts::PI * lambda * r * r).exp());
        assert!(ks.passes(0.01), "{ks:?}");
    }

    #[test]
    fn sparse_windows_are_resampled() {
        // Mean count 0.05: most draws are empty.
        let c = config(1e-4, (0.05 / (1e-4 * std::f64::consts::PI)).sqrt());
        let g = sample_geometry(&c, 0).unwrap();
        let total: u32 = (0..50).map(|t| sample_geometry(&c, t).unwrap().empty_resamples).sum();
        assert!(g.serving_distance > 0.0);
        assert!(total > 100);
    }
}
