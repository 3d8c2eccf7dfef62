//! Simulation checks of the moment identities behind the SE lower bound.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::channel::{explicit_desired_gain, explicit_leakage};
use super::geometry::{sample_annulus_distances, sample_geometry};
use super::rng::{substream, Purpose};
use super::SimulationConfig;
use crate::analytic::{annulus_interference_mean, mean_distance_moment};
use crate::error::{invalid, Error, Result};
use crate::stats::{ks_one_sample, KsTest, McEstimate};

/// Sample sizes and the fixed distance used by the conditional checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentProbe {
    /// Fixed AP distance [m] for the fading and annulus checks.
    pub distance: f64,
    pub fading_draws: usize,
    pub geometry_draws: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentCheck {
    pub name: String,
    pub estimate: McEstimate,
    pub expected: f64,
    pub within_ci: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub checks: Vec<MomentCheck>,
    /// Serving distances against Rayleigh with scale `1 / sqrt(2 pi lambda)`.
    pub serving_distance_ks: KsTest,
}

impl MomentReport {
    pub fn mismatches(&self) -> impl Iterator<Item = &MomentCheck> {
        self.checks.iter().filter(|c| !c.within_ci)
    }

    pub fn all_pass(&self, ks_significance: f64) -> bool {
        self.mismatches().next().is_none() && self.serving_distance_ks.passes(ks_significance)
    }
}

fn check(name: &str, samples: &[f64], expected: f64) -> MomentCheck {
    let estimate = McEstimate::from_samples(samples);
    MomentCheck {
        name: name.to_string(),
        estimate,
        expected,
        within_ci: estimate.covers(expected),
    }
}

fn redraw_singular<T>(mut f: impl FnMut() -> Result<T>) -> Result<T> {
    for _ in 0..100 {
        match f() {
            Err(Error::SingularPrecoder(_)) => continue,
            other => return other,
        }
    }
    Err(Error::SingularPrecoder("repeatedly singular".into()))
}

/// Compares simulated moments with their closed forms, always building the
/// zero-forcing precoders explicitly:
///
/// * `omega d^alpha / |h_0^H w_0|^2` against `1 / (M - K)`,
/// * `omega d^alpha ||h_i^H W_i||^2` against `K`,
/// * `E{d_0^2}` and `E{d_0^alpha}` against the nearest-point moments,
/// * `sum d_i^-alpha` over PPP points in `(d, R]` against its annulus mean.
///
/// Mismatches are reported, not raised.
pub fn validate_moment_identities(
    config: &SimulationConfig,
    probe: &MomentProbe,
) -> Result<MomentReport> {
    config.validate()?;
    if !(probe.distance > 0.0) || probe.distance >= config.window_radius {
        return Err(invalid(format!(
            "probe distance must lie in (0, {}), got {}",
            config.window_radius, probe.distance
        )));
    }
    if probe.fading_draws < 2 || probe.geometry_draws < 2 {
        return Err(invalid("moment checks need at least two draws each"));
    }
    let p = &config.propagation;
    let (m, k) = (config.design.m as usize, config.design.k as usize);
    let lambda = config.design.lambda;
    let d = probe.distance;
    let variance = d.powf(-p.alpha) / p.omega;
    let seed = config.master_seed;

    let fading: Vec<(f64, f64)> = (0..probe.fading_draws as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(seed, Purpose::Probe, i);
            let desired = redraw_singular(|| explicit_desired_gain(&mut rng, m, k, variance))?;
            let leak = redraw_singular(|| explicit_leakage(&mut rng, m, k, variance))?;
            Ok((variance / desired, leak / variance))
        })
        .collect::<Result<_>>()?;
    let inverse_desired: Vec<f64> = fading.iter().map(|f| f.0).collect();
    let leakage: Vec<f64> = fading.iter().map(|f| f.1).collect();

    let serving: Vec<f64> = (0..probe.geometry_draws as u64)
        .into_par_iter()
        .map(|t| sample_geometry(config, t).map(|g| g.serving_distance))
        .collect::<Result<_>>()?;
    let d2: Vec<f64> = serving.iter().map(|r| r * r).collect();
    let d_alpha: Vec<f64> = serving.iter().map(|r| r.powf(p.alpha)).collect();

    let radius = config.window_radius;
    let annulus: Vec<f64> = (0..probe.geometry_draws as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = substream(seed, Purpose::ProbeGeometry, t);
            let pts = sample_annulus_distances(&mut rng, lambda, d, radius)?;
            Ok(pts.iter().map(|x| x.powf(-p.alpha)).sum())
        })
        .collect::<Result<_>>()?;

    let checks = vec![
        check(
            "inverse desired gain x omega d^alpha",
            &inverse_desired,
            1.0 / (m - k) as f64,
        ),
        check("interferer leakage x omega d^alpha", &leakage, k as f64),
        check("serving distance^2", &d2, mean_distance_moment(lambda, 2.0)?),
        check(
            "serving distance^alpha",
            &d_alpha,
            mean_distance_moment(lambda, p.alpha)?,
        ),
        check(
            "interference sum beyond d",
            &annulus,
            annulus_interference_mean(lambda, p.alpha, d, radius)?,
        ),
    ];
    let serving_distance_ks = ks_one_sample(&serving, |r| {
        1.0 - (-std::f64::consts::PI * lambda * r * r).exp()
    });
    Ok(MomentReport {
        checks,
        serving_distance_ks,
    })
}
