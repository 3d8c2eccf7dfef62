//! Stochastic-geometry Monte-Carlo simulation of the downlink ergodic SE.
//!
//! A typical UE sits at the origin. APs are a homogeneous PPP restricted to
//! a disc of radius `window_radius`; the nearest AP serves the UE, all
//! others interfere. Channels are Rayleigh with per-antenna variance
//! `omega^-1 d^-alpha`, every AP precodes with normalized zero-forcing, and
//! the hardware distortion enters the SINR through its variance.
//!
//! Every random draw comes from a ChaCha substream keyed by
//! `(master_seed, purpose, index)`, so results do not depend on how trials
//! are scheduled across worker threads.

pub mod channel;
mod estimate;
mod geometry;
mod moments;
pub mod rng;
mod sinr;

pub use estimate::{estimate_ergodic_se, SeEstimate};
pub use geometry::{sample_annulus_distances, sample_geometry, GeometryRealization};
pub use moments::{validate_moment_identities, MomentCheck, MomentProbe, MomentReport};
pub use sinr::{simulate_sinr, SinrSample};

use serde::{Deserialize, Serialize};

use crate::analytic::mean_distance_moment;
use crate::error::{invalid, Result};
use crate::params::{DesignPoint, PropagationParams};

/// Default ratio of the neglected interference tail to the in-window mean.
pub const DEFAULT_TAIL_FRACTION: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PrecoderMode {
    /// Build every zero-forcing matrix from drawn channels.
    ExplicitZf,
    /// Desired gain from its known law `Gamma(M - K + 1)`, leakage from
    /// `Gamma(K)`; both scaled by the pathloss.
    Distributional,
}

impl std::str::FromStr for PrecoderMode {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "explicit-zf" => Ok(PrecoderMode::ExplicitZf),
            "distributional" => Ok(PrecoderMode::Distributional),
            other => Err(invalid(format!(
                "unknown precoder mode '{other}' (expected explicit-zf or distributional)"
            ))),
        }
    }
}

impl std::fmt::Display for PrecoderMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PrecoderMode::ExplicitZf => "explicit-zf",
            PrecoderMode::Distributional => "distributional",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub propagation: PropagationParams,
    pub design: DesignPoint,
    /// Radius of the simulated disc around the typical UE [m].
    pub window_radius: f64,
    /// Independent geometries.
    pub trials: usize,
    pub fading_draws_per_geometry: usize,
    pub master_seed: u64,
    pub precoder_mode: PrecoderMode,
    /// When false only the serving AP is simulated.
    pub include_interference: bool,
}

impl SimulationConfig {
    /// Distributional-mode config with the window sized for
    /// [`DEFAULT_TAIL_FRACTION`] and one fading draw per geometry.
    pub fn new(
        propagation: PropagationParams,
        design: DesignPoint,
        trials: usize,
        master_seed: u64,
    ) -> Result<Self> {
        let window_radius =
            window_for_tail_fraction(design.lambda, propagation.alpha, DEFAULT_TAIL_FRACTION)?;
        let cfg = SimulationConfig {
            propagation,
            design,
            window_radius,
            trials,
            fading_draws_per_geometry: 1,
            master_seed,
            precoder_mode: PrecoderMode::Distributional,
            include_interference: true,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.propagation.validate()?;
        self.design.validate()?;
        if self.trials == 0 {
            return Err(invalid("trials must be >= 1"));
        }
        if self.fading_draws_per_geometry == 0 {
            return Err(invalid("fading draws per geometry must be >= 1"));
        }
        if !(self.window_radius > 0.0) || !self.window_radius.is_finite() {
            return Err(invalid(format!(
                "window radius must be finite and > 0, got {}",
                self.window_radius
            )));
        }
        Ok(())
    }

    /// Expected number of APs in the window.
    pub fn expected_ap_count(&self) -> f64 {
        self.design.lambda * std::f64::consts::PI * self.window_radius.powi(2)
    }

    /// Neglected interference tail relative to the in-window mean, at the
    /// mean serving distance.
    pub fn truncated_tail_fraction(&self) -> f64 {
        let d0 = mean_distance_moment(self.design.lambda, 1.0).unwrap_or(f64::NAN);
        let e = 2.0 - self.propagation.alpha;
        let tail = self.window_radius.powf(e);
        tail / (d0.powf(e) - tail)
    }
}

/// Window radius whose interference tail beyond it is `fraction` of the
/// in-window conditional mean, taken at the mean serving distance
/// `E{d0} = 1 / (2 sqrt(lambda))`.
pub fn window_for_tail_fraction(lambda: f64, alpha: f64, fraction: f64) -> Result<f64> {
    if !(fraction > 0.0) {
        return Err(invalid(format!("tail fraction must be > 0, got {fraction}")));
    }
    if !(alpha > 2.0) {
        return Err(invalid(format!("alpha must be > 2, got {alpha}")));
    }
    let d0 = mean_distance_moment(lambda, 1.0)?;
    Ok(d0 * ((1.0 + fraction) / fraction).powf(1.0 / (alpha - 2.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_meets_tail_fraction() {
        let p = PropagationParams::reference();
        let cfg = SimulationConfig::new(p, DesignPoint::new(1e-12, 1e-4, 100, 10), 10, 1).unwrap();
        assert!((cfg.truncated_tail_fraction() - DEFAULT_TAIL_FRACTION).abs() < 1e-12);
        // Window size is scale-free in lambda: the expected AP count is fixed.
        let dense =
            SimulationConfig::new(p, DesignPoint::new(1e-12, 1e-2, 100, 10), 10, 1).unwrap();
        assert!((cfg.expected_ap_count() - dense.expected_ap_count()).abs() < 1e-6);
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("explicit-zf".parse::<PrecoderMode>().unwrap(), PrecoderMode::ExplicitZf);
        assert_eq!(PrecoderMode::Distributional.to_string(), "distributional");
        assert!("mmse".parse::<PrecoderMode>().is_err());
    }

    #[test]
    fn rejects_zero_trials() {
        let p = PropagationParams::reference();
        assert!(SimulationConfig::new(p, DesignPoint::new(1e-12, 1e-4, 100, 10), 0, 1).is_err());
    }
}
