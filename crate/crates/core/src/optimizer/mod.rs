//! EE maximization over transmit power, antennas, UEs and AP density.
//!
//! [`DesignProblem`] fixes the environment, the SE target `gamma` and the AP
//! density; the transmit power is then eliminated through [`DesignProblem::rho_star`]
//! and the remaining integer problem in `(M, K)` is solved either by the
//! alternating closed-form updates or by exhaustive grid search.

mod alternating;
mod closed_form;
mod convexity;
mod grid;
mod ue_density;

pub use alternating::AlternatingOptions;
pub use convexity::{sample_relaxed_points, ConvexityReport, HessianCoordinates};
pub use grid::GridSearchReport;
pub use ue_density::{evaluate_with_ue_density, optimize_with_ue_density};

use serde::{Deserialize, Serialize};

use crate::analytic::feasibility_gamma_bound;
use crate::error::{invalid, Error, Result};
use crate::params::{DesignPoint, HardwareProfile, PropagationParams};

/// Default grid-search rectangle; brackets the Table 1 optimum with margin.
pub const DEFAULT_M_RANGE: std::ops::RangeInclusive<u32> = 2..=400;
pub const DEFAULT_K_RANGE: std::ops::RangeInclusive<u32> = 1..=60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Converged,
    HitIterationCap,
}

/// One visited iterate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub m: u32,
    pub k: u32,
    pub rho: f64,
    pub ee: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationOutcome {
    pub design: DesignPoint,
    pub ee: f64,
    pub iterations: usize,
    /// Visited points in order; EE is nondecreasing along it.
    pub trajectory: Vec<TrajectoryPoint>,
    pub status: Status,
}

/// The reduced design problem at fixed AP density and SE target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignProblem {
    pub propagation: PropagationParams,
    pub hardware: HardwareProfile,
    pub gamma: f64,
    pub lambda: f64,
}

impl DesignProblem {
    pub fn new(
        propagation: PropagationParams,
        hardware: HardwareProfile,
        gamma: f64,
        lambda: f64,
    ) -> Result<Self> {
        propagation.validate()?;
        hardware.validate()?;
        let bound = feasibility_gamma_bound(propagation.epsilon)?;
        if !(gamma >= 0.0) {
            return Err(invalid(format!("gamma must be >= 0, got {gamma}")));
        }
        if gamma >= bound {
            return Err(invalid(format!(
                "gamma = {gamma} bit/symbol is not supportable: the SE target is only feasible \
                 for 0 <= gamma < -2 log2(epsilon) = {bound:.4} at epsilon = {}",
                propagation.epsilon
            )));
        }
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(invalid(format!("lambda must be > 0, got {lambda}")));
        }
        Ok(DesignProblem {
            propagation,
            hardware,
            gamma,
            lambda,
        })
    }

    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Self::new(self.propagation, self.hardware, self.gamma, lambda)
    }

    /// Design point at `(m, k)` with `rho = rho*`.
    pub fn design(&self, m: u32, k: u32) -> Result<DesignPoint> {
        Ok(DesignPoint::new(self.rho_star(m, k)?, self.lambda, m, k))
    }

    /// EE of the reduced problem at `(m, k)`: SE pinned to `gamma`, `rho = rho*`.
    pub fn ee(&self, m: u32, k: u32) -> Result<f64> {
        let rho = self.rho_star(m, k)?;
        Ok(self.ee_with_rho(m as f64, k as f64, rho))
    }

    fn ee_with_rho(&self, m: f64, k: f64, rho: f64) -> f64 {
        crate::analytic::ee_from_se(&self.hardware, m, k, rho, self.gamma)
    }

    /// EE for real-valued `(m, k)`; `None` outside the feasible region.
    pub fn ee_relaxed(&self, m: f64, k: f64) -> Option<f64> {
        let rho = self.rho_star_relaxed(m, k)?;
        Some(self.ee_with_rho(m, k, rho))
    }

    fn trajectory_point(&self, m: u32, k: u32) -> Result<TrajectoryPoint> {
        let rho = self.rho_star(m, k)?;
        Ok(TrajectoryPoint {
            m,
            k,
            rho,
            ee: self.ee_with_rho(m as f64, k as f64, rho),
        })
    }
}

fn is_infeasible(e: &Error) -> bool {
    matches!(e, Error::Infeasible(_))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_gamma_beyond_impairment_bound() {
        let err = DesignProblem::new(
            PropagationParams::reference(),
            HardwareProfile::reference(),
            8.65,
            1e-4,
        )
        .unwrap_err();
        assert!(err.to_string().contains("8.6439"), "{err}");
        assert!(DesignProblem::new(
            PropagationParams::reference(),
            HardwareProfile::reference(),
            8.64,
            1e-4
        )
        .is_ok());
    }
}
