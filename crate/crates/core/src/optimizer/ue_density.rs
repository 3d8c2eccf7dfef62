//! Design under a fixed UE density `mu = K lambda`.

use std::ops::RangeInclusive;

use super::{is_infeasible, DesignProblem, OptimizationOutcome, Status, TrajectoryPoint};
use crate::error::{invalid, Error, Result};
use crate::params::{DesignPoint, HardwareProfile, PropagationParams};

fn check_density(mu: f64, lambda_max: f64) -> Result<()> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(invalid(format!("UE density mu must be > 0, got {mu}")));
    }
    if !(lambda_max > 0.0) {
        return Err(invalid(format!("lambda_max must be > 0, got {lambda_max}")));
    }
    Ok(())
}

/// Scans `K` over `k_range`, sets `lambda = mu / K`, and optimizes `M` and
/// `rho` in closed form for each. `K` values whose AP density exceeds
/// `lambda_max` are skipped.
///
/// The trajectory lists each strict improvement of the running best.
pub fn optimize_with_ue_density(
    propagation: &PropagationParams,
    hardware: &HardwareProfile,
    gamma: f64,
    mu: f64,
    lambda_max: f64,
    k_range: RangeInclusive<u32>,
) -> Result<OptimizationOutcome> {
    check_density(mu, lambda_max)?;
    let mut best: Option<(DesignPoint, f64)> = None;
    let mut trajectory = Vec::new();
    let mut iterations = 0;
    for k in k_range {
        if k == 0 {
            continue;
        }
        iterations += 1;
        let lambda = mu / k as f64;
        if lambda > lambda_max {
            continue;
        }
        let problem = DesignProblem::new(*propagation, *hardware, gamma, lambda)?;
        let m = match problem.best_integer_m(k) {
            Ok(m) => m,
            Err(e) if is_infeasible(&e) => continue,
            Err(e) => return Err(e),
        };
        let design = problem.design(m, k)?;
        let ee = problem.ee(m, k)?;
        if best.map_or(true, |(_, b)| ee > b) {
            best = Some((design, ee));
            trajectory.push(TrajectoryPoint {
                m,
                k,
                rho: design.rho,
                ee,
            });
        }
    }
    let (design, ee) = best.ok_or_else(|| {
        Error::Infeasible(format!(
            "no K admits lambda = mu/K <= {lambda_max} AP/m^2 with a feasible design at mu = {mu}"
        ))
    })?;
    Ok(OptimizationOutcome {
        design,
        ee,
        iterations,
        trajectory,
        status: Status::Converged,
    })
}

/// Fixed `(M, K)` under the UE-density constraint: `lambda = mu / K` and
/// `rho = rho*`.
pub fn evaluate_with_ue_density(
    propagation: &PropagationParams,
    hardware: &HardwareProfile,
    gamma: f64,
    mu: f64,
    lambda_max: f64,
    m: u32,
    k: u32,
) -> Result<OptimizationOutcome> {
    check_density(mu, lambda_max)?;
    if k == 0 {
        return Err(invalid("K must be at least 1"));
    }
    let lambda = mu / k as f64;
    if lambda > lambda_max {
        return Err(Error::Infeasible(format!(
            "lambda = mu/K = {lambda} exceeds lambda_max = {lambda_max}"
        )));
    }
    let problem = DesignProblem::new(*propagation, *hardware, gamma, lambda)?;
    let point = problem.trajectory_point(m, k)?;
    Ok(OptimizationOutcome {
        design: DesignPoint::new(point.rho, lambda, m, k),
        ee: point.ee,
        iterations: 1,
        trajectory: vec![point],
        status: Status::Converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(mu: f64, lambda_max: f64) -> Result<OptimizationOutcome> {
        optimize_with_ue_density(
            &PropagationParams::reference(),
            &HardwareProfile::reference(),
            3.0,
            mu,
            lambda_max,
            1..=60,
        )
    }

    #[test]
    fn density_relation_holds() {
        let out = run(1e-3, 0.1).unwrap();
        let d = out.design;
        assert!((d.k as f64 * d.lambda - 1e-3).abs() < 1e-15);
        for w in out.trajectory.windows(2) {
            assert!(w[1].ee > w[0].ee);
        }
    }

    #[test]
    fn density_cap_makes_it_infeasible() {
        // mu / K > lambda_max for every K in 1..=60.
        assert!(matches!(run(1.0, 1e-3), Err(Error::Infeasible(_))));
        assert!(run(-1.0, 1e-3).is_err());
    }

    #[test]
    fn fixed_reference_configs() {
        let p = PropagationParams::reference();
        let h = HardwareProfile::reference();
        let opt = run(1e-2, 0.1).unwrap();
        let mimo = evaluate_with_ue_density(&p, &h, 3.0, 1e-2, 0.1, 195, 20).unwrap();
        let single = evaluate_with_ue_density(&p, &h, 3.0, 1e-2, 0.1, 10, 1).unwrap();
        assert!(mimo.ee <= opt.ee && single.ee < mimo.ee);
        assert!((mimo.design.lambda - 5e-4).abs() < 1e-18);
        assert!(evaluate_with_ue_density(&p, &h, 3.0, 1.0, 0.1, 10, 1).is_err());
    }
}
