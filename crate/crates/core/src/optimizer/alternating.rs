use super::{is_infeasible, DesignProblem, OptimizationOutcome, Status};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlternatingOptions {
    /// Stop once the relative EE improvement drops below this.
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for AlternatingOptions {
    fn default() -> Self {
        AlternatingOptions {
            tol: 1e-8,
            max_iters: 100,
        }
    }
}

impl DesignProblem {
    /// Alternates the closed-form UE update (at the current `beta = M/K`) and
    /// the closed-form antenna update, refreshing `rho*` after each.
    ///
    /// A UE update that would lower the EE after integer rounding is
    /// rejected, so the trajectory EE never decreases. Iteration stops when
    /// `(M, K)` repeats or the relative improvement is below `tol`.
    pub fn alternating_optimize(
        &self,
        initial_m: u32,
        initial_k: u32,
        opts: &AlternatingOptions,
    ) -> Result<OptimizationOutcome> {
        let start = self.trajectory_point(initial_m, initial_k).map_err(|e| match e {
            Error::Infeasible(msg) => Error::Infeasible(format!("infeasible start: {msg}")),
            other => other,
        })?;
        let mut current = start;
        let mut trajectory = vec![start];
        let mut status = Status::HitIterationCap;
        let mut iterations = 0;

        for _ in 0..opts.max_iters {
            iterations += 1;
            let previous = current;

            let beta = current.m as f64 / current.k as f64;
            match self.best_integer_k(beta) {
                Ok(k) => {
                    let cand = self.trajectory_point(Self::antennas_for_ratio(beta, k), k)?;
                    if cand.ee >= current.ee {
                        current = cand;
                    }
                }
                Err(e) if is_infeasible(&e) => {}
                Err(e) => return Err(e),
            }

            match self.best_integer_m(current.k) {
                Ok(m) => {
                    let cand = self.trajectory_point(m, current.k)?;
                    if cand.ee >= current.ee {
                        current = cand;
                    }
                }
                Err(e) if is_infeasible(&e) => {}
                Err(e) => return Err(e),
            }

            trajectory.push(current);
            let same_point = current.m == previous.m && current.k == previous.k;
            let improvement = (current.ee - previous.ee) / previous.ee.abs().max(f64::MIN_POSITIVE);
            if same_point || improvement < opts.tol {
                status = Status::Converged;
                break;
            }
        }

        Ok(OptimizationOutcome {
            design: crate::params::DesignPoint::new(current.rho, self.lambda, current.m, current.k),
            ee: current.ee,
            iterations,
            trajectory,
            status,
        })
    }

    /// The same alternating scheme on the relaxed problem with real `(M, K)`;
    /// returns the final `(M, K)` and its EE.
    pub fn alternating_relaxed(
        &self,
        initial_m: f64,
        initial_k: f64,
        opts: &AlternatingOptions,
    ) -> Result<(f64, f64, f64)> {
        let ee = |m: f64, k: f64| {
            self.ee_relaxed(m, k)
                .ok_or_else(|| Error::Infeasible(format!("relaxed point ({m}, {k}) infeasible")))
        };
        let (mut m, mut k) = (initial_m, initial_k);
        let mut value = ee(m, k)?;
        for _ in 0..opts.max_iters {
            k = self.k_star(m / k)?;
            m = self.m_star_relaxed(k)?;
            let next = ee(m, k)?;
            let improvement = (next - value) / value;
            value = next;
            if improvement.abs() < opts.tol {
                break;
            }
        }
        Ok((m, k, value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{HardwareProfile, PropagationParams};

    fn reference(gamma: f64) -> DesignProblem {
        DesignProblem::new(
            PropagationParams::reference(),
            HardwareProfile::reference(),
            gamma,
            1e-4,
        )
        .unwrap()
    }

    #[test]
    fn reference_from_single_user_start() {
        let prob = reference(3.0);
        let out = prob
            .alternating_optimize(10, 1, &AlternatingOptions::default())
            .unwrap();
        assert_eq!(out.status, Status::Converged);
        assert!(out.iterations <= 5, "iterations {}", out.iterations);
        let grid = prob.ee(193, 21).unwrap();
        assert!(out.ee >= grid * 0.995);
        assert!(out.ee <= grid * (1.0 + 1e-12));
        for w in out.trajectory.windows(2) {
            assert!(w[1].ee >= w[0].ee * (1.0 - 1e-12));
        }
    }

    #[test]
    fn start_at_optimum_does_not_move() {
        let prob = reference(3.0);
        let out = prob
            .alternating_optimize(193, 21, &AlternatingOptions::default())
            .unwrap();
        assert!(out.iterations <= 1);
        assert_eq!((out.design.m, out.design.k), (193, 21));
    }

    #[test]
    fn infeasible_start_is_an_error() {
        let err = reference(3.0)
            .alternating_optimize(12, 10, &AlternatingOptions::default())
            .unwrap_err();
        assert!(err.to_string().contains("infeasible start"));
    }

    #[test]
    fn iteration_cap_reported() {
        let out = reference(3.0)
            .alternating_optimize(
                10,
                1,
                &AlternatingOptions {
                    tol: 1e-8,
                    max_iters: 1,
                },
            )
            .unwrap();
        assert_eq!(out.status, Status::HitIterationCap);
        assert_eq!(out.iterations, 1);
    }

    #[test]
    fn relaxed_alternation_reaches_relaxed_optimum() {
        // Dense 2-D scan of the relaxed EE as the reference optimum.
        let prob = reference(3.0);
        let (m, k, ee) = prob
            .alternating_relaxed(10.0, 1.0, &AlternatingOptions { tol: 1e-13, max_iters: 10_000 })
            .unwrap();
        let mut best = 0.0f64;
        let mut kk = 10.0;
        while kk <= 30.0 {
            let mut mm = kk * 8.0;
            while mm <= kk * 11.0 {
                if let Some(v) = prob.ee_relaxed(mm, kk) {
                    best = best.max(v);
                }
                mm += 0.05;
            }
            kk += 0.01;
        }
        assert!(ee >= best * (1.0 - 1e-6), "relaxed alternation {ee} at ({m}, {k}) < scan {best}");
    }
}
