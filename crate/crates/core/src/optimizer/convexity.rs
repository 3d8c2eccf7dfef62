//! Numerical convexity evidence for the relaxed problem.
//!
//! The reciprocal EE of the reduced problem is evaluated as a function of
//! real-valued `(K, beta)` with `beta = M/K`, and its Hessian is estimated by
//! central finite differences. Violations are reported, never raised.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::DesignProblem;
use crate::analytic::interference_term;

/// Coordinates the Hessian is taken in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HessianCoordinates {
    /// `(K, beta)` directly.
    Linear,
    /// `(ln K, ln s)` with `s = beta - 1 - 2c/(alpha - 2)` the SE headroom.
    /// Every term of the reciprocal EE is a monomial in `(K, s)` there.
    LogHeadroom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexityReport {
    pub coordinates: HessianCoordinates,
    /// Points at which a Hessian was estimated.
    pub evaluated: usize,
    /// Points outside the feasible region (including `beta -> 1+`).
    pub excluded: usize,
    /// Points whose smallest eigenvalue is below `-tolerance * scale`.
    pub violations: usize,
    /// Minimum over points of `lambda_min / (|lambda_1| + |lambda_2|)`.
    pub worst_ratio: f64,
    /// `(K, beta)` at which `worst_ratio` occurs.
    pub worst_point: Option<(f64, f64)>,
    pub tolerance: f64,
}

impl ConvexityReport {
    pub fn is_psd(&self) -> bool {
        self.violations == 0 && self.evaluated > 0
    }
}

impl DesignProblem {
    /// `beta` below which the SE target cannot be met.
    pub fn min_feasible_beta(&self) -> f64 {
        1.0 + self.sinr_factor() * interference_term(&self.propagation, 1.0)
    }

    /// Reciprocal EE [J/bit] of the reduced problem at real `(K, beta)`.
    pub fn reciprocal_ee_relaxed(&self, k: f64, beta: f64) -> Option<f64> {
        if !(k > 0.0) || !(beta > 1.0) || self.gamma <= 0.0 {
            return None;
        }
        self.ee_relaxed(beta * k, k).map(|ee| 1.0 / ee)
    }

    /// Estimates Hessians at every `(K, beta)` sample and reports the worst
    /// eigenvalue relative to the eigenvalue magnitude.
    ///
    /// Step per coordinate is `max(1e-4, 1e-5 |x|)`.
    pub fn relaxed_convexity_check(
        &self,
        samples: &[(f64, f64)],
        coordinates: HessianCoordinates,
        tolerance: f64,
    ) -> ConvexityReport {
        let s_min = self.min_feasible_beta() - 1.0;
        let objective = |x: [f64; 2]| -> Option<f64> {
            match coordinates {
                HessianCoordinates::Linear => self.reciprocal_ee_relaxed(x[0], x[1]),
                HessianCoordinates::LogHeadroom => {
                    self.reciprocal_ee_relaxed(x[0].exp(), 1.0 + s_min + x[1].exp())
                }
            }
        };

        let mut report = ConvexityReport {
            coordinates,
            evaluated: 0,
            excluded: 0,
            violations: 0,
            worst_ratio: f64::INFINITY,
            worst_point: None,
            tolerance,
        };

        for &(k, beta) in samples {
            let x = match coordinates {
                HessianCoordinates::Linear => [k, beta],
                HessianCoordinates::LogHeadroom => {
                    let s = beta - 1.0 - s_min;
                    if !(s > 0.0) || !(k > 0.0) {
                        report.excluded += 1;
                        continue;
                    }
                    [k.ln(), s.ln()]
                }
            };
            let Some(hess) = finite_difference_hessian(&objective, x) else {
                report.excluded += 1;
                continue;
            };
            let (lo, hi) = symmetric_eigenvalues(hess);
            let scale = lo.abs() + hi.abs();
            let ratio = if scale > 0.0 { lo / scale } else { 0.0 };
            report.evaluated += 1;
            if ratio < -tolerance {
                report.violations += 1;
            }
            if ratio < report.worst_ratio {
                report.worst_ratio = ratio;
                report.worst_point = Some((k, beta));
            }
        }
        report
    }

    /// Smallest second difference of the reciprocal EE along `K` at fixed
    /// `beta` over an increasing grid of `K` values.
    pub fn min_second_difference_along_k(&self, beta: f64, ks: &[f64]) -> Option<f64> {
        let vals: Option<Vec<f64>> = ks
            .iter()
            .map(|&k| self.reciprocal_ee_relaxed(k, beta))
            .collect();
        let vals = vals?;
        ks.windows(3)
            .zip(vals.windows(3))
            .map(|(k, f)| {
                // Non-uniform three-point second derivative.
                let (h1, h2) = (k[1] - k[0], k[2] - k[1]);
                2.0 * (f[0] * h2 - f[1] * (h1 + h2) + f[2] * h1) / (h1 * h2 * (h1 + h2))
            })
            .reduce(f64::min)
    }
}

/// Draws `n` real `(K, beta)` points with `K` uniform in `k_range` and
/// `M = beta K` uniform between the feasibility boundary and `m_max`.
pub fn sample_relaxed_points(
    problem: &DesignProblem,
    n: usize,
    k_range: (f64, f64),
    m_max: f64,
    seed: u64,
) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let beta_min = problem.min_feasible_beta();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let k = rng.random_range(k_range.0..k_range.1);
        let m_lo = beta_min * k;
        if m_lo >= m_max {
            continue;
        }
        let m = rng.random_range(m_lo..m_max);
        if m > m_lo {
            out.push((k, m / k));
        }
    }
    out
}

fn finite_difference_hessian(f: &impl Fn([f64; 2]) -> Option<f64>, x: [f64; 2]) -> Option<[[f64; 2]; 2]> {
    let h = [step(x[0]), step(x[1])];
    let at = |di: f64, dj: f64| f([x[0] + di, x[1] + dj]);
    let f0 = at(0.0, 0.0)?;
    let hxx = (at(h[0], 0.0)? - 2.0 * f0 + at(-h[0], 0.0)?) / (h[0] * h[0]);
    let hyy = (at(0.0, h[1])? - 2.0 * f0 + at(0.0, -h[1])?) / (h[1] * h[1]);
    let hxy = (at(h[0], h[1])? - at(h[0], -h[1])? - at(-h[0], h[1])? + at(-h[0], -h[1])?)
        / (4.0 * h[0] * h[1]);
    Some([[hxx, hxy], [hxy, hyy]])
}

fn step(x: f64) -> f64 {
    (1e-5 * x.abs()).max(1e-4)
}

/// Eigenvalues `(min, max)` of a symmetric 2x2 matrix.
fn symmetric_eigenvalues(a: [[f64; 2]; 2]) -> (f64, f64) {
    let mean = 0.5 * (a[0][0] + a[1][1]);
    let half_diff = 0.5 * (a[0][0] - a[1][1]);
    let r = half_diff.hypot(a[0][1]);
    (mean - r, mean + r)
}
