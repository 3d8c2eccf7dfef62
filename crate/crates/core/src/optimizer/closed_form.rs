//! Closed-form optima for the transmit power, the antenna count and the UE
//! count, and the integer rounding around the real-valued optima.

use super::{is_infeasible, DesignProblem};
use crate::analytic::{interference_term, noise_scale};
use crate::error::{invalid, Error, Result};

impl DesignProblem {
    /// `(2^gamma - 1) / (1 - 2^gamma epsilon^2)`: the SINR needed to hit the
    /// target, inflated by the distortion noise.
    pub fn sinr_factor(&self) -> f64 {
        let g = self.gamma.exp2();
        (g - 1.0) / (1.0 - g * self.propagation.epsilon.powi(2))
    }

    /// `omega sigma^2 Gamma(alpha/2 + 1) / (pi lambda)^(alpha/2)`.
    fn noise_energy(&self) -> f64 {
        noise_scale(&self.propagation, self.lambda).expect("validated at construction")
    }

    /// Denominator of `rho*`. Feasible iff positive.
    fn rho_denominator(&self, m: f64, k: f64) -> f64 {
        m - k - self.sinr_factor() * interference_term(&self.propagation, k)
    }

    /// Transmit energy per UE [J/symbol] that makes the SE bound equal `gamma`.
    pub fn rho_star(&self, m: u32, k: u32) -> Result<f64> {
        if k == 0 || m < k + 1 {
            return Err(invalid(format!(
                "zero-forcing needs M >= K + 1 >= 2, got M = {m}, K = {k}"
            )));
        }
        self.rho_star_relaxed(m as f64, k as f64).ok_or_else(|| {
            Error::Infeasible(format!(
                "SE target {} bit/symbol unreachable at M = {m}, K = {k}: needs M - K > {:.4}",
                self.gamma,
                self.sinr_factor() * interference_term(&self.propagation, k as f64)
            ))
        })
    }

    pub(crate) fn rho_star_relaxed(&self, m: f64, k: f64) -> Option<f64> {
        let den = self.rho_denominator(m, k);
        if !(den > 0.0) {
            return None;
        }
        Some(self.sinr_factor() * self.noise_energy() / den)
    }

    /// Real-valued EE-optimal antenna count for `k` UEs.
    pub fn m_star(&self, k: u32) -> Result<f64> {
        if k == 0 {
            return Err(invalid("K must be at least 1"));
        }
        self.m_star_relaxed(k as f64)
    }

    pub(crate) fn m_star_relaxed(&self, k: f64) -> Result<f64> {
        let h = &self.hardware;
        let c = self.sinr_factor();
        let antenna_cost = h.per_antenna + h.signal_processing * k;
        let radiated = c * k * self.noise_energy() / h.eta;
        if antenna_cost <= 0.0 && radiated > 0.0 {
            return Err(invalid("D0 + D1 K must be > 0 for a finite antenna optimum"));
        }
        let sqrt_term = if radiated == 0.0 {
            0.0
        } else {
            (radiated / antenna_cost).sqrt()
        };
        Ok(k + c * interference_term(&self.propagation, k) + sqrt_term)
    }

    /// Real-valued EE-optimal UE count at fixed antenna-to-UE ratio `beta`.
    pub fn k_star(&self, beta: f64) -> Result<f64> {
        if !(beta > 1.0) {
            return Err(invalid(format!("beta = M/K must exceed 1, got {beta}")));
        }
        let h = &self.hardware;
        let c = self.sinr_factor();
        let slack = beta - 1.0 - c * interference_term(&self.propagation, 1.0);
        if !(slack > 0.0) {
            return Err(Error::Infeasible(format!(
                "beta = {beta} leaves no headroom for the SE target (needs beta > {:.4})",
                1.0 + c * interference_term(&self.propagation, 1.0)
            )));
        }
        if !(h.signal_processing > 0.0) {
            return Err(invalid("D1 must be > 0 for a finite UE optimum"));
        }
        let radiated = c * self.noise_energy() / h.eta;
        let k2 = radiated / (beta * h.signal_processing * slack)
            + h.static_energy / (beta * h.signal_processing);
        Ok(k2.sqrt())
    }

    /// Integer antenna count around `m_star(k)`: the better of floor and
    /// ceiling, ties going to the smaller count.
    pub fn best_integer_m(&self, k: u32) -> Result<u32> {
        let m_real = self.m_star(k)?;
        let lo = (m_real.floor() as u32).max(k + 1);
        let hi = (m_real.floor() as u32 + 1).max(k + 1);
        best_of(lo, hi, |m| self.ee(m, k)).map(|(m, _)| m)
    }

    /// Antenna count paired with `k` UEs at ratio `beta`.
    pub fn antennas_for_ratio(beta: f64, k: u32) -> u32 {
        ((beta * k as f64).round() as u32).max(k + 1)
    }

    /// Integer UE count around `k_star(beta)`, evaluated with
    /// `M = round(beta K)`; ties go to the smaller count.
    pub fn best_integer_k(&self, beta: f64) -> Result<u32> {
        let k_real = self.k_star(beta)?;
        let lo = (k_real.floor() as u32).max(1);
        let hi = (k_real.floor() as u32 + 1).max(1);
        best_of(lo, hi, |k| self.ee(Self::antennas_for_ratio(beta, k), k)).map(|(k, _)| k)
    }
}

/// Picks the better of two integer candidates, skipping infeasible ones.
fn best_of(lo: u32, hi: u32, ee: impl Fn(u32) -> Result<f64>) -> Result<(u32, f64)> {
    let mut best: Option<(u32, f64)> = None;
    let mut last_err = None;
    for cand in [lo, hi] {
        match ee(cand) {
            Ok(v) => {
                if best.map_or(true, |(_, b)| v > b) {
                    best = Some((cand, v));
                }
            }
            Err(e) if is_infeasible(&e) || matches!(e, Error::InvalidParameter(_)) => {
                last_err = Some(e)
            }
            Err(e) => return Err(e),
        }
    }
    best.ok_or_else(|| {
        last_err.unwrap_or_else(|| Error::Infeasible("no feasible integer neighbor".into()))
    })
}
