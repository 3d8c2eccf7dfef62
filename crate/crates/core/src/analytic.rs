//! Closed-form network model: SE lower bound, area spectral efficiency, area
//! energy consumption, energy efficiency, and the stochastic-geometry moment
//! identities the bound is built from.
//!
//! All functions are pure.

use std::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::params::{DesignPoint, EvaluationResult, HardwareProfile, PropagationParams};

/// `Gamma(x)` for `x > 0` via `exp(lgamma(x))`.
///
/// Arguments used here stay within [1, 20]; relative error is below 1e-12
/// over that range.
pub fn gamma_fn(x: f64) -> f64 {
    libm::lgamma(x).exp()
}

/// Largest SE target supported under impairment level `epsilon`:
/// `-2 log2(epsilon)`, or `+inf` for ideal hardware.
pub fn feasibility_gamma_bound(epsilon: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&epsilon) {
        return Err(invalid(format!("epsilon must lie in [0, 1), got {epsilon}")));
    }
    if epsilon == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(-2.0 * epsilon.log2())
}

/// `E{d^nu}` for the distance from the origin to the nearest point of a
/// PPP with intensity `lambda`: `Gamma(nu/2 + 1) / (pi lambda)^(nu/2)`.
pub fn mean_distance_moment(lambda: f64, nu: f64) -> Result<f64> {
    if !(nu > -2.0) {
        return Err(invalid(format!("distance moment needs nu > -2, got {nu}")));
    }
    if !(lambda > 0.0) {
        return Err(invalid(format!("lambda must be > 0, got {lambda}")));
    }
    Ok(gamma_fn(nu / 2.0 + 1.0) / (PI * lambda).powf(nu / 2.0))
}

/// Expected `sum d_i^-alpha` over PPP points farther than `d0`:
/// `2 pi lambda d0^(2 - alpha) / (alpha - 2)`.
pub fn conditional_interference_mean(lambda: f64, alpha: f64, d0: f64) -> Result<f64> {
    if !(alpha > 2.0) {
        return Err(invalid(format!("alpha must be > 2, got {alpha}")));
    }
    if !(d0 > 0.0) {
        return Err(invalid(format!("d0 must be > 0, got {d0}")));
    }
    if d0.is_infinite() {
        return Ok(0.0);
    }
    Ok(2.0 * PI * lambda * d0.powf(2.0 - alpha) / (alpha - 2.0))
}

/// Same expectation restricted to the annulus `d0 < d <= radius`.
pub fn annulus_interference_mean(lambda: f64, alpha: f64, d0: f64, radius: f64) -> Result<f64> {
    let inner = conditional_interference_mean(lambda, alpha, d0)?;
    let tail = conditional_interference_mean(lambda, alpha, radius)?;
    Ok(inner - tail)
}

/// Noise term of the SE bound before dividing by `rho`:
/// `E{d0^alpha} * omega * sigma2`.
pub fn noise_scale(p: &PropagationParams, lambda: f64) -> Result<f64> {
    Ok(mean_distance_moment(lambda, p.alpha)? * p.omega * p.sigma2)
}

/// Normalized inter-cell interference `2K / (alpha - 2)` in the SE bound.
pub fn interference_term(p: &PropagationParams, k: f64) -> f64 {
    2.0 * k / (p.alpha - 2.0)
}

/// Lower bound on the average SE [bit/symbol/user] with zero-forcing.
pub fn se_lower_bound(p: &PropagationParams, d: &DesignPoint) -> Result<f64> {
    p.validate()?;
    d.validate()?;
    if !(d.rho > 0.0) {
        return Err(invalid(format!("rho must be > 0, got {}", d.rho)));
    }
    let m = d.m as f64;
    let k = d.k as f64;
    let eps2 = p.epsilon * p.epsilon;
    let noise = noise_scale(p, d.lambda)? / d.rho;
    let denom = interference_term(p, k) + eps2 * (m - k) + noise;
    Ok(((1.0 - eps2) * (m - k) / denom).ln_1p() / std::f64::consts::LN_2)
}

/// Limit of [`se_lower_bound`] as `rho -> inf`.
pub fn se_interference_limit(p: &PropagationParams, m: u32, k: u32) -> f64 {
    let (m, k) = (m as f64, k as f64);
    let eps2 = p.epsilon * p.epsilon;
    (1.0 + (1.0 - eps2) * (m - k) / (interference_term(p, k) + eps2 * (m - k))).log2()
}

/// `lambda K SE` [bit/symbol/m^2].
pub fn area_spectral_efficiency(lambda: f64, k: u32, se: f64) -> f64 {
    lambda * k as f64 * se
}

/// Per-AP energy [J/symbol]: radiated plus circuit plus coding/backhaul.
pub fn energy_per_ap(h: &HardwareProfile, m: f64, k: f64, rho: f64, se: f64) -> f64 {
    k * rho / h.eta + h.circuit_energy(m, k) + h.coding_per_bit * k * se
}

/// Area energy consumption [J/symbol/m^2]:
/// `lambda (K rho / eta + C0 + C1 K + D0 M + D1 M K) + A ASE`.
pub fn area_energy_consumption(h: &HardwareProfile, d: &DesignPoint, se: f64) -> f64 {
    let (m, k) = (d.m as f64, d.k as f64);
    d.lambda * (k * d.rho / h.eta + h.circuit_energy(m, k))
        + h.coding_per_bit * area_spectral_efficiency(d.lambda, d.k, se)
}

/// EE [bit/J] for a given SE with the AP density cancelled out.
pub fn ee_from_se(h: &HardwareProfile, m: f64, k: f64, rho: f64, se: f64) -> f64 {
    k * se / energy_per_ap(h, m, k, rho, se)
}

/// Lower bound on the EE [bit/J]: ASE / AEC with the SE lower bound.
pub fn energy_efficiency(
    p: &PropagationParams,
    h: &HardwareProfile,
    d: &DesignPoint,
) -> Result<f64> {
    Ok(evaluate(p, h, d)?.ee)
}

/// Full breakdown at one design point.
pub fn evaluate(
    p: &PropagationParams,
    h: &HardwareProfile,
    d: &DesignPoint,
) -> Result<EvaluationResult> {
    h.validate()?;
    let se = se_lower_bound(p, d)?;
    let ase = area_spectral_efficiency(d.lambda, d.k, se);
    let aec = area_energy_consumption(h, d, se);
    let ee = if aec > 0.0 { ase / aec } else { f64::INFINITY };
    Ok(EvaluationResult {
        se_bound: se,
        ase,
        aec,
        ee,
        feasible: ee.is_finite(),
    })
}

/// EE as `lambda -> inf` with the SE held at `gamma`: the radiated term
/// vanishes and only circuit and coding energy remain.
pub fn ee_density_limit(h: &HardwareProfile, m: u32, k: u32, gamma: f64) -> f64 {
    ee_from_se(h, m as f64, k as f64, 0.0, gamma)
}
