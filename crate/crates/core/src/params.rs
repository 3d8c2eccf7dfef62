//! Model parameters and decision variables.
//!
//! Every energy quantity is carried per symbol (Joule/symbol). Watts only
//! appear at the I/O boundary, converted with the symbol time `S`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Joule per Gbit to Joule per bit.
pub const JOULE_PER_GBIT: f64 = 1e-9;

/// Converts a power ratio in dB to linear scale.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Pathloss, noise and hardware-impairment environment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropagationParams {
    /// Pathloss exponent, must exceed 2.
    pub alpha: f64,
    /// Fixed propagation loss on linear scale (35 dB is `10^3.5`).
    pub omega: f64,
    /// Noise energy per symbol [J/symbol].
    pub sigma2: f64,
    /// Hardware impairment level, `0 <= epsilon < 1`.
    pub epsilon: f64,
}

impl PropagationParams {
    pub fn new(alpha: f64, omega: f64, sigma2: f64, epsilon: f64) -> Result<Self> {
        let p = PropagationParams {
            alpha,
            omega,
            sigma2,
            epsilon,
        };
        p.validate()?;
        Ok(p)
    }

    /// Builds the parameters with `omega` quoted in dB.
    pub fn with_omega_db(alpha: f64, omega_db: f64, sigma2: f64, epsilon: f64) -> Result<Self> {
        Self::new(alpha, db_to_linear(omega_db), sigma2, epsilon)
    }

    /// Reference deployment: alpha 3.76, omega 35 dB, sigma2 1e-20, epsilon 0.05.
    pub fn reference() -> Self {
        PropagationParams {
            alpha: 3.76,
            omega: db_to_linear(35.0),
            sigma2: 1e-20,
            epsilon: 0.05,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 2.0) || !self.alpha.is_finite() {
            return Err(invalid(format!("alpha must be > 2, got {}", self.alpha)));
        }
        if !(self.omega > 0.0) || !self.omega.is_finite() {
            return Err(invalid(format!("omega must be > 0, got {}", self.omega)));
        }
        if !(self.sigma2 >= 0.0) || !self.sigma2.is_finite() {
            return Err(invalid(format!("sigma2 must be >= 0, got {}", self.sigma2)));
        }
        if !(0.0..1.0).contains(&self.epsilon) {
            return Err(invalid(format!(
                "epsilon must lie in [0, 1), got {}",
                self.epsilon
            )));
        }
        Ok(())
    }
}

/// Circuit and amplifier energy model, all per-symbol.
///
/// `coding_per_bit` multiplies the spectral efficiency in bit/symbol, so
/// `coding_per_bit * se` is Joule/symbol like every other term. A value
/// quoted in J/Gbit is scaled by [`JOULE_PER_GBIT`] on the way in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardwareProfile {
    /// Amplifier efficiency in (0, 1].
    pub eta: f64,
    /// Coding, decoding and backhaul energy [J/bit].
    pub coding_per_bit: f64,
    /// Static energy per AP [J/symbol].
    pub static_energy: f64,
    /// Circuit energy per active UE [J/symbol].
    pub per_ue: f64,
    /// Circuit energy per AP antenna [J/symbol].
    pub per_antenna: f64,
    /// Signal processing coefficient multiplying `M * K` [J/symbol].
    pub signal_processing: f64,
    /// Symbol time [s/symbol].
    pub symbol_time: f64,
}

impl HardwareProfile {
    /// Builds a profile from the units the hardware literature quotes:
    /// J/Gbit for coding, Watts for the circuit terms, J/symbol for the
    /// signal-processing coefficient.
    #[allow(clippy::too_many_arguments)]
    pub fn from_quoted_units(
        eta: f64,
        coding_joule_per_gbit: f64,
        static_watt: f64,
        per_ue_watt: f64,
        per_antenna_watt: f64,
        signal_processing_joule_per_symbol: f64,
        symbol_time: f64,
    ) -> Result<Self> {
        let h = HardwareProfile {
            eta,
            coding_per_bit: coding_joule_per_gbit * JOULE_PER_GBIT,
            static_energy: static_watt * symbol_time,
            per_ue: per_ue_watt * symbol_time,
            per_antenna: per_antenna_watt * symbol_time,
            signal_processing: signal_processing_joule_per_symbol,
            symbol_time,
        };
        h.validate()?;
        Ok(h)
    }

    pub fn reference() -> Self {
        let symbol_time = 1.0 / 2e7;
        HardwareProfile {
            eta: 0.39,
            coding_per_bit: 1.15 * JOULE_PER_GBIT,
            static_energy: 10.0 * symbol_time,
            per_ue: 0.1 * symbol_time,
            per_antenna: 1.0 * symbol_time,
            signal_processing: 1.56e-10,
            symbol_time,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return Err(invalid(format!("eta must lie in (0, 1], got {}", self.eta)));
        }
        let nonneg = [
            ("A", self.coding_per_bit),
            ("C0", self.static_energy),
            ("C1", self.per_ue),
            ("D0", self.per_antenna),
            ("D1", self.signal_processing),
        ];
        for (name, v) in nonneg {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(invalid(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        if !(self.symbol_time > 0.0) {
            return Err(invalid(format!(
                "symbol time must be > 0, got {}",
                self.symbol_time
            )));
        }
        Ok(())
    }

    /// Circuit energy per AP: `C0 + C1 K + D0 M + D1 M K`.
    pub fn circuit_energy(&self, m: f64, k: f64) -> f64 {
        self.static_energy + self.per_ue * k + self.per_antenna * m + self.signal_processing * m * k
    }

    /// Converts a per-symbol energy to Watts.
    pub fn to_watt(&self, joule_per_symbol: f64) -> f64 {
        joule_per_symbol / self.symbol_time
    }

    /// Multiplies every energy coefficient by `factor` and divides `eta` by it.
    /// Used by the argmax invariance checks; `eta` may leave (0, 1].
    pub fn scaled(&self, factor: f64) -> Self {
        HardwareProfile {
            eta: self.eta / factor,
            coding_per_bit: self.coding_per_bit * factor,
            static_energy: self.static_energy * factor,
            per_ue: self.per_ue * factor,
            per_antenna: self.per_antenna * factor,
            signal_processing: self.signal_processing * factor,
            symbol_time: self.symbol_time,
        }
    }
}

/// The four decision variables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignPoint {
    /// Transmit energy per symbol per UE [J/symbol].
    pub rho: f64,
    /// AP density [AP/m^2].
    pub lambda: f64,
    /// Antennas per AP.
    pub m: u32,
    /// Active UEs per AP.
    pub k: u32,
}

impl DesignPoint {
    pub fn new(rho: f64, lambda: f64, m: u32, k: u32) -> Self {
        DesignPoint { rho, lambda, m, k }
    }

    /// Checks `M >= K + 1`, `K >= 1`, `lambda > 0` and `rho >= 0`.
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(invalid("K must be at least 1"));
        }
        if self.m < self.k + 1 {
            return Err(invalid(format!(
                "zero-forcing needs M >= K + 1, got M = {}, K = {}",
                self.m, self.k
            )));
        }
        if !(self.lambda > 0.0) || !self.lambda.is_finite() {
            return Err(invalid(format!("lambda must be > 0, got {}", self.lambda)));
        }
        if !(self.rho >= 0.0) || self.rho.is_nan() {
            return Err(invalid(format!("rho must be >= 0, got {}", self.rho)));
        }
        Ok(())
    }

    /// Total radiated power `K rho / S` in Watt.
    pub fn radiated_power_watt(&self, symbol_time: f64) -> f64 {
        self.k as f64 * self.rho / symbol_time
    }
}

/// Service constraint of the design problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    /// Target average SE [bit/symbol].
    pub gamma: f64,
    /// Largest deployable AP density [AP/m^2].
    pub lambda_max: f64,
    /// UE density [UE/m^2] for the fixed-UE-density variant.
    pub mu: Option<f64>,
}

/// Breakdown of one design point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvaluationResult {
    /// SE lower bound [bit/symbol/user].
    pub se_bound: f64,
    /// [bit/symbol/m^2]
    pub ase: f64,
    /// [J/symbol/m^2]
    pub aec: f64,
    /// [bit/J]
    pub ee: f64,
    pub feasible: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_db_conversion() {
        assert!((db_to_linear(35.0) - 10f64.powf(3.5)).abs() < 1e-9);
        assert!((linear_to_db(db_to_linear(35.0)) - 35.0).abs() < 1e-12);
    }

    #[test]
    fn quoted_units_match_reference() {
        let h = HardwareProfile::from_quoted_units(0.39, 1.15, 10.0, 0.1, 1.0, 1.56e-10, 5e-8)
            .unwrap();
        let t = HardwareProfile::reference();
        assert!((h.coding_per_bit - 1.15e-9).abs() < 1e-24);
        assert!((h.static_energy - 5e-7).abs() < 1e-22);
        assert!((h.static_energy - t.static_energy).abs() < 1e-22);
        assert!((h.to_watt(h.per_antenna) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn propagation_rejects_bad_values() {
        assert!(PropagationParams::new(2.0, 1.0, 1e-20, 0.0).is_err());
        assert!(PropagationParams::new(3.0, 1.0, 1e-20, 1.0).is_err());
        assert!(PropagationParams::new(3.0, 0.0, 1e-20, 0.1).is_err());
        assert!(PropagationParams::new(3.0, 1.0, 1e-20, 0.0).is_ok());
    }

    #[test]
    fn design_requires_zf_headroom() {
        assert!(DesignPoint::new(1e-12, 1e-4, 5, 5).validate().is_err());
        assert!(DesignPoint::new(1e-12, 1e-4, 6, 5).validate().is_ok());
        assert!(DesignPoint::new(1e-12, 0.0, 6, 5).validate().is_err());
        assert!(DesignPoint::new(1e-12, 1e-4, 6, 0).validate().is_err());
    }

    #[test]
    fn hardware_rejects_bad_eta() {
        let mut h = HardwareProfile::reference();
        h.eta = 0.0;
        assert!(h.validate().is_err());
        h.eta = 1.0;
        assert!(h.validate().is_ok());
    }
}
