//! Scenario files.
//!
//! A scenario is a TOML document with three required sections,
//! `[propagation]`, `[hardware]` and `[constraint]`, and two optional ones,
//! `[sweep]` and `[mc]`. Values are written in the units named by their
//! field suffix (dB, W, J/Gbit, J/symbol) and converted to per-symbol
//! energies by [`Scenario::from_file`]. Densities are per square metre.

use std::path::Path;

use eedesign_core::mc::{PrecoderMode, DEFAULT_TAIL_FRACTION};
use eedesign_core::{HardwareProfile, PropagationParams};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Scenario shipped with the binary; used when `--scenario` is absent.
pub const DEFAULT_SCENARIO: &str = include_str!("../scenarios/default.toml");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub propagation: PropagationSection,
    pub hardware: HardwareSection,
    pub constraint: ConstraintSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mc: Option<McSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropagationSection {
    pub alpha: f64,
    pub omega_db: f64,
    pub sigma2: f64,
    pub epsilon: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HardwareSection {
    pub eta: f64,
    #[serde(rename = "A_joule_per_gbit")]
    pub a_joule_per_gbit: f64,
    #[serde(rename = "C0_watt")]
    pub c0_watt: f64,
    #[serde(rename = "C1_watt")]
    pub c1_watt: f64,
    #[serde(rename = "D0_watt")]
    pub d0_watt: f64,
    #[serde(rename = "D1_joule_per_symbol")]
    pub d1_joule_per_symbol: f64,
    pub symbol_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintSection {
    /// SE target [bit/symbol/user].
    pub gamma: f64,
    /// AP density cap [AP/m^2].
    pub lambda_max: f64,
    /// Operating AP density [AP/m^2]; defaults to `lambda_max`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    /// UE density [UE/m^2].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepVariable {
    Lambda,
    Mu,
    Gamma,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::Lambda => "lambda",
            SweepVariable::Mu => "mu",
            SweepVariable::Gamma => "gamma",
        }
    }

    fn default_grid(self) -> GridKind {
        match self {
            SweepVariable::Lambda | SweepVariable::Mu => GridKind::Geometric,
            SweepVariable::Gamma => GridKind::Linear,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridKind {
    Geometric,
    Linear,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub variable: SweepVariable,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridKind>,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    /// Adds Monte-Carlo columns to lambda sweeps.
    #[serde(default)]
    pub mc: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct McSection {
    pub trials: usize,
    pub tail_fraction: f64,
    pub master_seed: u64,
    pub precoder_mode: PrecoderMode,
    pub fading_draws_per_geometry: usize,
    /// Draws per moment-identity check in `mc-validate`.
    pub moment_draws: usize,
}

impl Default for McSection {
    fn default() -> Self {
        McSection {
            trials: 10_000,
            tail_fraction: DEFAULT_TAIL_FRACTION,
            master_seed: 1,
            precoder_mode: PrecoderMode::Distributional,
            fading_draws_per_geometry: 1,
            moment_draws: 2000,
        }
    }
}

impl ScenarioFile {
    /// Parses TOML; errors carry the line, column and offending key.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String, CliError> {
        toml::to_string_pretty(self).map_err(|e| CliError::Internal(e.to_string()))
    }

    pub fn default_file() -> Self {
        Self::parse(DEFAULT_SCENARIO).expect("bundled scenario parses")
    }
}

/// A validated sweep grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub grid: GridKind,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub mc: bool,
}

impl SweepSpec {
    /// Grid points from `start` to `stop`, both included.
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        if n == 1 {
            return vec![self.start];
        }
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    return self.stop;
                }
                let t = i as f64 / (n - 1) as f64;
                match self.grid {
                    GridKind::Linear => self.start + t * (self.stop - self.start),
                    GridKind::Geometric => self.start * (self.stop / self.start).powf(t),
                }
            })
            .collect()
    }
}

/// Monte-Carlo settings after validation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McSettings {
    pub trials: usize,
    pub tail_fraction: f64,
    pub master_seed: u64,
    pub precoder_mode: PrecoderMode,
    pub fading_draws_per_geometry: usize,
    pub moment_draws: usize,
}

/// A scenario in internal units.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub propagation: PropagationParams,
    pub hardware: HardwareProfile,
    pub gamma: f64,
    pub lambda: f64,
    pub lambda_max: f64,
    pub mu: Option<f64>,
    pub sweep: Option<SweepSpec>,
    pub mc: McSettings,
}

fn field_error(field: &str, e: impl std::fmt::Display) -> CliError {
    CliError::Core(eedesign_core::Error::InvalidParameter(format!("{field}: {e}")))
}

fn positive(field: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(field_error(field, format!("must be a positive finite number, got {v}")))
    }
}

impl Scenario {
    pub fn from_file(f: &ScenarioFile) -> Result<Self, CliError> {
        let p = &f.propagation;
        let propagation = PropagationParams::with_omega_db(p.alpha, p.omega_db, p.sigma2, p.epsilon)
            .map_err(|e| field_error("propagation", e))?;
        let h = &f.hardware;
        let hardware = HardwareProfile::from_quoted_units(
            h.eta,
            h.a_joule_per_gbit,
            h.c0_watt,
            h.c1_watt,
            h.d0_watt,
            h.d1_joule_per_symbol,
            h.symbol_time,
        )
        .map_err(|e| field_error("hardware", e))?;

        let c = &f.constraint;
        if !(c.gamma >= 0.0) || !c.gamma.is_finite() {
            return Err(field_error("constraint.gamma", format!("must be >= 0, got {}", c.gamma)));
        }
        let lambda_max = positive("constraint.lambda_max", c.lambda_max)?;
        let lambda = positive("constraint.lambda", c.lambda.unwrap_or(lambda_max))?;
        if lambda > lambda_max {
            return Err(field_error(
                "constraint.lambda",
                format!("{lambda} exceeds lambda_max = {lambda_max}"),
            ));
        }
        let mu = c.mu.map(|m| positive("constraint.mu", m)).transpose()?;

        let sweep = f.sweep.as_ref().map(sweep_spec).transpose()?;

        let m = f.mc.clone().unwrap_or_default();
        if m.trials == 0 {
            return Err(field_error("mc.trials", "must be at least 1"));
        }
        if m.fading_draws_per_geometry == 0 {
            return Err(field_error("mc.fading_draws_per_geometry", "must be at least 1"));
        }
        if m.moment_draws < 2 {
            return Err(field_error("mc.moment_draws", "must be at least 2"));
        }
        if !(m.tail_fraction > 0.0) || !m.tail_fraction.is_finite() {
            return Err(field_error("mc.tail_fraction", "must be a positive finite number"));
        }
        let mc = McSettings {
            trials: m.trials,
            tail_fraction: m.tail_fraction,
            master_seed: m.master_seed,
            precoder_mode: m.precoder_mode,
            fading_draws_per_geometry: m.fading_draws_per_geometry,
            moment_draws: m.moment_draws,
        };

        Ok(Scenario {
            propagation,
            hardware,
            gamma: c.gamma,
            lambda,
            lambda_max,
            mu,
            sweep,
            mc,
        })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        Self::from_file(&ScenarioFile::parse(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Parse(msg) => CliError::Parse(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn default_scenario() -> Self {
        Self::parse(DEFAULT_SCENARIO).expect("bundled scenario is valid")
    }
}

fn sweep_spec(s: &SweepSection) -> Result<SweepSpec, CliError> {
    let grid = s.grid.unwrap_or_else(|| s.variable.default_grid());
    if s.points == 0 {
        return Err(field_error("sweep.points", "must be at least 1"));
    }
    if !s.start.is_finite() || !s.stop.is_finite() {
        return Err(field_error("sweep", "start and stop must be finite"));
    }
    if grid == GridKind::Geometric && !(s.start > 0.0 && s.stop > 0.0) {
        return Err(field_error("sweep", "a geometric grid needs start > 0 and stop > 0"));
    }
    if s.variable != SweepVariable::Gamma && !(s.start > 0.0 && s.stop > 0.0) {
        return Err(field_error("sweep", "densities must be > 0"));
    }
    Ok(SweepSpec {
        variable: s.variable,
        grid,
        start: s.start,
        stop: s.stop,
        points: s.points,
        mc: s.mc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_scenario_is_the_reference_deployment() {
        let s = Scenario::default_scenario();
        assert_eq!(s.propagation, PropagationParams::reference());
        assert_eq!(s.hardware, HardwareProfile::reference());
        assert_eq!((s.gamma, s.lambda, s.lambda_max), (3.0, 1e-4, 0.1));
        assert_eq!(s.mc.trials, 10_000);
    }

    #[test]
    fn round_trip_through_toml() {
        let parsed = ScenarioFile::default_file();
        let text = parsed.to_toml().unwrap();
        let again = ScenarioFile::parse(&text).unwrap();
        assert_eq!(parsed, again);
        assert_eq!(
            Scenario::from_file(&parsed).unwrap(),
            Scenario::from_file(&again).unwrap()
        );
    }

    #[test]
    fn parse_errors_name_the_location() {
        let text = DEFAULT_SCENARIO.replace("eta = 0.39", "eta = \"high\"");
        let msg = ScenarioFile::parse(&text).unwrap_err().to_string();
        assert!(msg.contains("line") && msg.contains("eta"), "{msg}");

        let text = DEFAULT_SCENARIO.replace("alpha = 3.76", "alpha = 3.76\nbeta = 1");
        let msg = ScenarioFile::parse(&text).unwrap_err().to_string();
        assert!(msg.contains("beta"), "{msg}");
    }

    #[test]
    fn invalid_values_name_the_field() {
        let text = DEFAULT_SCENARIO.replace("lambda = 1e-4", "lambda = 0.5");
        let msg = Scenario::parse(&text).unwrap_err().to_string();
        assert!(msg.contains("constraint.lambda"), "{msg}");

        let text = DEFAULT_SCENARIO.replace("eta = 0.39", "eta = -1.0");
        assert!(matches!(Scenario::parse(&text), Err(CliError::Core(_))));
    }

    #[test]
    fn optional_sections_fall_back() {
        let mut f = ScenarioFile::default_file();
        f.sweep = None;
        f.mc = None;
        f.constraint.lambda = None;
        let s = Scenario::from_file(&f).unwrap();
        assert_eq!(s.lambda, s.lambda_max);
        assert!(s.sweep.is_none());
        assert_eq!(s.mc.master_seed, 1);
    }

    #[test]
    fn grid_values() {
        let g = SweepSpec {
            variable: SweepVariable::Lambda,
            grid: GridKind::Geometric,
            start: 1e-6,
            stop: 1e-2,
            points: 5,
            mc: false,
        };
        let v = g.values();
        assert_eq!(v.len(), 5);
        assert_eq!((v[0], v[4]), (1e-6, 1e-2));
        assert!((v[2] - 1e-4).abs() < 1e-16);

        let lin = SweepSpec { grid: GridKind::Linear, start: 1.0, stop: 5.0, ..g.clone() };
        assert_eq!(lin.values(), vec![1.0, 2.0, 3.0, 4.0, 5.0]);
        let single = SweepSpec { points: 1, ..g };
        assert_eq!(single.values(), vec![1e-6]);
    }

    #[test]
    fn gamma_defaults_to_linear_grid() {
        let mut f = ScenarioFile::default_file();
        f.sweep = Some(SweepSection {
            variable: SweepVariable::Gamma,
            grid: None,
            start: 1.0,
            stop: 5.0,
            points: 3,
            mc: false,
        });
        let s = Scenario::from_file(&f).unwrap();
        assert_eq!(s.sweep.unwrap().values(), vec![1.0, 3.0, 5.0]);
    }
}
