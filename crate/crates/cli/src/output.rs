//! CSV output.
//!
//! Every command writes rows with the same columns, in this order:
//! `swept_variable, swept_value, design, M, K, lambda, rho,
//! total_radiated_power_watt, se_bound, ee_analytic, ee_mc_mean,
//! ee_mc_halfwidth, status`. Floats use scientific notation with a fixed
//! number of significant digits; absent values are empty fields. Units:
//! lambda [AP/m^2], rho [J/symbol], power [W], SE [bit/symbol/user],
//! EE [bit/J].

use std::io::Write;

use eedesign_core::analytic::{ee_from_se, evaluate};
use eedesign_core::stats::McEstimate;
use eedesign_core::{DesignPoint, HardwareProfile, PropagationParams};

use crate::error::CliError;

pub const DEFAULT_PRECISION: usize = 9;

pub const SWEEP_HEADER: [&str; 13] = [
    "swept_variable",
    "swept_value",
    "design",
    "M",
    "K",
    "lambda",
    "rho",
    "total_radiated_power_watt",
    "se_bound",
    "ee_analytic",
    "ee_mc_mean",
    "ee_mc_halfwidth",
    "status",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowStatus {
    Ok,
    Infeasible,
    /// The analytic bound exceeds the Monte-Carlo upper confidence limit.
    BoundViolation,
}

impl RowStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::Infeasible => "infeasible",
            RowStatus::BoundViolation => "bound-violation",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub swept_variable: String,
    pub swept_value: Option<f64>,
    pub design: String,
    pub m: Option<u32>,
    pub k: Option<u32>,
    pub lambda: Option<f64>,
    pub rho: Option<f64>,
    pub total_radiated_power_watt: Option<f64>,
    pub se_bound: Option<f64>,
    pub ee_analytic: Option<f64>,
    pub ee_mc_mean: Option<f64>,
    pub ee_mc_halfwidth: Option<f64>,
    pub status: RowStatus,
}

impl SweepRow {
    /// Row for a feasible design, with the analytic columns filled in.
    pub fn feasible(
        variable: &str,
        value: Option<f64>,
        label: &str,
        p: &PropagationParams,
        h: &HardwareProfile,
        d: &DesignPoint,
    ) -> Result<Self, CliError> {
        let r = evaluate(p, h, d)?;
        Ok(SweepRow {
            swept_variable: variable.to_string(),
            swept_value: value,
            design: label.to_string(),
            m: Some(d.m),
            k: Some(d.k),
            lambda: Some(d.lambda),
            rho: Some(d.rho),
            total_radiated_power_watt: Some(d.radiated_power_watt(h.symbol_time)),
            se_bound: Some(r.se_bound),
            ee_analytic: Some(r.ee),
            ee_mc_mean: None,
            ee_mc_halfwidth: None,
            status: RowStatus::Ok,
        })
    }

    pub fn infeasible(variable: &str, value: Option<f64>, label: &str, lambda: Option<f64>) -> Self {
        SweepRow {
            swept_variable: variable.to_string(),
            swept_value: value,
            design: label.to_string(),
            m: None,
            k: None,
            lambda,
            rho: None,
            total_radiated_power_watt: None,
            se_bound: None,
            ee_analytic: None,
            ee_mc_mean: None,
            ee_mc_halfwidth: None,
            status: RowStatus::Infeasible,
        }
    }

    /// Fills the MC columns from an SE estimate: the EE is evaluated at the
    /// estimated SE and the half-width maps the SE interval through it.
    pub fn with_mc(mut self, h: &HardwareProfile, se: &McEstimate) -> Self {
        if let (Some(m), Some(k), Some(rho)) = (self.m, self.k, self.rho) {
            let ee = |s: f64| ee_from_se(h, m as f64, k as f64, rho, s);
            self.ee_mc_mean = Some(ee(se.mean));
            self.ee_mc_halfwidth = Some(if se.half_width.is_finite() {
                0.5 * (ee(se.upper()) - ee(se.lower().max(0.0)))
            } else {
                f64::INFINITY
            });
        }
        self
    }
}

/// Float formatting with `precision` significant digits.
#[derive(Debug, Clone, Copy)]
pub struct Formatter {
    pub precision: usize,
}

impl Default for Formatter {
    fn default() -> Self {
        Formatter {
            precision: DEFAULT_PRECISION,
        }
    }
}

impl Formatter {
    pub fn new(precision: usize) -> Result<Self, CliError> {
        if !(1..=17).contains(&precision) {
            return Err(CliError::Usage(format!(
                "precision must be between 1 and 17 significant digits, got {precision}"
            )));
        }
        Ok(Formatter { precision })
    }

    pub fn float(&self, v: f64) -> String {
        format!("{:.*e}", self.precision - 1, v)
    }

    fn opt(&self, v: Option<f64>) -> String {
        v.map(|x| self.float(x)).unwrap_or_default()
    }

    fn opt_int(v: Option<u32>) -> String {
        v.map(|x| x.to_string()).unwrap_or_default()
    }

    fn writer<W: Write>(w: W) -> csv::Writer<W> {
        csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(w)
    }

    pub fn write_rows<W: Write>(&self, w: W, rows: &[SweepRow]) -> Result<(), CliError> {
        let mut out = Self::writer(w);
        out.write_record(SWEEP_HEADER)?;
        for r in rows {
            out.write_record([
                r.swept_variable.clone(),
                self.opt(r.swept_value),
                r.design.clone(),
                Self::opt_int(r.m),
                Self::opt_int(r.k),
                self.opt(r.lambda),
                self.opt(r.rho),
                self.opt(r.total_radiated_power_watt),
                self.opt(r.se_bound),
                self.opt(r.ee_analytic),
                self.opt(r.ee_mc_mean),
                self.opt(r.ee_mc_halfwidth),
                r.status.as_str().to_string(),
            ])?;
        }
        out.flush().map_err(|e| CliError::Internal(e.to_string()))?;
        Ok(())
    }

    /// Generic table writer for the auxiliary outputs.
    pub fn write_table<W: Write>(
        &self,
        w: W,
        header: &[&str],
        rows: impl IntoIterator<Item = Vec<String>>,
    ) -> Result<(), CliError> {
        let mut out = Self::writer(w);
        out.write_record(header)?;
        for r in rows {
            out.write_record(r)?;
        }
        out.flush().map_err(|e| CliError::Internal(e.to_string()))?;
        Ok(())
    }

    pub fn rows_to_string(&self, rows: &[SweepRow]) -> Result<String, CliError> {
        let mut buf = Vec::new();
        self.write_rows(&mut buf, rows)?;
        String::from_utf8(buf).map_err(|e| CliError::Internal(e.to_string()))
    }
}
