//! The four subcommands as library functions. Each returns a report; the
//! binary prints it and writes the CSV files.

use eedesign_core::analytic::{evaluate, feasibility_gamma_bound, se_lower_bound};
use eedesign_core::mc::{
    estimate_ergodic_se, validate_moment_identities, window_for_tail_fraction, MomentProbe,
    MomentReport, SimulationConfig,
};
use eedesign_core::optimizer::{
    evaluate_with_ue_density, optimize_with_ue_density, AlternatingOptions, DesignProblem,
    GridSearchReport, OptimizationOutcome, DEFAULT_K_RANGE, DEFAULT_M_RANGE,
};
use eedesign_core::stats::McEstimate;
use eedesign_core::{DesignPoint, Error, EvaluationResult};

use crate::error::CliError;
use crate::output::{RowStatus, SweepRow};
use crate::scenario::{McSettings, Scenario, SweepSpec, SweepVariable};

/// Fixed reference designs reported next to the optimum in UE-density sweeps.
pub const REFERENCE_DESIGNS: [(u32, u32); 2] = [(10, 1), (195, 20)];

/// Significance level of the serving-distance KS test.
pub const KS_SIGNIFICANCE: f64 = 0.01;

/// Builds the design problem, reporting an SE target beyond the impairment
/// bound as infeasible.
pub fn design_problem(s: &Scenario, gamma: f64, lambda: f64) -> Result<DesignProblem, CliError> {
    let bound = feasibility_gamma_bound(s.propagation.epsilon)?;
    if gamma >= bound {
        return Err(Error::Infeasible(format!(
            "gamma = {gamma} bit/symbol cannot be met: with epsilon = {} the SE target must \
             satisfy gamma < -2 log2(epsilon) = {bound:.4}",
            s.propagation.epsilon
        ))
        .into());
    }
    Ok(DesignProblem::new(s.propagation, s.hardware, gamma, lambda)?)
}

fn is_infeasible(e: &CliError) -> bool {
    matches!(e, CliError::Core(Error::Infeasible(_) | Error::EmptyFeasibleSet))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluateReport {
    pub design: DesignPoint,
    pub result: EvaluationResult,
    pub radiated_power_watt: f64,
    pub row: SweepRow,
}

/// EE breakdown at `(m, k)` with `rho = rho*` for the scenario's target.
pub fn run_evaluate(s: &Scenario, m: u32, k: u32) -> Result<EvaluateReport, CliError> {
    let problem = design_problem(s, s.gamma, s.lambda)?;
    DesignPoint::new(0.0, s.lambda, m, k).validate()?;
    let design = problem.design(m, k)?;
    let result = evaluate(&s.propagation, &s.hardware, &design)?;
    let row = SweepRow::feasible("none", None, "fixed", &s.propagation, &s.hardware, &design)?;
    Ok(EvaluateReport {
        design,
        result,
        radiated_power_watt: design.radiated_power_watt(s.hardware.symbol_time),
        row,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Alternating,
    Grid,
    Both,
}

impl std::str::FromStr for Method {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "alternating" => Ok(Method::Alternating),
            "grid" => Ok(Method::Grid),
            "both" => Ok(Method::Both),
            other => Err(CliError::Usage(format!(
                "unknown method '{other}' (expected alternating, grid or both)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeReport {
    pub grid: Option<GridSearchReport>,
    pub alternating: Option<OptimizationOutcome>,
    /// `(EE_grid - EE_alternating) / EE_grid` when both ran.
    pub relative_gap: Option<f64>,
    pub rows: Vec<SweepRow>,
}

pub fn run_optimize(s: &Scenario, method: Method, start: (u32, u32)) -> Result<OptimizeReport, CliError> {
    let problem = design_problem(s, s.gamma, s.lambda)?;
    let mut rows = Vec::new();
    let grid = if matches!(method, Method::Grid | Method::Both) {
        let report = problem.grid_search(DEFAULT_M_RANGE, DEFAULT_K_RANGE)?;
        let d = report.best;
        rows.push(SweepRow::feasible("none", None, "grid", &s.propagation, &s.hardware, &d)?);
        Some(report)
    } else {
        None
    };
    let alternating = if matches!(method, Method::Alternating | Method::Both) {
        let out = problem.alternating_optimize(start.0, start.1, &AlternatingOptions::default())?;
        rows.push(SweepRow::feasible(
            "none",
            None,
            "alternating",
            &s.propagation,
            &s.hardware,
            &out.design,
        )?);
        Some(out)
    } else {
        None
    };
    let relative_gap = match (&grid, &alternating) {
        (Some(g), Some(a)) => Some((g.best_ee - a.ee) / g.best_ee),
        _ => None,
    };
    Ok(OptimizeReport {
        grid,
        alternating,
        relative_gap,
        rows,
    })
}

/// Grid-optimal design at the given target and density, or `None` when no
/// feasible cell exists.
fn grid_optimum(s: &Scenario, gamma: f64, lambda: f64) -> Result<Option<DesignPoint>, CliError> {
    let attempt = || -> Result<DesignPoint, CliError> {
        let problem = design_problem(s, gamma, lambda)?;
        let r = problem.grid_search(DEFAULT_M_RANGE, DEFAULT_K_RANGE)?;
        Ok(r.best)
    };
    match attempt() {
        Ok(d) => Ok(Some(d)),
        Err(e) if is_infeasible(&e) => Ok(None),
        Err(e) => Err(e),
    }
}

fn mc_config(s: &Scenario, mc: &McSettings, design: DesignPoint) -> Result<SimulationConfig, CliError> {
    let mut c = SimulationConfig::new(s.propagation, design, mc.trials, mc.master_seed)?;
    c.window_radius = window_for_tail_fraction(design.lambda, s.propagation.alpha, mc.tail_fraction)?;
    c.precoder_mode = mc.precoder_mode;
    c.fading_draws_per_geometry = mc.fading_draws_per_geometry;
    c.validate()?;
    Ok(c)
}

/// One row per grid point, plus the fixed reference designs for `mu`.
/// `with_mc` adds Monte-Carlo columns to `lambda` sweeps.
pub fn run_sweep(s: &Scenario, sweep: &SweepSpec, with_mc: bool) -> Result<Vec<SweepRow>, CliError> {
    let var = sweep.variable.name();
    let (p, h) = (&s.propagation, &s.hardware);
    if sweep.variable != SweepVariable::Gamma {
        design_problem(s, s.gamma, s.lambda)?;
    }
    let mut rows = Vec::new();
    for x in sweep.values() {
        match sweep.variable {
            SweepVariable::Lambda => {
                let d = if x > s.lambda_max { None } else { grid_optimum(s, s.gamma, x)? };
                let row = match d {
                    Some(d) => {
                        let row = SweepRow::feasible(var, Some(x), "optimized", p, h, &d)?;
                        if with_mc {
                            let est = estimate_ergodic_se(&mc_config(s, &s.mc, d)?)?;
                            row.with_mc(h, &est.se)
                        } else {
                            row
                        }
                    }
                    None => SweepRow::infeasible(var, Some(x), "optimized", Some(x)),
                };
                rows.push(row);
            }
            SweepVariable::Gamma => {
                rows.push(match grid_optimum(s, x, s.lambda)? {
                    Some(d) => SweepRow::feasible(var, Some(x), "optimized", p, h, &d)?,
                    None => SweepRow::infeasible(var, Some(x), "optimized", Some(s.lambda)),
                });
            }
            SweepVariable::Mu => {
                let opt = optimize_with_ue_density(p, h, s.gamma, x, s.lambda_max, DEFAULT_K_RANGE);
                rows.push(outcome_row(s, var, x, "optimized", opt)?);
                for (m, k) in REFERENCE_DESIGNS {
                    let label = format!("fixed-{m}-{k}");
                    let out = evaluate_with_ue_density(p, h, s.gamma, x, s.lambda_max, m, k);
                    rows.push(outcome_row(s, var, x, &label, out)?);
                }
            }
        }
    }
    Ok(rows)
}

fn outcome_row(
    s: &Scenario,
    var: &str,
    x: f64,
    label: &str,
    outcome: eedesign_core::Result<OptimizationOutcome>,
) -> Result<SweepRow, CliError> {
    match outcome {
        Ok(o) => SweepRow::feasible(var, Some(x), label, &s.propagation, &s.hardware, &o.design),
        Err(Error::Infeasible(_) | Error::EmptyFeasibleSet) => {
            Ok(SweepRow::infeasible(var, Some(x), label, None))
        }
        Err(e) => Err(e.into()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct McPoint {
    pub lambda: f64,
    /// `None` when no design meets the target at this density.
    pub design: Option<DesignPoint>,
    pub se_bound: Option<f64>,
    pub se_mc: Option<McEstimate>,
    pub moments: Option<MomentReport>,
    pub row: SweepRow,
}

impl McPoint {
    /// The analytic lower bound lies above the MC upper confidence limit.
    pub fn bound_violated(&self) -> bool {
        self.row.status == RowStatus::BoundViolation
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct McValidateReport {
    pub points: Vec<McPoint>,
}

impl McValidateReport {
    pub fn violations(&self) -> usize {
        self.points.iter().filter(|p| p.bound_violated()).count()
    }

    pub fn moment_failures(&self) -> usize {
        self.points
            .iter()
            .filter_map(|p| p.moments.as_ref())
            .filter(|m| !m.all_pass(KS_SIGNIFICANCE))
            .count()
    }

    pub fn rows(&self) -> Vec<SweepRow> {
        self.points.iter().map(|p| p.row.clone()).collect()
    }
}

/// The AP densities validated: the lambda sweep grid if there is one,
/// otherwise the operating density alone.
pub fn mc_lambda_grid(s: &Scenario) -> Result<Vec<f64>, CliError> {
    match &s.sweep {
        None => Ok(vec![s.lambda]),
        Some(sw) if sw.variable == SweepVariable::Lambda => Ok(sw.values()),
        Some(sw) => Err(CliError::Usage(format!(
            "mc-validate runs over AP densities; the scenario sweeps '{}'",
            sw.variable.name()
        ))),
    }
}

/// At each AP density: optimize the design, estimate the ergodic SE, compare
/// it with the lower bound, and run the moment-identity checks.
pub fn run_mc_validate(s: &Scenario, lambdas: &[f64]) -> Result<McValidateReport, CliError> {
    let (p, h) = (&s.propagation, &s.hardware);
    let mut points = Vec::new();
    for &lambda in lambdas {
        let design = if lambda > s.lambda_max { None } else { grid_optimum(s, s.gamma, lambda)? };
        let Some(design) = design else {
            points.push(McPoint {
                lambda,
                design: None,
                se_bound: None,
                se_mc: None,
                moments: None,
                row: SweepRow::infeasible("lambda", Some(lambda), "optimized", Some(lambda)),
            });
            continue;
        };
        let config = mc_config(s, &s.mc, design)?;
        let est = estimate_ergodic_se(&config)?;
        let bound = se_lower_bound(p, &design)?;
        let mut row = SweepRow::feasible("lambda", Some(lambda), "optimized", p, h, &design)?
            .with_mc(h, &est.se);
        if bound > est.se.upper() {
            row.status = RowStatus::BoundViolation;
        }
        let probe = MomentProbe {
            distance: 0.5 / lambda.sqrt(),
            fading_draws: s.mc.moment_draws,
            geometry_draws: s.mc.moment_draws,
        };
        let moments = validate_moment_identities(&config, &probe)?;
        points.push(McPoint {
            lambda,
            design: Some(design),
            se_bound: Some(bound),
            se_mc: Some(est.se),
            moments: Some(moments),
            row,
        });
    }
    Ok(McValidateReport { points })
}
