//! The `eedesign` command line: argument parsing, dispatch and file output.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::commands::{
    mc_lambda_grid, run_evaluate, run_mc_validate, run_optimize, run_sweep, McValidateReport, Method,
    OptimizeReport, KS_SIGNIFICANCE,
};
use crate::output::{Formatter, SweepRow, DEFAULT_PRECISION};
use crate::{CliError, Scenario};

/// Command-line arguments of the `eedesign` binary.
#[derive(Parser, Debug)]
#[command(name = "eedesign", version, about = "Energy-efficient dense network design")]
pub struct Cli {
    /// Scenario file (TOML). The bundled default scenario is used if omitted.
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,
    /// CSV output path; CSV goes to stdout if omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Overrides mc.master_seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides mc.trials.
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Suppresses the human-readable summary.
    #[arg(long, global = true)]
    quiet: bool,
    /// Worker threads for sweeps and Monte-Carlo (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Significant digits in CSV floats.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    precision: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// EE breakdown at a fixed (M, K) with the minimal power meeting the SE target.
    Evaluate {
        #[arg(long = "M")]
        m: u32,
        #[arg(long = "K")]
        k: u32,
    },
    /// Optimize (M, K, rho) at the scenario's AP density.
    Optimize {
        /// alternating | grid | both
        #[arg(long, default_value = "both")]
        method: String,
        #[arg(long, default_value_t = 10)]
        start_m: u32,
        #[arg(long, default_value_t = 1)]
        start_k: u32,
    },
    /// Sweep the variable named in the scenario's [sweep] section.
    Sweep {
        /// Adds Monte-Carlo EE columns (lambda sweeps only).
        #[arg(long)]
        mc: bool,
    },
    /// Monte-Carlo check of the SE lower bound and its moment identities.
    McValidate,
}

/// Parses `args` (program name first) and runs the command.
pub fn run_args<I, T>(args: I) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Usage(e.to_string()))?;
    run(&cli)
}

/// Runs a parsed command line on a worker pool of the requested size.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let fmt = Formatter::new(cli.precision)?;
    let mut scenario = match &cli.scenario {
        Some(path) => Scenario::load(path)?,
        None => Scenario::default_scenario(),
    };
    if let Some(seed) = cli.seed {
        scenario.mc.master_seed = seed;
    }
    if let Some(trials) = cli.trials {
        if trials == 0 {
            return Err(CliError::Usage("--trials must be at least 1".into()));
        }
        scenario.mc.trials = trials;
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cli.workers {
        if w == 0 {
            return Err(CliError::Usage("--workers must be at least 1".into()));
        }
        pool = pool.num_threads(w);
    }
    let pool = pool.build().map_err(|e| CliError::Internal(e.to_string()))?;
    pool.install(|| dispatch(cli, &scenario, &fmt))
}

fn dispatch(cli: &Cli, s: &Scenario, fmt: &Formatter) -> Result<(), CliError> {
    let say = |text: String| {
        if !cli.quiet {
            println!("{text}");
        }
    };
    match &cli.command {
        Command::Evaluate { m, k } => {
            let r = run_evaluate(s, *m, *k)?;
            say(format!(
                "M = {m}, K = {k}, lambda = {} AP/m^2, gamma = {} bit/symbol/user\n\
                 rho* = {:.4e} J/symbol, total radiated power K rho*/S = {:.1} mW\n\
                 SE bound = {:.4} bit/symbol/user, ASE = {:.4e} bit/symbol/m^2, \
                 AEC = {:.4e} J/symbol/m^2\n\
                 EE = {:.4} Mbit/Joule",
                s.lambda,
                s.gamma,
                r.design.rho,
                r.radiated_power_watt * 1e3,
                r.result.se_bound,
                r.result.ase,
                r.result.aec,
                r.result.ee / 1e6
            ));
            emit_rows(cli, fmt, &[r.row])
        }
        Command::Optimize {
            method,
            start_m,
            start_k,
        } => {
            let method: Method = method.parse()?;
            let r = run_optimize(s, method, (*start_m, *start_k))?;
            say(optimize_summary(s, &r));
            emit_rows(cli, fmt, &r.rows)?;
            if let Some(out) = &cli.out {
                if let Some(g) = &r.grid {
                    let rows = g.ee_surface.iter().map(|(&(m, k), &ee)| {
                        vec![m.to_string(), k.to_string(), fmt.float(ee)]
                    });
                    write_file(&sibling(out, "surface"), |w| fmt.write_table(w, &["M", "K", "ee"], rows))?;
                }
                if let Some(a) = &r.alternating {
                    let rows = a.trajectory.iter().enumerate().map(|(i, t)| {
                        vec![
                            i.to_string(),
                            t.m.to_string(),
                            t.k.to_string(),
                            fmt.float(t.rho),
                            fmt.float(t.ee),
                        ]
                    });
                    write_file(&sibling(out, "trajectory"), |w| {
                        fmt.write_table(w, &["iteration", "M", "K", "rho", "ee"], rows)
                    })?;
                }
            }
            Ok(())
        }
        Command::Sweep { mc } => {
            let sweep = s
                .sweep
                .as_ref()
                .ok_or_else(|| CliError::Usage("the scenario has no [sweep] section".into()))?;
            let rows = run_sweep(s, sweep, *mc || sweep.mc)?;
            let infeasible = rows.iter().filter(|r| r.status.as_str() == "infeasible").count();
            say(format!(
                "{} sweep: {} rows ({infeasible} infeasible)",
                sweep.variable.name(),
                rows.len()
            ));
            emit_rows(cli, fmt, &rows)
        }
        Command::McValidate => {
            let lambdas = mc_lambda_grid(s)?;
            let r = run_mc_validate(s, &lambdas)?;
            say(mc_summary(&r));
            emit_rows(cli, fmt, &r.rows())?;
            if let Some(out) = &cli.out {
                write_mc_side_files(out, fmt, &r)?;
            }
            Ok(())
        }
    }
}

fn optimize_summary(s: &Scenario, r: &OptimizeReport) -> String {
    let mut lines = vec![format!(
        "gamma = {} bit/symbol/user, lambda = {} AP/m^2",
        s.gamma, s.lambda
    )];
    let watt = |rows: &[SweepRow], label: &str| {
        rows.iter()
            .find(|x| x.design == label)
            .and_then(|x| x.total_radiated_power_watt)
            .unwrap_or(f64::NAN)
    };
    if let Some(g) = &r.grid {
        lines.push(format!(
            "grid:        (M, K) = ({}, {}), EE = {:.4} Mbit/Joule, power = {:.1} mW",
            g.best.m,
            g.best.k,
            g.best_ee / 1e6,
            watt(&r.rows, "grid") * 1e3
        ));
    }
    if let Some(a) = &r.alternating {
        let path: Vec<String> = a.trajectory.iter().map(|t| format!("({}, {})", t.m, t.k)).collect();
        lines.push(format!(
            "alternating: (M, K) = ({}, {}), EE = {:.4} Mbit/Joule, power = {:.1} mW, \
             {} iterations ({:?})\n             path {}",
            a.design.m,
            a.design.k,
            a.ee / 1e6,
            watt(&r.rows, "alternating") * 1e3,
            a.iterations,
            a.status,
            path.join(" -> ")
        ));
    }
    if let Some(gap) = r.relative_gap {
        lines.push(format!("relative gap: {:.3}%", 100.0 * gap));
    }
    lines.join("\n")
}

fn mc_summary(r: &McValidateReport) -> String {
    let mut lines = Vec::new();
    for p in &r.points {
        match (&p.design, p.se_bound, &p.se_mc) {
            (Some(d), Some(b), Some(se)) => lines.push(format!(
                "lambda = {:.3e}: (M, K) = ({}, {}), SE bound {:.4}, MC {:.4} +- {:.4}{}",
                p.lambda,
                d.m,
                d.k,
                b,
                se.mean,
                se.half_width,
                if p.bound_violated() { "  BOUND VIOLATION" } else { "" }
            )),
            _ => lines.push(format!("lambda = {:.3e}: infeasible", p.lambda)),
        }
        if let Some(m) = &p.moments {
            for c in &m.checks {
                lines.push(format!(
                    "    {}: {:.4e} +- {:.2e} vs {:.4e} {}",
                    c.name,
                    c.estimate.mean,
                    c.estimate.half_width,
                    c.expected,
                    if c.within_ci { "ok" } else { "MISMATCH" }
                ));
            }
            lines.push(format!(
                "    serving distance KS: D = {:.4}, p = {:.3} {}",
                m.serving_distance_ks.statistic,
                m.serving_distance_ks.p_value,
                if m.serving_distance_ks.passes(KS_SIGNIFICANCE) { "ok" } else { "REJECTED" }
            ));
        }
    }
    lines.push(format!(
        "{} bound violations, {} points with moment mismatches",
        r.violations(),
        r.moment_failures()
    ));
    lines.join("\n")
}

fn write_mc_side_files(out: &Path, fmt: &Formatter, r: &McValidateReport) -> Result<(), CliError> {
    let opt = |v: Option<f64>| v.map(|x| fmt.float(x)).unwrap_or_default();
    let se_rows = r.points.iter().map(|p| {
        vec![
            fmt.float(p.lambda),
            opt(p.se_bound),
            opt(p.se_mc.map(|e| e.mean)),
            opt(p.se_mc.map(|e| e.half_width)),
            p.row.status.as_str().to_string(),
        ]
    });
    write_file(&sibling(out, "se"), |w| {
        fmt.write_table(
            w,
            &["lambda", "se_bound", "se_mc_mean", "se_mc_halfwidth", "status"],
            se_rows,
        )
    })?;
    let mut moment_rows = Vec::new();
    for p in &r.points {
        if let Some(m) = &p.moments {
            for c in &m.checks {
                moment_rows.push(vec![
                    fmt.float(p.lambda),
                    c.name.clone(),
                    fmt.float(c.estimate.mean),
                    fmt.float(c.estimate.half_width),
                    fmt.float(c.expected),
                    c.within_ci.to_string(),
                ]);
            }
            moment_rows.push(vec![
                fmt.float(p.lambda),
                "serving distance KS p-value".into(),
                fmt.float(m.serving_distance_ks.p_value),
                String::new(),
                fmt.float(KS_SIGNIFICANCE),
                m.serving_distance_ks.passes(KS_SIGNIFICANCE).to_string(),
            ]);
        }
    }
    write_file(&sibling(out, "moments"), |w| {
        fmt.write_table(
            w,
            &["lambda", "check", "estimate", "halfwidth", "expected", "pass"],
            moment_rows,
        )
    })
}

/// `out.csv` -> `out_<tag>.csv`.
fn sibling(out: &Path, tag: &str) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = out.extension().map(|e| e.to_string_lossy().into_owned()).unwrap_or_else(|| "csv".into());
    out.with_file_name(format!("{stem}_{tag}.{ext}"))
}

fn write_file(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> Result<(), CliError>) -> Result<(), CliError> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut w = BufWriter::new(file);
    f(&mut w)?;
    w.flush().map_err(|e| CliError::io(path, e))
}

fn emit_rows(cli: &Cli, fmt: &Formatter, rows: &[SweepRow]) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => write_file(path, |w| fmt.write_rows(w, rows)),
        None => {
            let stdout = io::stdout();
            fmt.write_rows(stdout.lock(), rows)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bad_arguments_are_usage_errors() {
        let e = run_args(["eedesign", "evaluate", "--M", "ten", "--K", "1"]).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn writes_csv_to_the_requested_file() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("e.csv");
        let out = out.to_str().unwrap();
        run_args(["eedesign", "--quiet", "--out", out, "evaluate", "--M", "195", "--K", "20"]).unwrap();
        let text = std::fs::read_to_string(out).unwrap();
        assert!(text.lines().nth(1).unwrap().starts_with("none,,fixed,195,20,"));
    }
}
