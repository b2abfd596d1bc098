//! The `kcanon` command line.
//!
//! ```text
//! kcanon [--M N] [--D N] [--c X] [--R X] [--tol X] [--seed N] [--out DIR]
//!        [--no-timestamp] [--jobs N] <COMMAND>
//!
//!   solve         solve the Cauchy problem, write series tables
//!   verify        residual checks (--system --consequence --laplacian
//!                 --curvature --smoothness; all when none given)
//!   closed-form   closed-form solution for a constant Ricci spectrum
//!   majorant      empirical majorant bounds and domination check
//!   compare       calibrate the solver output against the closed form
//!   list-metrics  built-in metric specifiers
//! ```
//!
//! A scenario is either `--metric SPEC` or one or more `--metric-file
//! FILE.toml` (see [`scenario`]). With several files each scenario writes to
//! `OUT/<name>/` and `--jobs` runs them concurrently; reports do not depend
//! on the job count.
//!
//! Exit codes: 0 pass, 1 a check failed, 2 invalid input, 3 numerical
//! degeneracy.

pub mod expr;
pub mod report;
pub mod scenario;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand};
use log::info;
use serde::Serialize;

use crate::closed_form::{calibrate, p_of_t, ricci_spectrum, w_inv_closed, cw_identity_residual, RicciSpectrum};
use crate::error::{Error, Result};
use crate::kahler::list_builtin_metrics;
use crate::majorant::majorant_report;
use crate::solver::{solve, Solution};
use crate::verifier::{
    curvature_and_class, laplacian_moment, residual_consequence, residual_system, smoothness_check,
    CurvatureReport, ResidualReport, SmoothnessReport, Verdict,
};

use report::{Envelope, CONVENTIONS};
use scenario::{Checks, Overrides, Perturbation, Scenario};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "kcanon", version, about = "Ricci-flat metrics on canonical bundles by power series")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Truncation order in t.
    #[arg(long = "M", global = true, value_name = "M")]
    pub order: Option<usize>,
    /// Spatial jet degree cap (default 2M+2).
    #[arg(long = "D", global = true, value_name = "D")]
    pub degree: Option<usize>,
    /// The constant c in u_t = c w.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub c: Option<f64>,
    /// Majorant polydisc radius.
    #[arg(long = "R", global = true, value_name = "R")]
    pub radius: Option<f64>,
    /// Residual tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed for randomised built-in metrics.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory for report files.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Omit the generated_at field so reports are byte-reproducible.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    /// Concurrent scenarios in a batch.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ScenarioArgs {
    /// Built-in metric specifier, e.g. fubini_study_chart:1,1.
    #[arg(long)]
    pub metric: Option<String>,
    /// Scenario file; repeat for a batch.
    #[arg(long = "metric-file", alias = "scenario")]
    pub metric_files: Vec<PathBuf>,
    /// Fault injection TARGET:ORDER:EPS with TARGET in v, g, w_inv, exp_u.
    #[arg(long, allow_hyphen_values = true)]
    pub perturb: Option<String>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Solve and write the series tables.
    Solve(ScenarioArgs),
    /// Run residual checks on the solution.
    Verify {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Residuals of the toda2, cw and u equations
        #[arg(long)]
        system: bool,
        /// Check 4 w_{z zbar} + g_tt = 0
        #[arg(long)]
        consequence: bool,
        /// Check Delta_G t = c
        #[arg(long)]
        laplacian: bool,
        /// Curvature form closedness and, on CP^1, the class integral
        #[arg(long)]
        curvature: bool,
        /// Smoothness at t = 0: cone angle and leading coefficient
        #[arg(long)]
        smoothness: bool,
    },
    /// Closed-form solution for constant principal Ricci curvatures.
    ClosedForm {
        /// Eigenvalues of h^{-1} rho, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        eigenvalues: Option<Vec<f64>>,
        /// Dimension; a single eigenvalue is repeated n times.
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        scenario: ScenarioArgs,
    },
    /// Empirical majorant estimate.
    Majorant(ScenarioArgs),
    /// Calibrate the solver output against the closed form.
    Compare(ScenarioArgs),
    /// List built-in metrics.
    ListMetrics,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Solve(_) => "solve",
            Command::Verify { .. } => "verify",
            Command::ClosedForm { .. } => "closed-form",
            Command::Majorant(_) => "majorant",
            Command::Compare(_) => "compare",
            Command::ListMetrics => "list-metrics",
        }
    }

    fn scenario_args(&self) -> Option<&ScenarioArgs> {
        match self {
            Command::Solve(s) | Command::Majorant(s) | Command::Compare(s) => Some(s),
            Command::Verify { scenario, .. } | Command::ClosedForm { scenario, .. } => Some(scenario),
            Command::ListMetrics => None,
        }
    }

    fn checks(&self) -> Checks {
        match *self {
            Command::Verify {
                system,
                consequence,
                laplacian,
                curvature,
                smoothness,
                ..
            } => Checks {
                system,
                consequence,
                laplacian,
                curvature,
                smoothness,
            },
            _ => Checks::default(),
        }
    }
}

/// Result of one scenario.
pub struct Outcome {
    pub code: i32,
    pub summary: String,
    /// Set when the scenario aborted; goes to standard error.
    pub error: Option<String>,
}

impl Outcome {
    fn error(name: &str, e: &Error) -> Outcome {
        Outcome {
            code: e.exit_code(),
            summary: String::new(),
            error: Some(format!("{name}: error: {e}")),
        }
    }
}

/// Entry point used by the binary.
pub fn main() -> i32 {
    match Cli::try_parse() {
        Ok(cli) => run(&cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_PASS
            }
        }
    }
}

/// Runs a parsed command line; returns the exit code.
pub fn run(cli: &Cli) -> i32 {
    let (code, text) = run_captured(cli);
    print!("{text}");
    code
}

/// Like [`run`], returning the standard output instead of printing it.
pub fn run_captured(cli: &Cli) -> (i32, String) {
    if let Command::ListMetrics = cli.command {
        return match list_metrics(&cli.global) {
            Ok(s) => (EXIT_PASS, s),
            Err(e) => (e.exit_code(), format!("error: {e}\n")),
        };
    }
    let scenarios = match scenarios(cli) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return (e.exit_code(), String::new());
        }
    };
    let batch = scenarios.len() > 1;
    let dirs: Vec<Option<PathBuf>> = scenarios
        .iter()
        .map(|sc| match (&cli.global.out, batch) {
            (Some(out), true) => Some(out.join(&sc.name)),
            (Some(out), false) => Some(out.clone()),
            (None, _) => sc.output_dir.clone(),
        })
        .collect();

    let results: Vec<Mutex<Option<Outcome>>> = scenarios.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let jobs = cli.global.jobs.clamp(1, scenarios.len().max(1));
    std::thread::scope(|s| {
        for _ in 0..jobs {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= scenarios.len() {
                    break;
                }
                let out = execute(cli, &scenarios[i], dirs[i].as_deref());
                *results[i].lock().expect("unpoisoned") = Some(out);
            });
        }
    });

    let mut code = EXIT_PASS;
    let mut text = String::new();
    for r in results {
        let o = r.into_inner().expect("unpoisoned").expect("every scenario ran");
        code = code.max(o.code);
        match o.error {
            Some(e) => eprintln!("{e}"),
            None => text.push_str(&o.summary),
        }
    }
    (code, text)
}

fn scenarios(cli: &Cli) -> Result<Vec<Scenario>> {
    let g = &cli.global;
    let args = cli.command.scenario_args().cloned().unwrap_or_default();
    let perturb = args.perturb.as_deref().map(str::parse::<Perturbation>).transpose()?;
    let ov = Overrides {
        metric: args.metric.clone(),
        c: g.c,
        order: g.order,
        degree: g.degree,
        radius: g.radius,
        tol: g.tol,
        seed: g.seed,
        checks: cli.command.checks(),
        perturb,
    };
    if !args.metric_files.is_empty() {
        if args.metric.is_some() {
            return Err(Error::InvalidInput("give either --metric or --metric-file, not both".into()));
        }
        let list = args
            .metric_files
            .iter()
            .map(|p| Scenario::from_file(p, &ov))
            .collect::<Result<Vec<_>>>()?;
        let mut names: Vec<&str> = list.iter().map(|s| s.name.as_str()).collect();
        names.sort_unstable();
        if names.windows(2).any(|w| w[0] == w[1]) && list.len() > 1 {
            return Err(Error::InvalidInput("scenario names in a batch must be distinct".into()));
        }
        return Ok(list);
    }
    if let Command::ClosedForm { eigenvalues: Some(_), .. } = cli.command {
        // the spectrum is given directly; no metric needed
        let spec = args.metric.clone().unwrap_or_else(|| "flat:1".into());
        return Ok(vec![Scenario::from_flags(&Overrides { metric: Some(spec), ..ov })?]);
    }
    Ok(vec![Scenario::from_flags(&ov)?])
}

fn execute(cli: &Cli, sc: &Scenario, dir: Option<&Path>) -> Outcome {
    info!("running {} on {}", cli.command.name(), sc.name);
    let result = (|| {
        if let Some(d) = dir {
            std::fs::create_dir_all(d)?;
        }
        match &cli.command {
            Command::Solve(_) => cmd_solve(cli, sc, dir),
            Command::Verify { .. } => cmd_verify(cli, sc, dir),
            Command::ClosedForm { eigenvalues, n, .. } => cmd_closed_form(cli, sc, dir, eigenvalues.as_deref(), *n),
            Command::Majorant(_) => cmd_majorant(cli, sc, dir),
            Command::Compare(_) => cmd_compare(cli, sc, dir),
            Command::ListMetrics => unreachable!("handled before scenario resolution"),
        }
    })();
    result.unwrap_or_else(|e| Outcome::error(&sc.name, &e))
}

fn envelope_json<R: Serialize>(
    cli: &Cli,
    sc: &Scenario,
    dir: Option<&Path>,
    file: &str,
    verdict: &str,
    code: i32,
    result: &R,
) -> Result<()> {
    let Some(dir) = dir else {
        return Ok(());
    };
    let env = Envelope {
        tool: "kcanon",
        version: env!("CARGO_PKG_VERSION"),
        command: cli.command.name(),
        generated_at: (!cli.global.no_timestamp).then(report::timestamp),
        config: sc,
        conventions: &CONVENTIONS,
        verdict,
        exit_code: code,
        result,
    };
    report::write_json(&dir.join(file), &env)
}

fn solved(sc: &Scenario) -> Result<Solution> {
    let input = sc.initial_data()?;
    let mut sol = solve(&input, &sc.solver_config())?;
    if let Some(p) = &sc.perturb {
        p.apply(&mut sol)?;
    }
    Ok(sol)
}

fn verdict_code(pass: bool) -> (&'static str, i32) {
    if pass {
        ("pass", EXIT_PASS)
    } else {
        ("fail", EXIT_CHECK_FAILED)
    }
}

fn base_series(s: &crate::jet::TJet, terms: usize) -> String {
    let mut out = String::new();
    for (k, c) in s.coeffs().iter().enumerate().take(terms) {
        let z = c.constant_term();
        if z.re != 0.0 {
            let _ = write!(out, "{}{}t^{k}", if z.re < 0.0 { " - " } else if out.is_empty() { "" } else { " + " }, z.re.abs());
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

#[derive(Serialize)]
struct SolveResult {
    n: usize,
    requested_order: usize,
    reached_order: usize,
    w_inv_discrepancy: f64,
    v: report::SeriesSummary,
    w_inv: report::SeriesSummary,
    exp_u: report::SeriesSummary,
    g: Vec<report::SeriesSummary>,
}

fn cmd_solve(cli: &Cli, sc: &Scenario, dir: Option<&Path>) -> Result<Outcome> {
    let sol = solved(sc)?;
    let n = sol.n();
    let result = SolveResult {
        n,
        requested_order: sc.order,
        reached_order: sol.reached_order,
        w_inv_discrepancy: sol.w_inv_discrepancy,
        v: report::summarize(&sol.v),
        w_inv: report::summarize(&sol.w_inv),
        exp_u: report::summarize(&sol.exp_u),
        g: sol.g.entries().iter().map(report::summarize).collect(),
    };
    envelope_json(cli, sc, dir, "report.json", "pass", EXIT_PASS, &result)?;
    if let Some(d) = dir {
        let h = &report::SERIES_HEADER;
        report::write_csv(&d.join("v.csv"), h, report::series_rows("v", 0, 0, &sol.v))?;
        report::write_csv(&d.join("g.csv"), h, report::matrix_rows("g", &sol.g))?;
        report::write_csv(&d.join("w_inv.csv"), h, report::series_rows("w_inv", 0, 0, &sol.w_inv))?;
        report::write_csv(&d.join("exp_u.csv"), h, report::series_rows("exp_u", 0, 0, &sol.exp_u))?;
    }
    Ok(Outcome {
        error: None,
        code: EXIT_PASS,
        summary: format!(
            "{}: solved to order {}/{} (n = {n}, D = {}); w_inv at base = {}\n",
            sc.name,
            sol.reached_order,
            sc.order,
            sc.degree,
            base_series(&sol.w_inv, 6)
        ),
    })
}

#[derive(Serialize)]
struct VerifyResult {
    reached_order: usize,
    residuals: Vec<ResidualReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    curvature: Option<CurvatureReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    smoothness: Option<SmoothnessReport>,
}

fn cmd_verify(cli: &Cli, sc: &Scenario, dir: Option<&Path>) -> Result<Outcome> {
    let sol = solved(sc)?;
    let tol = sc.tolerance;
    let ch = sc.checks;
    let mut residuals = Vec::new();
    if ch.system {
        residuals.push(residual_system(&sol, tol)?);
    }
    if ch.consequence {
        residuals.push(residual_consequence(&sol, tol)?);
    }
    if ch.laplacian {
        residuals.push(laplacian_moment(&sol, tol)?);
    }
    let curvature = if ch.curvature { Some(curvature_and_class(&sol, tol)?) } else { None };
    let smoothness = if ch.smoothness { Some(smoothness_check(&sol, tol)?) } else { None };

    let mut verdicts: Vec<Verdict> = residuals.iter().map(|r| r.verdict).collect();
    verdicts.extend(curvature.iter().map(|c| c.verdict));
    verdicts.extend(smoothness.iter().map(|s| s.verdict));
    let pass = Verdict::combine(verdicts) != Verdict::Fail;
    let (verdict, code) = verdict_code(pass);

    let mut summary = String::new();
    for r in &residuals {
        for id in &r.identities {
            let _ = writeln!(
                summary,
                "{}: {:<12} {:<7} max residual {:e}",
                sc.name,
                id.identity,
                id.verdict.as_str(),
                id.max_residual
            );
        }
    }
    if let Some(c) = &curvature {
        for id in &c.closedness.identities {
            let _ = writeln!(summary, "{}: {:<12} {:<7} max residual {:e}", sc.name, id.identity, id.verdict.as_str(), id.max_residual);
        }
        if let Some(ci) = &c.class_integral {
            let _ = writeln!(
                summary,
                "{}: class        {:<7} integral {} (expected {}, {} points)",
                sc.name,
                ci.verdict.as_str(),
                ci.value,
                ci.expected,
                ci.quadrature_points
            );
        }
    }
    if let Some(s) = &smoothness {
        let _ = writeln!(
            summary,
            "{}: smoothness   {:<7} {} (cone ratio {}, a = {})",
            sc.name,
            s.verdict.as_str(),
            if s.smooth { "smooth" } else { "cone singularity" },
            s.cone_ratio,
            s.a
        );
    }
    let _ = writeln!(summary, "{}: verdict {verdict}", sc.name);

    let result = VerifyResult {
        reached_order: sol.reached_order,
        curvature,
        smoothness,
        residuals,
    };
    envelope_json(cli, sc, dir, "verify.json", verdict, code, &result)?;
    if let Some(d) = dir {
        let mut reps: Vec<&ResidualReport> = result.residuals.iter().collect();
        if let Some(c) = &result.curvature {
            reps.push(&c.closedness);
        }
        report::write_csv(&d.join("residuals.csv"), &report::RESIDUAL_HEADER, report::residual_rows(reps))?;
    }
    Ok(Outcome { code, summary, error: None })
}

#[derive(Serialize)]
struct ClosedFormResult {
    source: &'static str,
    spectrum: RicciSpectrum,
    p_of_t: crate::closed_form::PolyT,
    w_inv: crate::closed_form::RationalT,
    w_inv_series: Vec<f64>,
    cw_identity_residual: f64,
}

fn cmd_closed_form(
    cli: &Cli,
    sc: &Scenario,
    dir: Option<&Path>,
    eigenvalues: Option<&[f64]>,
    n: Option<usize>,
) -> Result<Outcome> {
    let (source, spectrum) = match eigenvalues {
        Some(ev) => {
            let ev = match (ev.len(), n) {
                (1, Some(n)) => vec![ev[0]; n],
                (len, Some(n)) if len != n => {
                    return Err(Error::DimensionMismatch(format!("{len} eigenvalues for n = {n}")))
                }
                _ => ev.to_vec(),
            };
            ("eigenvalues", RicciSpectrum::new(ev)?)
        }
        None => ("metric", ricci_spectrum(&sc.initial_data()?, 1e-6)?),
    };
    let p = p_of_t(&spectrum);
    let w = w_inv_closed(&p)?;
    let series = w.series(sc.order);
    let result = ClosedFormResult {
        source,
        cw_identity_residual: cw_identity_residual(&w, &p),
        spectrum,
        p_of_t: p,
        w_inv: w,
        w_inv_series: series,
    };
    envelope_json(cli, sc, dir, "closed_form.json", "pass", EXIT_PASS, &result)?;
    if let Some(d) = dir {
        let rows = (0..=sc.order).map(|k| {
            vec![
                k.to_string(),
                result.p_of_t.coeff(k).to_string(),
                result.w_inv_series.get(k).copied().unwrap_or(0.0).to_string(),
            ]
        });
        report::write_csv(&d.join("closed_form.csv"), &["t_order", "p", "w_inv"], rows)?;
    }
    let terms: Vec<String> = result.w_inv_series.iter().map(|x| x.to_string()).collect();
    Ok(Outcome {
        error: None,
        code: EXIT_PASS,
        summary: format!(
            "{}: P(t) coefficients {:?}; w_inv series [{}]\n",
            sc.name,
            result.p_of_t.0,
            terms.join(", ")
        ),
    })
}

fn cmd_majorant(cli: &Cli, sc: &Scenario, dir: Option<&Path>) -> Result<Outcome> {
    let sol = solved(sc)?;
    let rep = majorant_report(&sol, sc.majorant_radius)?;
    let (verdict, code) = verdict_code(rep.pass);
    envelope_json(cli, sc, dir, "majorant.json", verdict, code, &rep)?;
    if let Some(d) = dir {
        let rows = rep.domination.iter().map(|r| {
            vec![
                r.m.to_string(),
                r.radius.to_string(),
                r.inequality.clone(),
                r.max_lhs.to_string(),
                r.rhs.to_string(),
                r.margin.to_string(),
                r.pass.to_string(),
            ]
        });
        report::write_csv(
            &d.join("majorant.csv"),
            &["m", "radius", "inequality", "max_lhs", "rhs", "margin", "pass"],
            rows,
        )?;
        let rows = rep.c_m.iter().enumerate().map(|(i, c)| vec![(i + 1).to_string(), c.to_string()]);
        report::write_csv(&d.join("c_m.csv"), &["m", "c_m"], rows)?;
    }
    let worst = rep.domination.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    let radius = match rep.radius_estimate {
        Some(r) => format!("{r:e} (heuristic)"),
        None => rep.radius_note.clone(),
    };
    Ok(Outcome {
        error: None,
        code,
        summary: format!(
            "{}: majorant {verdict}: A = {:e}, {} inequality rows, smallest margin {worst}, t-radius {radius}\n",
            sc.name,
            rep.params.a,
            rep.domination.len()
        ),
    })
}

fn cmd_compare(cli: &Cli, sc: &Scenario, dir: Option<&Path>) -> Result<Outcome> {
    let sol = solved(sc)?;
    let rep = calibrate(&sol, sc.tolerance)?;
    let (verdict, code) = verdict_code(rep.matched);
    envelope_json(cli, sc, dir, "compare.json", verdict, code, &rep)?;
    if let Some(d) = dir {
        let rows = rep.candidates.iter().map(|c| {
            vec![
                c.kappa.to_string(),
                c.g_deviation.to_string(),
                c.w_inv_deviation.to_string(),
                (Some(c.kappa) == rep.kappa).to_string(),
            ]
        });
        report::write_csv(&d.join("compare.csv"), &["kappa", "g_deviation", "w_inv_deviation", "selected"], rows)?;
    }
    let kappa = match (rep.kappa, rep.kappa_relevant) {
        (_, false) => "irrelevant (Ricci-flat base)".to_string(),
        (Some(k), true) => k.to_string(),
        (None, true) => "none".to_string(),
    };
    Ok(Outcome {
        error: None,
        code,
        summary: format!(
            "{}: compare {verdict}: kappa = {kappa}, deviation {:e} over {} orders\n",
            sc.name, rep.deviation, rep.orders_compared
        ),
    })
}

#[derive(Serialize)]
struct MetricEntry {
    name: &'static str,
    parameters: &'static str,
    description: &'static str,
}

fn list_metrics(g: &GlobalOpts) -> Result<String> {
    let list: Vec<MetricEntry> = list_builtin_metrics()
        .into_iter()
        .map(|(name, parameters, description)| MetricEntry {
            name,
            parameters,
            description,
        })
        .collect();
    if let Some(out) = &g.out {
        std::fs::create_dir_all(out)?;
        report::write_json(&out.join("metrics.json"), &list)?;
    }
    let mut s = String::new();
    for m in &list {
        let _ = writeln!(s, "{:<20} {:<24} {}", m.name, m.parameters, m.description);
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("kcanon").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn global_flags_anywhere() {
        let c = cli(&["solve", "--metric", "flat:1", "--M", "3", "--c", "-2"]);
        assert_eq!(c.global.order, Some(3));
        assert_eq!(c.global.c, Some(-2.0));
        let c = cli(&["--D", "9", "closed-form", "--eigenvalues", "0,-1"]);
        assert_eq!(c.global.degree, Some(9));
        assert!(matches!(c.command, Command::ClosedForm { eigenvalues: Some(ref e), .. } if e == &[0.0, -1.0]));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_captured(&cli(&["solve", "--metric", "flat:2", "--M", "3"])).0, EXIT_PASS);
        assert_eq!(run_captured(&cli(&["solve", "--metric", "nope:1"])).0, EXIT_INVALID);
        assert_eq!(run_captured(&cli(&["solve", "--metric", "flat:1", "--c", "-1"])).0, EXIT_INVALID);
        assert_eq!(
            run_captured(&cli(&["verify", "--metric", "flat:1", "--M", "4", "--perturb", "v:2:1e-3"])).0,
            EXIT_CHECK_FAILED
        );
        assert_eq!(
            run_captured(&cli(&["solve", "--metric", "fubini_study_chart:1,1", "--M", "4", "--D", "1"])).0,
            EXIT_INVALID
        );
    }

    #[test]
    fn closed_form_summary() {
        let (code, text) = run_captured(&cli(&["closed-form", "--eigenvalues", "0,0", "--M", "3"]));
        assert_eq!(code, 0);
        assert!(text.contains("w_inv series [0, 1, 0, 0]"), "{text}");
    }
}
