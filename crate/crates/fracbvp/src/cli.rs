//! Command-line front end: problem specs in, CSV profiles and JSON reports
//! out.
//!
//! Commands: `classify`, `solve`, `verify`, `convergence`, `crosscheck`,
//! `table`. Outputs are deterministic — identical spec files produce
//! byte-identical CSV/JSON, with no timestamps anywhere.
//!
//! Exit codes: 0 success, 2 ill-posed combination, 3 incompatible data,
//! 4 parse/IO/usage error; a machine-readable error object goes to stderr.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::fem;
use crate::grid::{trapezoid, GridFunction, Profile};
use crate::solver::{self, Normalization, ResidualReport, Solution, SolveOptions};
use crate::special::{gamma, PowerSum, PowerTerm};
use crate::wellposed::{
    classification_table, classify, classify_with_data, BcType, EquationForm, ProblemSpec, Status,
    Verdict,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Classify,
    Solve,
    Verify,
    Convergence,
    Crosscheck,
    Table,
}

/// Parsed invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub spec_path: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
    /// Grid resolutions for `convergence`/`crosscheck`, strictly increasing.
    pub n_list: Vec<usize>,
    /// Number of profile rows written by `solve`.
    pub sample_count: usize,
    pub opts: SolveOptions,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(std::io::Error),
    Json(serde_json::Error),
    Domain(Error),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Json(e)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) | CliError::Json(_) => 4,
            CliError::Domain(Error::IllPosed { .. }) => 2,
            CliError::Domain(Error::IncompatibleData { .. }) => 3,
            CliError::Domain(Error::InvalidInput(_)) => 4,
            CliError::Domain(_) => 1,
        }
    }

    fn to_json(&self) -> serde_json::Value {
        let (kind, message) = match self {
            CliError::Usage(m) => ("usage", m.clone()),
            CliError::Io(e) => ("io", e.to_string()),
            CliError::Json(e) => ("parse", e.to_string()),
            CliError::Domain(e) => {
                let kind = match e {
                    Error::IllPosed { .. } => "ill_posed",
                    Error::IncompatibleData { .. } => "incompatible_data",
                    Error::InvalidInput(_) => "invalid_input",
                    _ => "internal",
                };
                (kind, e.to_string())
            }
        };
        let mut obj = serde_json::json!({ "kind": kind, "message": message });
        if let CliError::Domain(Error::IllPosed { certificate }) = self {
            obj["certificate"] = serde_json::to_value(certificate.as_ref()).unwrap_or_default();
        }
        if let CliError::Domain(Error::IncompatibleData { residual }) = self {
            obj["residual"] = serde_json::json!(residual);
        }
        serde_json::json!({ "error": obj })
    }
}

const USAGE: &str = "usage: fracbvp <classify|solve|verify|convergence|crosscheck|table> \
[--spec PATH] [--out DIR] [--n-list 64,128,256] [--samples 201]\n\
environment: FRACBVP_TOL overrides the compatibility tolerance (default 1e-8)";

/// Entry point for the binary: parse `std::env` and run, writing the error
/// object to stderr on failure.
pub fn main_from_env() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let tol = std::env::var("FRACBVP_TOL")
        .ok()
        .and_then(|s| s.parse::<f64>().ok());
    match parse_args(&args, tol).and_then(|config| run(&config)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let payload = serde_json::to_string(&err.to_json()).unwrap_or_default();
            let _ = writeln!(std::io::stderr(), "{payload}");
            ExitCode::from(err.exit_code())
        }
    }
}

pub fn parse_args(args: &[String], tol: Option<f64>) -> Result<RunConfig, CliError> {
    let command = match args.first().map(String::as_str) {
        Some("classify") => Command::Classify,
        Some("solve") => Command::Solve,
        Some("verify") => Command::Verify,
        Some("convergence") => Command::Convergence,
        Some("crosscheck") => Command::Crosscheck,
        Some("table") => Command::Table,
        Some(other) => return Err(CliError::Usage(format!("unknown command '{other}'\n{USAGE}"))),
        None => return Err(CliError::Usage(USAGE.into())),
    };
    let mut config = RunConfig {
        command,
        spec_path: None,
        out_dir: None,
        n_list: vec![64, 128, 256],
        sample_count: 201,
        opts: SolveOptions {
            compat_tol: tol.unwrap_or(SolveOptions::default().compat_tol),
        },
    };
    let mut it = args[1..].iter();
    while let Some(flag) = it.next() {
        let mut value = || {
            it.next()
                .ok_or_else(|| CliError::Usage(format!("flag {flag} needs a value\n{USAGE}")))
        };
        match flag.as_str() {
            "--spec" => config.spec_path = Some(PathBuf::from(value()?)),
            "--out" => config.out_dir = Some(PathBuf::from(value()?)),
            "--samples" => {
                config.sample_count = value()?
                    .parse()
                    .map_err(|e| CliError::Usage(format!("bad --samples: {e}")))?;
                if config.sample_count < 2 {
                    return Err(CliError::Usage("--samples must be at least 2".into()));
                }
            }
            "--n-list" => {
                let list: Result<Vec<usize>, _> =
                    value()?.split(',').map(|s| s.trim().parse::<usize>()).collect();
                config.n_list = list.map_err(|e| CliError::Usage(format!("bad --n-list: {e}")))?;
                if config.n_list.is_empty() || config.n_list.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(CliError::Usage("--n-list must be strictly increasing".into()));
                }
            }
            other => return Err(CliError::Usage(format!("unknown flag '{other}'\n{USAGE}"))),
        }
    }
    let needs_spec = !matches!(command, Command::Table);
    if needs_spec && config.spec_path.is_none() {
        return Err(CliError::Usage("this command needs --spec PATH".into()));
    }
    if matches!(command, Command::Solve | Command::Verify) && config.out_dir.is_none() {
        return Err(CliError::Usage("this command needs --out DIR".into()));
    }
    Ok(config)
}

// ---------------------------------------------------------------------------
// File formats
// ---------------------------------------------------------------------------

/// On-disk problem specification.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpecFile {
    pub form: EquationForm,
    pub bc: BcType,
    pub beta: f64,
    pub a0: f64,
    pub a1: f64,
    pub n: usize,
    pub f: SourceSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SourceSpec {
    /// Closed-form source: a list of `coef * x^exponent` /
    /// `coef * (1-x)^exponent` terms.
    Powersum { terms: Vec<PowerTerm> },
    /// Samples at the `n + 1` uniform nodes.
    Samples { values: Vec<f64> },
}

impl SpecFile {
    pub fn into_problem(self) -> Result<ProblemSpec, Error> {
        let f = match self.f {
            SourceSpec::Powersum { terms } => Profile::Exact(PowerSum::new(terms)),
            SourceSpec::Samples { values } => {
                if values.len() != self.n + 1 {
                    return Err(Error::InvalidInput(format!(
                        "samples carry {} values but n = {} needs {}",
                        values.len(),
                        self.n,
                        self.n + 1
                    )));
                }
                Profile::Grid(GridFunction::new(values)?)
            }
        };
        ProblemSpec::new(self.form, self.bc, self.beta, f, self.a0, self.a1, self.n)
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct ClassifyReport {
    beta: f64,
    verdict: Verdict,
}

#[derive(Debug, Serialize, Deserialize)]
struct TableReport {
    cells: Vec<Verdict>,
    well_posed_count: usize,
}

/// Everything `verify` needs to rebuild the solution and recheck it.
#[derive(Debug, Serialize, Deserialize)]
pub struct SolveReport {
    pub form: EquationForm,
    pub bc: BcType,
    pub beta: f64,
    pub a0: f64,
    pub a1: f64,
    pub n: usize,
    pub status: Status,
    pub kernel: Option<String>,
    pub normalization: Normalization,
    pub solution: SolutionData,
    pub residuals: ResidualReport,
}

/// Serialized solution profile. `singular_coef` is the coefficient of
/// `x^(-beta)/Gamma(1-beta)`; consumers evaluate the singular term
/// themselves, so no infinities ever appear in data files.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SolutionData {
    Exact {
        regular_terms: Vec<PowerTerm>,
        singular_coef: f64,
    },
    Grid {
        values: Vec<f64>,
        singular_coef: f64,
    },
}

#[derive(Debug, Serialize, Deserialize)]
struct VerifyReport {
    reported: ResidualReport,
    recomputed: ResidualReport,
    max_abs_difference: f64,
    consistent: bool,
}

#[derive(Debug, Serialize)]
struct ConvergenceRow {
    n: usize,
    interior_residual_sup: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    sup_error_vs_exact: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    observed_order: Option<f64>,
}

#[derive(Debug, Serialize)]
struct CrosscheckRow {
    n: usize,
    sup_distance: f64,
}

// ---------------------------------------------------------------------------
// Command dispatch
// ---------------------------------------------------------------------------

pub fn run(config: &RunConfig) -> Result<(), CliError> {
    match config.command {
        Command::Table => cmd_table(config),
        Command::Classify => cmd_classify(config),
        Command::Solve => cmd_solve(config),
        Command::Verify => cmd_verify(config),
        Command::Convergence => cmd_convergence(config),
        Command::Crosscheck => cmd_crosscheck(config),
    }
}

fn load_spec(config: &RunConfig) -> Result<(SpecFile, ProblemSpec), CliError> {
    let path = config.spec_path.as_ref().expect("spec path checked at parse time");
    let text = std::fs::read_to_string(path)?;
    let file: SpecFile = serde_json::from_str(&text)?;
    let problem = file.clone().into_problem()?;
    Ok((file, problem))
}

/// Write a line to stdout, tolerating a closed pipe (`fracbvp ... | head`).
fn print_stdout(line: &str) {
    let _ = writeln!(std::io::stdout(), "{line}");
}

fn emit(config: &RunConfig, name: &str, payload: &impl Serialize) -> Result<(), CliError> {
    let json = serde_json::to_string_pretty(payload)?;
    print_stdout(&json);
    if let Some(dir) = &config.out_dir {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join(name), format!("{json}\n"))?;
    }
    Ok(())
}

fn cmd_table(config: &RunConfig) -> Result<(), CliError> {
    let cells = classification_table();
    let well_posed_count = cells.iter().filter(|v| v.status.is_well_posed()).count();
    emit(config, "table.json", &TableReport { cells, well_posed_count })
}

fn cmd_classify(config: &RunConfig) -> Result<(), CliError> {
    let (_, problem) = load_spec(config)?;
    let verdict = classify_with_data(&problem)?;
    emit(config, "verdict.json", &ClassifyReport { beta: problem.order.beta(), verdict })
}

fn solution_csv(sol: &Solution, file: &SpecFile, sample_count: usize) -> String {
    let kernel = classify(file.form, file.bc)
        .kernel
        .unwrap_or_else(|| "none".into());
    let singular_coef = scaled_singular_coef(sol, file.beta);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# fracbvp solve form={} bc={} beta={} a0={} a1={} n={} kernel={} samples={}",
        json_name(&file.form),
        json_name(&file.bc),
        file.beta,
        file.a0,
        file.a1,
        file.n,
        kernel,
        sample_count
    );
    out.push_str("x,u,singular_coef\n");
    let has_singular = !sol.singular.is_zero();
    for j in 0..sample_count {
        // With a singular part, skip x = 0 (the term is unbounded there).
        let x = if has_singular {
            (j + 1) as f64 / sample_count as f64
        } else {
            j as f64 / (sample_count - 1) as f64
        };
        let _ = writeln!(out, "{x},{},{singular_coef}", sol.regular.eval(x));
    }
    out
}

fn json_name<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|j| j.as_str().map(str::to_owned))
        .unwrap_or_default()
}

/// Coefficient of `x^(-beta)/Gamma(1-beta)` in the singular part.
fn scaled_singular_coef(sol: &Solution, beta: f64) -> f64 {
    sol.singular_coef() * gamma(1.0 - beta).unwrap_or(f64::NAN)
}

fn solve_report(sol: &Solution, file: &SpecFile) -> SolveReport {
    let verdict = classify(file.form, file.bc);
    let singular_coef = scaled_singular_coef(sol, file.beta);
    let solution = match &sol.regular {
        Profile::Exact(p) => SolutionData::Exact {
            regular_terms: p.terms().to_vec(),
            singular_coef,
        },
        Profile::Grid(g) => SolutionData::Grid {
            values: g.values().to_vec(),
            singular_coef,
        },
    };
    SolveReport {
        form: file.form,
        bc: file.bc,
        beta: file.beta,
        a0: file.a0,
        a1: file.a1,
        n: file.n,
        status: verdict.status,
        kernel: verdict.kernel,
        normalization: sol.normalization,
        solution,
        residuals: sol.report,
    }
}

fn rebuild_solution(report: &SolveReport) -> Result<Solution, CliError> {
    let beta = report.beta;
    let singular = |coef: f64| -> Result<PowerSum, CliError> {
        if coef == 0.0 {
            Ok(PowerSum::zero())
        } else {
            let raw = coef / gamma(1.0 - beta)?;
            Ok(PowerSum::single(raw, -beta, crate::special::Side::Left))
        }
    };
    let (regular, singular) = match &report.solution {
        SolutionData::Exact { regular_terms, singular_coef } => (
            Profile::Exact(PowerSum::new(regular_terms.clone())),
            singular(*singular_coef)?,
        ),
        SolutionData::Grid { values, singular_coef } => (
            Profile::Grid(GridFunction::new(values.clone()).map_err(CliError::Domain)?),
            singular(*singular_coef)?,
        ),
    };
    let kernel = match (report.form, report.bc) {
        (EquationForm::RiemannLiouville, BcType::RiemannLiouville) => {
            solver::KernelFamily::SingularPower { beta }
        }
        (EquationForm::Caputo, BcType::Classical)
        | (EquationForm::ConservativeCaputo, BcType::Caputo) => solver::KernelFamily::AdditiveConstant,
        _ => solver::KernelFamily::None,
    };
    Ok(Solution {
        regular,
        singular,
        kernel,
        normalization: report.normalization,
        report: report.residuals,
    })
}

fn cmd_solve(config: &RunConfig) -> Result<(), CliError> {
    let (file, problem) = load_spec(config)?;
    let sol = solver::solve_with(&problem, &config.opts)?;
    let report = solve_report(&sol, &file);
    let dir = config.out_dir.as_ref().expect("solve requires --out");
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("solution.csv"), solution_csv(&sol, &file, config.sample_count))?;
    let json = serde_json::to_string_pretty(&report)?;
    std::fs::write(dir.join("report.json"), format!("{json}\n"))?;
    print_stdout(&json);
    Ok(())
}

fn cmd_verify(config: &RunConfig) -> Result<(), CliError> {
    let (_, problem) = load_spec(config)?;
    let dir = config.out_dir.as_ref().expect("verify requires --out");
    let text = std::fs::read_to_string(dir.join("report.json"))?;
    let report: SolveReport = serde_json::from_str(&text)?;
    let sol = rebuild_solution(&report)?;
    let recomputed = solver::residual_report(&sol, &problem);
    let reported = report.residuals;
    let diffs = [
        recomputed.interior_residual_sup - reported.interior_residual_sup,
        recomputed.bc_residual.0 - reported.bc_residual.0,
        recomputed.bc_residual.1 - reported.bc_residual.1,
        recomputed.constraint_residual - reported.constraint_residual,
        recomputed.normalization_residual - reported.normalization_residual,
    ];
    let max_abs_difference = diffs.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    let verify = VerifyReport {
        reported,
        recomputed,
        max_abs_difference,
        consistent: max_abs_difference <= 1e-12,
    };
    let json = serde_json::to_string_pretty(&verify)?;
    std::fs::write(dir.join("verify.json"), format!("{json}\n"))?;
    print_stdout(&json);
    Ok(())
}

fn cmd_convergence(config: &RunConfig) -> Result<(), CliError> {
    let (file, problem) = load_spec(config)?;
    // Reference closed form, when the source admits one.
    let reference = solver::solve_with(&problem, &config.opts)
        .ok()
        .filter(|s| matches!(s.regular, Profile::Exact(_)));
    let mut rows: Vec<ConvergenceRow> = Vec::new();
    for &n in &config.n_list {
        let f_n = match problem.f.sample(n) {
            Ok(g) => Profile::Grid(g),
            Err(_) => problem.f.clone(),
        };
        let spec_n = ProblemSpec::new(file.form, file.bc, file.beta, f_n, file.a0, file.a1, n)
            .map_err(CliError::Domain)?;
        let sol = solver::solve_with(&spec_n, &config.opts)?;
        let sup_error_vs_exact = reference.as_ref().map(|r| {
            (0..=n)
                .map(|j| {
                    let x = j as f64 / n as f64;
                    (sol.regular.eval(x) - r.regular.eval(x)).abs()
                })
                .fold(0.0, f64::max)
        });
        let observed_order = rows.last().and_then(|prev: &ConvergenceRow| {
            let (e0, e1) = match (prev.sup_error_vs_exact, sup_error_vs_exact) {
                (Some(a), Some(b)) => (a, b),
                _ => (prev.interior_residual_sup, sol.report.interior_residual_sup),
            };
            if e0 > 0.0 && e1 > 0.0 {
                let ratio = (n as f64) / (prev.n as f64);
                Some((e0 / e1).ln() / ratio.ln())
            } else {
                None
            }
        });
        rows.push(ConvergenceRow {
            n,
            interior_residual_sup: sol.report.interior_residual_sup,
            sup_error_vs_exact,
            observed_order,
        });
    }
    emit(config, "convergence.json", &rows)
}

fn cmd_crosscheck(config: &RunConfig) -> Result<(), CliError> {
    let (file, problem) = load_spec(config)?;
    if !(file.form == EquationForm::ConservativeCaputo && file.bc == BcType::Caputo) {
        return Err(CliError::Usage(
            "crosscheck covers the conservative Caputo equation with Caputo flux data; \
             set form=conservative_caputo, bc=caputo"
                .into(),
        ));
    }
    let reduction = solver::solve_with(&problem, &config.opts)?;
    let mut rows = Vec::new();
    for &n in &config.n_list {
        let sys = fem::assemble(&problem.order, n, &problem.f, problem.a0, problem.a1)
            .map_err(CliError::Domain)?;
        let u_h = fem::solve_fem_with_tol(&sys, config.opts.compat_tol).map_err(CliError::Domain)?;
        let nodal = GridFunction::new(
            (0..=n).map(|j| reduction.regular.eval(j as f64 / n as f64)).collect(),
        )
        .map_err(CliError::Domain)?;
        // Align gauges: both profiles trapezoid-mean-zero before comparing.
        let shift_r = trapezoid(&nodal);
        let shift_h = trapezoid(&u_h);
        let sup_distance = (0..=n)
            .map(|j| ((nodal.values()[j] - shift_r) - (u_h.values()[j] - shift_h)).abs())
            .fold(0.0, f64::max);
        rows.push(CrosscheckRow { n, sup_distance });
    }
    emit(config, "crosscheck.json", &rows)
}
