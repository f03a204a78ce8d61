//! The `genjacobi` command line: `solve`, `check`, `rref`, `compare`, `gen`.
//!
//! Exit codes: 0 success (converged / certified), 1 `check` found no
//! certifying norm, 2 max iterations or stagnation, 3 divergence or an
//! inconsistent system, 4 bad input.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::convergence::{check_conditions, contraction_factor};
use crate::error::{Error, ErrorKind};
use crate::generate::{certified_system, random_system, seeded_rng};
use crate::io::{save_matrix, save_vector, to_json_text, ProblemFile};
use crate::iterate::{residual, run, Method, ResidualNorm, SolveReport, SolverConfig, Status};
use crate::matrix::Vector;
use crate::partition::{partition_system, PermutationPolicy};
use crate::rref::{exact_solve, rref, ExactSolveSummary, DEFAULT_RREF_TOLERANCE};

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNCERTIFIED: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;
pub const EXIT_DIVERGED: i32 = 3;
pub const EXIT_INPUT: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "genjacobi",
    version,
    about = "Generalized Jacobi and Gauss-Seidel iterations for underdetermined systems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Iterate one method on A x = b.
    Solve(SolveArgs),
    /// Evaluate the sufficient convergence conditions.
    Check(CheckArgs),
    /// Reduce [A b] to RREF and iterate on the reduced system.
    Rref(RrefArgs),
    /// Run several methods from the same starting point.
    Compare(CompareArgs),
    /// Write a random system with a known solution.
    Gen(GenArgs),
}

#[derive(Debug, Args)]
pub struct SystemArgs {
    /// Coefficient matrix (.mtx or .csv).
    #[arg(long)]
    pub matrix: PathBuf,
    /// Right-hand side (.mtx or .csv, one row or one column).
    #[arg(long)]
    pub rhs: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormArg {
    One,
    Inf,
}

impl From<NormArg> for ResidualNorm {
    fn from(n: NormArg) -> Self {
        match n {
            NormArg::One => ResidualNorm::One,
            NormArg::Inf => ResidualNorm::Infinity,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GeneralizedArg {
    Gjacobi,
    Ggs,
}

impl From<GeneralizedArg> for Method {
    fn from(m: GeneralizedArg) -> Self {
        match m {
            GeneralizedArg::Gjacobi => Method::GeneralizedJacobi,
            GeneralizedArg::Ggs => Method::GeneralizedGaussSeidel,
        }
    }
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse::<Method>().map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Initial guess; defaults to zero.
    #[arg(long)]
    pub x0: Option<PathBuf>,
    /// baseline | gjacobi | ggs | jacobi | gs
    #[arg(long, value_parser = parse_method)]
    pub method: Method,
    #[arg(long, default_value_t = 1e-8)]
    pub eps: f64,
    #[arg(long = "max-iter", default_value_t = 10_000)]
    pub max_iter: usize,
    #[arg(long, value_enum, default_value_t = NormArg::One)]
    pub norm: NormArg,
    /// Choose head columns by pivoting instead of taking the first m.
    #[arg(long = "pivot-columns")]
    pub pivot_columns: bool,
    /// Write the full report here.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long, value_enum)]
    pub method: GeneralizedArg,
    #[arg(long = "pivot-columns")]
    pub pivot_columns: bool,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RrefArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long)]
    pub x0: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = GeneralizedArg::Gjacobi)]
    pub method: GeneralizedArg,
    #[arg(long, default_value_t = 1e-8)]
    pub eps: f64,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long)]
    pub x0: Option<PathBuf>,
    /// Comma-separated method list, e.g. baseline,gjacobi,ggs
    #[arg(long, value_delimiter = ',', required = true)]
    pub methods: Vec<String>,
    #[arg(long, default_value_t = 1e-8)]
    pub eps: f64,
    #[arg(long = "max-iter", default_value_t = 10_000)]
    pub max_iter: usize,
    /// Replace (A, b) by its reduced row echelon form before comparing.
    #[arg(long)]
    pub rref: bool,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub rows: usize,
    #[arg(long)]
    pub cols: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Only emit systems certified by the convergence check.
    #[arg(long)]
    pub certified: bool,
    /// Files are written as <prefix>_A.csv, <prefix>_b.csv, <prefix>_x.csv.
    #[arg(long = "out-prefix")]
    pub out_prefix: PathBuf,
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

/// Input problem reported with exit code 4.
struct InputError(String);

impl From<Error> for InputError {
    fn from(e: Error) -> Self {
        InputError(e.to_string())
    }
}

type CmdResult = Result<i32, InputError>;

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind as K;
            let code = match e.kind() {
                K::DisplayHelp | K::DisplayVersion | K::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = write!(out, "{}", e.render());
                    return if e.kind() == K::DisplayHelpOnMissingArgumentOrSubcommand {
                        EXIT_INPUT
                    } else {
                        EXIT_OK
                    };
                }
                _ => EXIT_INPUT,
            };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    let mut io = Io { out, err };
    let result = match &cli.command {
        Command::Solve(args) => cmd_solve(args, &mut io),
        Command::Check(args) => cmd_check(args, &mut io),
        Command::Rref(args) => cmd_rref(args, &mut io),
        Command::Compare(args) => cmd_compare(args, &mut io),
        Command::Gen(args) => cmd_gen(args, &mut io),
    };
    match result {
        Ok(code) => code,
        Err(InputError(msg)) => {
            let _ = writeln!(io.err, "error: {msg}");
            EXIT_INPUT
        }
    }
}

fn status_exit_code(status: Status) -> i32 {
    match status {
        Status::Converged => EXIT_OK,
        Status::MaxIterations | Status::Stagnated => EXIT_NOT_CONVERGED,
        Status::Diverged | Status::Error(ErrorKind::Inconsistent) => EXIT_DIVERGED,
        Status::Error(_) => EXIT_INPUT,
    }
}

fn write_json(path: &Path, text: &str) -> Result<(), InputError> {
    std::fs::write(path, text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load(system: &SystemArgs, x0: Option<&Path>) -> Result<ProblemFile, InputError> {
    Ok(ProblemFile::load(&system.matrix, &system.rhs, x0)?)
}

fn format_vector(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|x| format!("{x:.6}")).collect();
    format!("[{}]", items.join(", "))
}

fn print_summary(out: &mut dyn Write, method: Method, report: &SolveReport) {
    let _ = writeln!(out, "method:         {method}");
    let _ = writeln!(out, "status:         {}", report.status);
    let _ = writeln!(out, "iterations:     {}", report.iterations);
    let norm = match report.config.residual_norm {
        ResidualNorm::One => "1-norm",
        ResidualNorm::Infinity => "inf-norm",
    };
    let _ = writeln!(out, "final residual: {:.6e} ({norm})", report.final_residual());
    let _ = writeln!(out, "solution:       {}", format_vector(&report.solution));
}

fn cmd_solve(args: &SolveArgs, io: &mut Io<'_>) -> CmdResult {
    let problem = load(&args.system, args.x0.as_deref())?;
    let config = SolverConfig {
        method: args.method,
        epsilon: args.eps,
        max_iterations: args.max_iter,
        residual_norm: args.norm.into(),
        permutation_policy: if args.pivot_columns {
            PermutationPolicy::PivotColumns
        } else {
            PermutationPolicy::Identity
        },
        ..SolverConfig::default()
    };
    let report = run(&problem.a, &problem.b, &problem.initial_guess(), &config)?;
    print_summary(io.out, args.method, &report);
    if let Some(path) = &args.json {
        write_json(path, &to_json_text(&report))?;
    }
    Ok(status_exit_code(report.status))
}

fn cmd_check(args: &CheckArgs, io: &mut Io<'_>) -> CmdResult {
    let problem = load(&args.system, None)?;
    let policy = if args.pivot_columns {
        PermutationPolicy::PivotColumns
    } else {
        PermutationPolicy::Identity
    };
    let sys = partition_system(&problem.a, &problem.b, policy)?;
    let method: Method = args.method.into();
    let splitting = method.splitting().expect("generalized method");
    let report = check_conditions(&sys, splitting)?;

    let _ = writeln!(io.out, "method: {method}  m = {}", report.rows);
    let _ = writeln!(io.out, "{:<10} {:>14} {:>14} {:>10}", "norm", "c1", "c2", "certified");
    for c in &report.per_norm {
        let _ = writeln!(
            io.out,
            "{:<10} {:>14.6e} {:>14.6e} {:>10}",
            c.norm.name(),
            c.c1,
            c.c2,
            if c.certified { "yes" } else { "no" }
        );
    }
    match contraction_factor(&report, report.rows) {
        Some(q) => {
            let _ = writeln!(io.out, "certified; residual contraction factor <= {q:.6e}");
        }
        None => {
            let _ = writeln!(io.out, "not certified (the conditions are sufficient only)");
        }
    }
    if let Some(path) = &args.json {
        write_json(path, &to_json_text(&report))?;
    }
    Ok(if report.overall_certified {
        EXIT_OK
    } else {
        EXIT_UNCERTIFIED
    })
}

fn cmd_rref(args: &RrefArgs, io: &mut Io<'_>) -> CmdResult {
    let problem = load(&args.system, args.x0.as_deref())?;
    let config = SolverConfig {
        method: args.method.into(),
        epsilon: args.eps,
        ..SolverConfig::default()
    };
    let result = exact_solve(&problem.a, &problem.b, &problem.initial_guess(), &config)?;

    let _ = writeln!(io.out, "rref([A b]) (rank {}):", result.rref.rank);
    let _ = write!(io.out, "{}", result.rref.matrix);
    if !result.rref.consistent {
        let _ = writeln!(io.out, "system is inconsistent: no solution exists");
        if let Some(path) = &args.json {
            write_json(path, &to_json_text(&ExactSolveSummary::from(&result)))?;
        }
        return Ok(EXIT_DIVERGED);
    }
    if result.effective_rows < problem.a.rows() {
        let _ = writeln!(
            io.out,
            "rank-deficient: using {} of {} rows",
            result.effective_rows,
            problem.a.rows()
        );
    }
    print_summary(io.out, config.method, &result.report);
    let _ = writeln!(
        io.out,
        "residual vs reduced system:  {:.6e}",
        result.report.final_residual()
    );
    let _ = writeln!(io.out, "residual vs original system: {:.6e}", result.original_residual);
    if let Some(path) = &args.json {
        write_json(path, &to_json_text(&ExactSolveSummary::from(&result)))?;
    }
    Ok(status_exit_code(result.report.status))
}

fn cmd_compare(args: &CompareArgs, io: &mut Io<'_>) -> CmdResult {
    let methods = args
        .methods
        .iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<Method>())
        .collect::<Result<Vec<Method>, Error>>()?;
    if methods.is_empty() {
        return Err(InputError("empty method list".into()));
    }
    let problem = load(&args.system, args.x0.as_deref())?;
    let (a, b) = if args.rref {
        let reduced = rref(&problem.a.augment(&problem.b)?, DEFAULT_RREF_TOLERANCE);
        if !reduced.consistent {
            let _ = writeln!(io.out, "system is inconsistent: no solution exists");
            return Ok(EXIT_DIVERGED);
        }
        let n = problem.a.cols();
        let a = reduced.matrix.submatrix(0..reduced.rank, 0..n)?;
        let b = Vector::new(reduced.matrix.column(n)[..reduced.rank].to_vec())?;
        (a, b)
    } else {
        (problem.a.clone(), problem.b.clone())
    };
    let (m, n) = (a.rows(), a.cols());
    for method in &methods {
        if method.is_underdetermined() && m >= n {
            return Err(InputError(format!("{method}: method requires m < n, got {m}x{n}")));
        }
        if !method.is_underdetermined() && m != n {
            return Err(InputError(format!("{method}: method requires a square matrix, got {m}x{n}")));
        }
    }

    let x0 = problem.initial_guess();
    let configs: Vec<SolverConfig> = methods
        .iter()
        .map(|&method| SolverConfig {
            method,
            epsilon: args.eps,
            max_iterations: args.max_iter,
            ..SolverConfig::default()
        })
        .collect();
    let reports: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = configs
            .iter()
            .map(|config| s.spawn(|| run(&a, &b, &x0, config)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("solver thread panicked"))
            .collect()
    });
    let reports = reports.into_iter().collect::<Result<Vec<SolveReport>, Error>>()?;

    let _ = writeln!(
        io.out,
        "{:<10} {:<16} {:>10} {:>16}",
        "method", "status", "iterations", "residual (1-norm)"
    );
    for (method, report) in methods.iter().zip(&reports) {
        let r1 = residual(&a, &b, &report.solution)
            .map(|r| r.norm_one())
            .unwrap_or(f64::NAN);
        let _ = writeln!(
            io.out,
            "{:<10} {:<16} {:>10} {:>16.6e}",
            method.name(),
            report.status.to_string(),
            report.iterations,
            r1
        );
    }
    if let Some(path) = &args.json {
        write_json(path, &to_json_text(&reports))?;
    }
    Ok(EXIT_OK)
}

fn cmd_gen(args: &GenArgs, io: &mut Io<'_>) -> CmdResult {
    if args.rows == 0 || args.rows >= args.cols {
        return Err(InputError(format!(
            "gen requires 0 < rows < cols, got rows={} cols={}",
            args.rows, args.cols
        )));
    }
    let mut rng = seeded_rng(args.seed);
    let system = if args.certified {
        certified_system(args.rows, args.cols, &mut rng)?
    } else {
        random_system(args.rows, args.cols, &mut rng)?
    };

    let path = |suffix: &str| {
        let mut p = args.out_prefix.clone().into_os_string();
        p.push(suffix);
        PathBuf::from(p)
    };
    let (pa, pb, px) = (path("_A.csv"), path("_b.csv"), path("_x.csv"));
    save_matrix(&pa, &system.a)?;
    save_vector(&pb, &system.b)?;
    save_vector(&px, &system.solution)?;
    for p in [&pa, &pb, &px] {
        let _ = writeln!(io.out, "wrote {}", p.display());
    }
    Ok(EXIT_OK)
}
