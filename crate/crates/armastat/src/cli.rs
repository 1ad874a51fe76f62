//! Command-line front end.
//!
//! Exit codes: 0 the property holds, 2 it does not, 3 the verdict depends on
//! a point inside the unit-circle uncertainty band, 4 the criterion does not
//! apply, 1 input or numerical error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use armastat_core::arma1q::{check_existence_1q, solution_coeffs_1q};
use armastat_core::armapq::{build_qtilde, check_causal, check_existence_pq, solution_coeffs_pq};
use armastat_core::mpoly::{det_poly, gcld};
use armastat_core::rational::laurent_coeffs;
use armastat_core::report::{StationarityReport, Verdict};
use armastat_core::sim::{residual_check, simulate_path, LinearSolution, SimConfig};
use armastat_core::tol::Tolerances;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::format::{ModelFile, ReportFile};
use crate::output::{laurent_csv, path_csv, write_atomic};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NO: i32 = 2;
pub const EXIT_BOUNDARY: i32 = 3;
pub const EXIT_NOT_APPLICABLE: i32 = 4;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "ARMA_STATIONARITY_THREADS";

#[derive(Parser, Debug)]
#[command(name = "armastat", version, about = "Stationary solutions of multivariate ARMA equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide existence and uniqueness of a strictly stationary solution.
    Analyze(AnalyzeArgs),
    /// Export Laurent coefficients of P⁻¹Q̃ as CSV.
    Laurent(LaurentArgs),
    /// Simulate the constructed solution and check the recursion residual.
    Simulate(SimulateArgs),
    /// Test left-coprimeness of P and Q̃.
    Coprime(ModelArgs),
    /// Decide existence of a causal strictly stationary solution.
    Causal(ModelArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Order {
    Auto,
    #[value(name = "1q")]
    OneQ,
    Pq,
}

#[derive(Args, Debug, Clone)]
struct TolArgs {
    /// Half-width of the unit-circle uncertainty band.
    #[arg(long)]
    tol_circle: Option<f64>,
    /// Relative singular-value threshold for rank decisions.
    #[arg(long)]
    tol_rank: Option<f64>,
    /// Relative threshold for zero polynomial coefficients.
    #[arg(long)]
    tol_poly_zero: Option<f64>,
}

#[derive(Args, Debug)]
struct ModelArgs {
    model: PathBuf,
    #[command(flatten)]
    tol: TolArgs,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    model: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    order: Order,
    #[command(flatten)]
    tol: TolArgs,
    /// Write the JSON report here.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct LaurentArgs {
    model: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    jmin: i64,
    #[arg(long, allow_hyphen_values = true)]
    jmax: i64,
    #[command(flatten)]
    tol: TolArgs,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    model: PathBuf,
    /// Number of time points.
    #[arg(long = "T")]
    horizon: usize,
    /// Truncation lag of the two-sided sum.
    #[arg(long = "J")]
    truncation: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Times excluded at each end of the residual check (default p + q).
    #[arg(long)]
    burn_guard: Option<usize>,
    #[arg(long, value_enum, default_value = "auto")]
    order: Order,
    #[command(flatten)]
    tol: TolArgs,
    /// Write the path CSV here instead of stdout.
    #[arg(long)]
    csv: Option<PathBuf>,
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    configure_threads();
    let outcome = match cli.command {
        Command::Analyze(a) => analyze(a),
        Command::Laurent(a) => laurent(a),
        Command::Simulate(a) => simulate(a),
        Command::Coprime(a) => coprime(a),
        Command::Causal(a) => causal(a),
    };
    match outcome {
        Ok(code) => code,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            EXIT_ERROR
        }
    }
}

fn configure_threads() {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return;
    };
    match value.trim().parse::<usize>() {
        Ok(n) if n > 0 => {
            // a second initialisation in the same process is harmless
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        _ => eprintln!("warning: ignoring {THREADS_ENV}={value}"),
    }
}

fn load(path: &Path, overrides: &TolArgs) -> Result<(ModelFile, Tolerances), Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    let file = ModelFile::parse(&text)?;
    let mut tol = file.tolerances();
    if let Some(v) = overrides.tol_circle {
        tol.circle = v;
    }
    if let Some(v) = overrides.tol_rank {
        tol.rank = v;
    }
    if let Some(v) = overrides.tol_poly_zero {
        tol.poly_zero = v;
    }
    Ok((file, tol))
}

fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match path {
        Some(p) => write_atomic(p, bytes).map_err(|e| Failure(format!("{}: {e}", p.display()))),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(bytes)?;
            Ok(())
        }
    }
}

fn run_analyzer(file: &ModelFile, order: Order, tol: &Tolerances) -> Result<(&'static str, StationarityReport), Failure> {
    Ok(match order {
        Order::OneQ => {
            let mut report = check_existence_1q(&file.first_order_model()?, tol)?;
            // the Jordan path has no weak or causal criterion of its own
            let pq = check_existence_pq(&file.pq_model()?, tol)?;
            report.exists_weak = pq.exists_weak;
            report.exists_causal = pq.exists_causal;
            ("1q", report)
        }
        Order::Auto | Order::Pq => ("pq", check_existence_pq(&file.pq_model()?, tol)?),
    })
}

fn verdict_code(report: &StationarityReport) -> i32 {
    if report.boundary_uncertain {
        EXIT_BOUNDARY
    } else if report.exists_strict {
        EXIT_OK
    } else {
        EXIT_NO
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn summary(order: &str, r: &StationarityReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "analyzer: {order}");
    let _ = writeln!(s, "strictly stationary solution: {}", yes_no(r.exists_strict));
    if r.boundary_uncertain {
        let _ = writeln!(s, "boundary uncertain: yes (off-circle reading: {})", r.exists_strict_off_circle.name());
    }
    let _ = writeln!(s, "failing condition: {}", r.failing_condition.name());
    let _ = writeln!(s, "unique: {}", yes_no(r.unique));
    let _ = writeln!(s, "weakly stationary solution: {}", r.exists_weak.name());
    let _ = writeln!(s, "causal solution: {}", r.exists_causal.name());
    if let Some(o) = &r.diagnostics.obstruction {
        let _ = writeln!(s, "obstruction: entry ({}, {}) at z = {} (order {} < {})", o.row + 1, o.col + 1, o.z0, o.order, o.multiplicity);
    }
    for b in r.blocks.iter().filter(|b| !b.passes) {
        let _ = writeln!(s, "block {} (λ = {}, {}): {}", b.h, b.lambda, b.case.name(), b.reason);
    }
    for w in &r.diagnostics.warnings {
        let _ = writeln!(s, "warning: {w}");
    }
    s
}

fn analyze(a: AnalyzeArgs) -> Result<i32, Failure> {
    let (file, tol) = load(&a.model, &a.tol)?;
    let (order, report) = run_analyzer(&file, a.order, &tol)?;
    print!("{}", summary(order, &report));
    if let Some(path) = &a.json {
        emit(Some(path), ReportFile::from_report(order, &report).to_json().as_bytes())?;
    }
    Ok(verdict_code(&report))
}

fn laurent(a: LaurentArgs) -> Result<i32, Failure> {
    let (file, tol) = load(&a.model, &a.tol)?;
    let model = file.pq_model()?;
    let split = model.noise().unitary_split()?;
    let qt = build_qtilde(&model, &split);
    match laurent_coeffs(&model.p_poly(), &qt, a.jmin, a.jmax, &tol) {
        Ok(series) => {
            emit(a.csv.as_deref(), &laurent_csv(&series)?)?;
            Ok(EXIT_OK)
        }
        Err(e @ armastat_core::Error::NotRemovable { .. }) => {
            eprintln!("no Laurent expansion on the unit circle: {e}");
            Ok(EXIT_NO)
        }
        Err(e) => Err(e.into()),
    }
}

fn simulate(a: SimulateArgs) -> Result<i32, Failure> {
    let (file, tol) = load(&a.model, &a.tol)?;
    let (order, report) = run_analyzer(&file, a.order, &tol)?;
    if !report.exists_strict {
        eprintln!("no strictly stationary solution (failing condition: {})", report.failing_condition.name());
        return Ok(EXIT_NO);
    }
    if report.boundary_uncertain {
        eprintln!("warning: existence depends on a point inside the unit-circle uncertainty band");
    }
    let psis = file.psis()?;
    let thetas = file.thetas()?;
    let (p, q) = (file.p, file.q);
    let cfg = SimConfig {
        horizon: a.horizon,
        truncation: a.truncation,
        burn_guard: a.burn_guard.unwrap_or(p + q),
        seed: a.seed,
    };
    cfg.validate(p, q)?;
    let j = a.truncation as i64;
    let solution: LinearSolution = if order == "1q" {
        solution_coeffs_1q(&file.first_order_model()?, a.truncation, &tol)?.assembled
    } else {
        solution_coeffs_pq(&file.pq_model()?, -j, j, &tol)?.solution
    };
    let noise = file.noise_model()?;
    let path = simulate_path(&solution, &noise, &cfg)?;
    let residual = residual_check(&psis, &thetas, &path, &cfg)?;
    let decay = solution.coeffs.decay;
    let tail = decay.bound(j + 1).max(decay.bound(-j - 1));
    eprintln!("max interior residual: {residual:e}");
    eprintln!("truncation envelope at |j| = J + 1: {tail:e}");
    emit(a.csv.as_deref(), &path_csv(&path.y)?)?;
    Ok(EXIT_OK)
}

fn coprime(a: ModelArgs) -> Result<i32, Failure> {
    let (file, tol) = load(&a.model, &a.tol)?;
    let model = file.pq_model()?;
    let split = model.noise().unitary_split()?;
    let qt = build_qtilde(&model, &split);
    let g = gcld(&model.p_poly(), &qt, tol.rank)?;
    let det = det_poly(&g.divisor)?.trim_relative(tol.poly_zero);
    let degree = det.degree().unwrap_or(0);
    let coprime = degree == 0 && !det.is_zero();
    println!("gcld determinant degree: {degree}");
    println!("left-coprime: {}", yes_no(coprime));
    Ok(if coprime { EXIT_OK } else { EXIT_NO })
}

fn causal(a: ModelArgs) -> Result<i32, Failure> {
    let (file, tol) = load(&a.model, &a.tol)?;
    let verdict = check_causal(&file.pq_model()?, &tol)?;
    println!("causal solution: {}", verdict.name());
    Ok(match verdict {
        Verdict::Yes => EXIT_OK,
        Verdict::No => EXIT_NO,
        Verdict::Undetermined => EXIT_BOUNDARY,
        Verdict::NotApplicable => EXIT_NOT_APPLICABLE,
    })
}
