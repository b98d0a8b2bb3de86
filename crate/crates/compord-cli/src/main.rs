//! `compord` — order compositions of monotone linear and piecewise-linear
//! functions.
//!
//! Subcommands read JSON documents (see the `format` module of the library
//! crate), write one JSON result document to standard output, and report
//! problems on standard error with distinct exit codes:
//!
//! * 0 — success
//! * 1 — usage error (bad flags, unreadable path, bad environment variable)
//! * 2 — parse error (malformed or invalid input document)
//! * 3 — solver contract violation (no polynomial solver for this
//!   class/mode/objective combination)
//! * 4 — instance too large for the brute-force oracle
//!
//! The oracle size cap defaults to 8 functions and can be overridden with
//! the `COMPORD_ORACLE_LIMIT` environment variable.

use clap::{Parser, Subcommand};
use compord::adapters::{
    simulate_secretary, solve_makespan, solve_secretary_two_valued, Applicant, Job,
};
use compord::gadgets::{
    gap_check_partition_with_limit, gap_check_product_with_limit, partition_gadget,
    product_partition_gadget, GadgetError, PartitionInput, ProductPartitionInput,
};
use compord::oracle::{
    brute_exact_k_with_limit, brute_partial_with_limit, brute_total_min_with_limit,
    brute_total_with_limit, OracleError,
};
use compord::solvers::{rotation_values, Instance, Mode, Objective, SolverError, Solution};
use compord::{
    float::{solve_partial_float, solve_total_float, FloatAffine},
    lex_sort,
    numeric::to_f64,
    AffineFn, Function, MonotonePwlFn, Rational,
};
use compord_cli::format::{self, FormatError, InstanceFile, ScheduleFile, SecretaryFile};
use serde::Serialize;
use std::path::{Path, PathBuf};

const ORACLE_LIMIT_VAR: &str = "COMPORD_ORACLE_LIMIT";

#[derive(Parser)]
#[command(
    name = "compord",
    version,
    about = "Order compositions of monotone linear and piecewise-linear functions",
    after_help = "Exit codes: 0 success, 1 usage, 2 parse, 3 unsupported instance, \
                  4 oracle limit exceeded."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve an instance file with the polynomial solvers
    Solve {
        /// Instance document (JSON)
        file: PathBuf,
        /// Override the mode stored in the file
        #[arg(long, value_parser = ["total", "partial", "exact-k"])]
        mode: Option<String>,
        /// Number of functions to apply (mode exact-k)
        #[arg(long)]
        k: Option<usize>,
        /// Use the approximate IEEE-754 backend (large max instances)
        #[arg(long)]
        float: bool,
    },
    /// Solve an instance file by exhaustive enumeration (small n)
    Oracle {
        /// Instance document (JSON)
        file: PathBuf,
        /// Override the mode stored in the file
        #[arg(long, value_parser = ["total", "partial", "exact-k"])]
        mode: Option<String>,
        /// Number of functions to apply (mode exact-k)
        #[arg(long)]
        k: Option<usize>,
    },
    /// Print the cyclic-shift value table d_1..d_m of the sorted order
    ///
    /// The table is for maximizing the total composition of the affine
    /// functions in the file; the mode and objective fields are ignored.
    Rotations {
        /// Instance document (JSON, affine functions only)
        file: PathBuf,
    },
    /// Plan a free-order secretary instance, optionally simulating the plan
    Secretary {
        /// Applicant document (JSON)
        file: PathBuf,
        /// Monte-Carlo trials to run against the plan
        #[arg(long, value_name = "TRIALS")]
        simulate: Option<usize>,
        /// Random seed for --simulate
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Order time-dependent jobs on one machine to minimize the makespan
    Schedule {
        /// Job document (JSON)
        file: PathBuf,
    },
    /// Emit a hardness-gadget instance document on standard output
    Gadget {
        #[command(subcommand)]
        which: GadgetKind,
        /// Emit only the n+1 base functions, omitting the steep function
        #[arg(long, global = true)]
        base_only: bool,
    },
    /// Check a gadget's value dichotomy with the brute-force oracle
    GapCheck {
        #[command(subcommand)]
        which: GadgetKind,
    },
}

#[derive(Subcommand, Clone)]
enum GadgetKind {
    /// Reduction from Partition (even-sum weights)
    Partition {
        /// Comma-separated positive integer weights
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<u64>,
        /// Gap steepness factor (rational > 1)
        #[arg(long, default_value = "2")]
        alpha: String,
    },
    /// Reduction from Product Partition (perfect-square product)
    Product {
        /// Comma-separated integer factors ≥ 2
        #[arg(long, value_delimiter = ',', required = true)]
        factors: Vec<u64>,
        /// Gap steepness factor (rational > 1)
        #[arg(long, default_value = "2")]
        alpha: String,
    },
}

// ---------------------------------------------------------------------------
// Errors and exit codes
// ---------------------------------------------------------------------------

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Contract(String),
    #[error("{0}")]
    TooLarge(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Contract(_) => 3,
            CliError::TooLarge(_) => 4,
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::InvalidK { .. } => CliError::Parse(e.to_string()),
            SolverError::Unsupported(_) => CliError::Contract(e.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::TooLarge { .. } => CliError::TooLarge(e.to_string()),
            OracleError::InvalidK { .. } => CliError::Parse(e.to_string()),
        }
    }
}

impl From<compord::adapters::AdapterError> for CliError {
    fn from(e: compord::adapters::AdapterError) -> Self {
        use compord::adapters::AdapterError::*;
        match e {
            Unsupported(_) => CliError::Contract(e.to_string()),
            Solver(s) => s.into(),
            NonMonotone { .. } | NonPositiveBase { .. } | BadDistribution(_) | Function(_) => {
                CliError::Parse(e.to_string())
            }
        }
    }
}

impl From<GadgetError> for CliError {
    fn from(e: GadgetError) -> Self {
        match e {
            GadgetError::Oracle(o) => o.into(),
            // weights and factors arrive on the command line, not in a file
            GadgetError::NotEvenSum { .. } | GadgetError::BadInput(_) => {
                CliError::Usage(e.to_string())
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Output documents
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct DpDimensions {
    n: usize,
    k: usize,
}

#[derive(Serialize)]
struct SolveDoc {
    backend: &'static str,
    objective: String,
    mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    value: String,
    /// 1-based function indices, innermost (first-applied) first.
    permutation: Vec<usize>,
    prefix_len: usize,
    /// 1-based offset of the winning cyclic shift (total mode).
    #[serde(skip_serializing_if = "Option::is_none")]
    rotation_index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dp_dimensions: Option<DpDimensions>,
}

#[derive(Serialize)]
struct FloatSolveDoc {
    backend: &'static str,
    note: &'static str,
    objective: String,
    mode: String,
    value: f64,
    permutation: Vec<usize>,
    prefix_len: usize,
}

#[derive(Serialize)]
struct RotationsDoc {
    start: String,
    /// 1-based indices of the non-identity functions in sorted order.
    sorted_order: Vec<usize>,
    /// 1-based indices of identity functions (they never affect the value).
    identities: Vec<usize>,
    /// d_t = value of the cyclic shift starting at sorted position t.
    rotations: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    best_rotation: Option<usize>,
}

#[derive(Serialize)]
struct SecretaryDoc {
    expected_value: String,
    /// 1-based applicant indices, first interviewed first.
    interview_order: Vec<usize>,
    /// Hire applicant i (except the last) iff their value is ≥ threshold i.
    thresholds: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    simulation: Option<SimulationDoc>,
}

#[derive(Serialize)]
struct SimulationDoc {
    trials: usize,
    seed: u64,
    mean: String,
    stderr: f64,
}

#[derive(Serialize)]
struct ScheduleDoc {
    makespan: String,
    /// 1-based job indices in processing order.
    order: Vec<usize>,
    rows: Vec<ScheduleRowDoc>,
}

#[derive(Serialize)]
struct ScheduleRowDoc {
    job: usize,
    start: String,
    finish: String,
}

#[derive(Serialize)]
struct GapDoc {
    gadget: &'static str,
    has_partition: bool,
    oracle_value: String,
    dichotomy_ok: bool,
}

// ---------------------------------------------------------------------------
// Helpers
// ---------------------------------------------------------------------------

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn one_based(indices: &[usize]) -> Vec<usize> {
    indices.iter().map(|i| i + 1).collect()
}

fn show(r: &Rational) -> String {
    format::show_rational(r)
}

fn print_doc<T: Serialize>(doc: &T) {
    print!("{}", format::canonical_json(doc));
}

fn oracle_limit() -> Result<usize, CliError> {
    match std::env::var(ORACLE_LIMIT_VAR) {
        Err(std::env::VarError::NotPresent) => Ok(compord::oracle::DEFAULT_LIMIT),
        Err(e) => Err(CliError::Usage(format!("{ORACLE_LIMIT_VAR}: {e}"))),
        Ok(s) => s.trim().parse::<usize>().map_err(|_| {
            CliError::Usage(format!(
                "{ORACLE_LIMIT_VAR} must be a nonnegative integer, got {s:?}"
            ))
        }),
    }
}

/// Reads an instance file and applies command-line mode/k overrides before
/// validation. Switching the mode away from exact-k drops the file's k.
fn load_instance(
    path: &Path,
    mode: Option<&str>,
    k: Option<usize>,
) -> Result<(InstanceFile, Instance), CliError> {
    let text = read_file(path)?;
    let mut file: InstanceFile = format::parse_document(&text)?;
    if let Some(m) = mode {
        if m != file.mode && m != "exact-k" {
            file.k = None;
        }
        file.mode = m.to_string();
    }
    if let Some(k) = k {
        file.k = Some(k);
    }
    let instance = format::to_instance(&file)?;
    Ok((file, instance))
}

fn gadget_functions(kind: &GadgetKind) -> Result<(Vec<MonotonePwlFn>, Rational, usize), CliError> {
    match kind {
        GadgetKind::Partition { weights, alpha } => {
            let inp = PartitionInput::new(weights.clone(), parse_alpha(alpha)?)?;
            let g = partition_gadget(&inp);
            Ok((g.functions, g.start, weights.len()))
        }
        GadgetKind::Product { factors, alpha } => {
            let inp = ProductPartitionInput::new(factors.clone(), parse_alpha(alpha)?)?;
            let g = product_partition_gadget(&inp);
            Ok((g.functions, g.start, factors.len()))
        }
    }
}

fn parse_alpha(alpha: &str) -> Result<Rational, CliError> {
    format::rational(alpha)
        .map_err(|_| CliError::Usage(format!("--alpha must be a rational number, got {alpha:?}")))
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

fn cmd_solve(
    path: &Path,
    mode: Option<&str>,
    k: Option<usize>,
    float: bool,
) -> Result<(), CliError> {
    let (file, instance) = load_instance(path, mode, k)?;
    if float {
        return cmd_solve_float(&file, &instance);
    }
    let n = instance.functions.len();
    let solution: Solution = compord::solve(&instance)?;
    let dp_dimensions = match instance.mode {
        Mode::ExactK(k) => Some(DpDimensions { n, k }),
        _ => None,
    };
    print_doc(&SolveDoc {
        backend: "exact-rational",
        objective: file.objective,
        mode: file.mode,
        k: file.k,
        value: show(&solution.value),
        permutation: one_based(&solution.permutation),
        prefix_len: solution.prefix_len,
        rotation_index: solution.rotation_index.map(|t| t + 1),
        dp_dimensions,
    });
    Ok(())
}

fn cmd_solve_float(file: &InstanceFile, instance: &Instance) -> Result<(), CliError> {
    if instance.objective != Objective::Max {
        return Err(CliError::Contract(
            "the float backend only maximizes; reflect the instance to minimize".into(),
        ));
    }
    let affines: Vec<FloatAffine> = instance
        .functions
        .iter()
        .map(|f| f.as_affine().map(FloatAffine::from_rational))
        .collect::<Option<_>>()
        .ok_or_else(|| {
            CliError::Contract("the float backend supports affine functions only".into())
        })?;
    let start = to_f64(&instance.start);
    let solved = match instance.mode {
        Mode::Total => solve_total_float(&affines, start),
        Mode::Partial => solve_partial_float(&affines, start),
        Mode::ExactK(_) => {
            return Err(CliError::Contract(
                "the float backend supports total and partial modes only".into(),
            ))
        }
    };
    print_doc(&FloatSolveDoc {
        backend: "float64",
        note: "approximate: IEEE-754 double precision, not exact rational arithmetic",
        objective: file.objective.clone(),
        mode: file.mode.clone(),
        value: solved.value,
        permutation: one_based(&solved.permutation),
        prefix_len: solved.prefix_len,
    });
    Ok(())
}

fn cmd_oracle(path: &Path, mode: Option<&str>, k: Option<usize>) -> Result<(), CliError> {
    let (file, instance) = load_instance(path, mode, k)?;
    let limit = oracle_limit()?;
    let pwls: Vec<MonotonePwlFn> = instance.functions.iter().map(Function::to_pwl).collect();
    let solution = match (instance.objective, instance.mode) {
        (Objective::Max, Mode::Total) => brute_total_with_limit(&pwls, &instance.start, limit)?,
        (Objective::Max, Mode::Partial) => brute_partial_with_limit(&pwls, &instance.start, limit)?,
        (Objective::Max, Mode::ExactK(k)) => {
            brute_exact_k_with_limit(&pwls, &instance.start, k, limit)?
        }
        (Objective::Min, Mode::Total) => brute_total_min_with_limit(&pwls, &instance.start, limit)?,
        (Objective::Min, Mode::Partial | Mode::ExactK(_)) => {
            return Err(CliError::Contract(
                "the oracle minimizes total compositions only".into(),
            ))
        }
    };
    print_doc(&SolveDoc {
        backend: "oracle-bruteforce",
        objective: file.objective,
        mode: file.mode,
        k: file.k,
        value: show(&solution.value),
        permutation: one_based(&solution.permutation),
        prefix_len: solution.prefix_len,
        rotation_index: None,
        dp_dimensions: None,
    });
    Ok(())
}

fn cmd_rotations(path: &Path) -> Result<(), CliError> {
    let (_, instance) = load_instance(path, None, None)?;
    let affines: Vec<AffineFn> = instance
        .functions
        .iter()
        .map(|f| f.as_affine().cloned())
        .collect::<Option<_>>()
        .ok_or_else(|| {
            CliError::Contract("rotation tables are defined for affine functions only".into())
        })?;
    let (identity_ix, non_ix): (Vec<usize>, Vec<usize>) =
        (0..affines.len()).partition(|&i| affines[i].is_identity());
    let keyed: Vec<AffineFn> = non_ix.iter().map(|&i| affines[i].clone()).collect();
    let sorted: Vec<usize> = lex_sort(&keyed)
        .expect("identities were filtered out")
        .into_iter()
        .map(|p| non_ix[p])
        .collect();
    let in_order: Vec<AffineFn> = sorted.iter().map(|&i| affines[i].clone()).collect();
    let ds = rotation_values(&in_order, &instance.start);
    let best_rotation = ds
        .iter()
        .enumerate()
        .max_by(|(s, a), (t, b)| a.cmp(b).then(t.cmp(s)))
        .map(|(t, _)| t + 1);
    print_doc(&RotationsDoc {
        start: show(&instance.start),
        sorted_order: one_based(&sorted),
        identities: one_based(&identity_ix),
        rotations: ds.iter().map(show).collect(),
        best_rotation,
    });
    Ok(())
}

fn cmd_secretary(path: &Path, simulate: Option<usize>, seed: u64) -> Result<(), CliError> {
    if simulate == Some(0) {
        return Err(CliError::Usage("--simulate requires at least one trial".into()));
    }
    let text = read_file(path)?;
    let file: SecretaryFile = format::parse_document(&text)?;
    let apps: Vec<Applicant> = file
        .applicants
        .iter()
        .enumerate()
        .map(|(i, spec)| {
            let values =
                spec.values.iter().map(|s| format::rational(s)).collect::<Result<Vec<_>, _>>()?;
            let probs =
                spec.probs.iter().map(|s| format::rational(s)).collect::<Result<Vec<_>, _>>()?;
            Applicant::new(values, probs)
                .map_err(|e| CliError::Parse(format!("applicant {}: {e}", i + 1)))
        })
        .collect::<Result<_, CliError>>()?;
    let plan = solve_secretary_two_valued(&apps)?;
    let simulation = simulate.map(|trials| {
        let report = simulate_secretary(&apps, &plan.interview_order, &plan.thresholds, trials, seed);
        SimulationDoc { trials, seed, mean: show(&report.mean), stderr: report.stderr }
    });
    print_doc(&SecretaryDoc {
        expected_value: show(&plan.expected_value),
        interview_order: one_based(&plan.interview_order),
        thresholds: plan.thresholds.iter().map(show).collect(),
        simulation,
    });
    Ok(())
}

fn cmd_schedule(path: &Path) -> Result<(), CliError> {
    let text = read_file(path)?;
    let file: ScheduleFile = format::parse_document(&text)?;
    let jobs: Vec<Job> = file
        .jobs
        .iter()
        .map(|spec| -> Result<Job, CliError> {
            let rate = format::rational(&spec.rate)?;
            let base = format::rational(&spec.base)?;
            Job::new(rate, base).map_err(CliError::from)
        })
        .collect::<Result<_, _>>()?;
    let t0 = format::rational(&file.start)?;
    let report = solve_makespan(&jobs, &t0)?;
    print_doc(&ScheduleDoc {
        makespan: show(&report.makespan),
        order: one_based(&report.order),
        rows: report
            .rows
            .iter()
            .map(|r| ScheduleRowDoc {
                job: r.job + 1,
                start: show(&r.start),
                finish: show(&r.finish),
            })
            .collect(),
    });
    Ok(())
}

fn cmd_gadget(kind: &GadgetKind, base_only: bool) -> Result<(), CliError> {
    let (mut functions, start, n) = gadget_functions(kind)?;
    if base_only {
        functions.truncate(n + 1);
    }
    let functions = functions.into_iter().map(Function::Pwl).collect();
    let instance = Instance::new(functions, start, Objective::Max, Mode::Partial)
        .expect("partial mode never rejects");
    print_doc(&format::from_instance(&instance));
    Ok(())
}

fn cmd_gap_check(kind: &GadgetKind) -> Result<(), CliError> {
    let limit = oracle_limit()?;
    let (name, report) = match kind {
        GadgetKind::Partition { weights, alpha } => {
            let inp = PartitionInput::new(weights.clone(), parse_alpha(alpha)?)?;
            ("partition", gap_check_partition_with_limit(&inp, limit)?)
        }
        GadgetKind::Product { factors, alpha } => {
            let inp = ProductPartitionInput::new(factors.clone(), parse_alpha(alpha)?)?;
            ("product", gap_check_product_with_limit(&inp, limit)?)
        }
    };
    print_doc(&GapDoc {
        gadget: name,
        has_partition: report.has_partition,
        oracle_value: show(&report.oracle_value),
        dichotomy_ok: report.dichotomy_ok,
    });
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.cmd {
        Cmd::Solve { file, mode, k, float } => cmd_solve(file, mode.as_deref(), *k, *float),
        Cmd::Oracle { file, mode, k } => cmd_oracle(file, mode.as_deref(), *k),
        Cmd::Rotations { file } => cmd_rotations(file),
        Cmd::Secretary { file, simulate, seed } => cmd_secretary(file, *simulate, *seed),
        Cmd::Schedule { file } => cmd_schedule(file),
        Cmd::Gadget { which, base_only } => cmd_gadget(which, *base_only),
        Cmd::GapCheck { which } => cmd_gap_check(which),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            e.print().expect("console is writable");
            std::process::exit(code);
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.code());
    }
}
