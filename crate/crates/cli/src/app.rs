use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use frackw_core::critical::{find_lambda_star, sweep, CriticalOptions, SearchStatus, SweepGrid};
use frackw_core::graph::{builtin_graph, VertexFunction, WeightedGraph};
use frackw_core::io::parse_graph_file;
use frackw_core::solver::{multi_start_solve, NewtonOptions, ProblemInstance};
use frackw_core::spectral::{fractional_operator, FractionalOperator};
use frackw_core::Error;

use crate::output::{emit_csv, emit_svg, fmt_sig, matrix_table, vector_line};
use crate::selftest::run_selftest;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;

/// Sweeps fail when more than this fraction of rows is uncertain.
pub const MAX_UNCERTAIN_FRACTION: f64 = 0.01;

pub const THREADS_ENV: &str = "FRACKW_THREADS";

/// Where the graph comes from: a JSON file or `builtin:k`.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphSource {
    Builtin(u32),
    File(PathBuf),
}

impl FromStr for GraphSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.strip_prefix("builtin:") {
            Some(k) => k
                .parse()
                .map(GraphSource::Builtin)
                .map_err(|_| format!("expected builtin:<1..5>, got `{s}`")),
            None => Ok(GraphSource::File(PathBuf::from(s))),
        }
    }
}

impl GraphSource {
    pub fn load(&self) -> Result<(WeightedGraph, VertexFunction), Error> {
        match self {
            GraphSource::Builtin(k) => builtin_graph(*k),
            GraphSource::File(path) => parse_graph_file(&fs::read_to_string(path)?),
        }
    }

    /// Fixed vertical plot range for the builtin graphs.
    pub fn plot_y_max(&self) -> Option<f64> {
        match self {
            GraphSource::Builtin(1) => Some(0.15),
            GraphSource::Builtin(_) => Some(0.35),
            GraphSource::File(_) => None,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "frackw",
    version,
    about = "Fractional Laplacian and Kazdan-Warner solver on weighted graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenpairs, L_s and the kernel table.
    Spectral {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, allow_negative_numbers = true)]
        s: f64,
        #[arg(long)]
        json: bool,
    },
    /// Enumerate solutions by multi-start Newton and report the degree.
    Solve {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, allow_negative_numbers = true)]
        s: f64,
        #[arg(long, allow_negative_numbers = true)]
        lambda: f64,
        #[arg(long, allow_negative_numbers = true)]
        c: f64,
        #[arg(long, default_value_t = 256)]
        starts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Locate the critical parameter for one (c, s).
    Critical {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, allow_negative_numbers = true)]
        s: f64,
        #[arg(long, allow_negative_numbers = true)]
        c: f64,
        #[arg(long, default_value_t = 1e-4, allow_negative_numbers = true)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Critical parameter over a (c, s) grid, written as CSV (and SVG).
    Sweep {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_negative_numbers = true
        )]
        s_list: Vec<f64>,
        #[arg(long, allow_negative_numbers = true)]
        c_min: f64,
        #[arg(long, allow_negative_numbers = true)]
        c_max: f64,
        #[arg(long, allow_negative_numbers = true)]
        c_step: f64,
        #[arg(long, default_value_t = 1e-4, allow_negative_numbers = true)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Run the invariant and acceptance suites.
    Selftest {
        /// Skip the sweep-based checks.
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Debug, Args)]
pub struct GraphArg {
    /// JSON graph file or builtin:k with k in 1..=5.
    #[arg(long = "graph", value_name = "FILE|builtin:k")]
    pub source: GraphSource,
}

/// Failure of a command: exit code plus message.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn validation(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_VALIDATION,
            message: format!("E-VALID: {}", message.into()),
        }
    }

    fn numeric(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_NUMERIC,
            message: format!("E-NUM: {}", message.into()),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = e.code();
        Failure {
            code: if code == "E-NUM" {
                EXIT_NUMERIC
            } else {
                EXIT_VALIDATION
            },
            message: format!("{code}: {e}"),
        }
    }
}

fn check_s(s: f64) -> Result<(), Failure> {
    if s > 0.0 && s <= 1.0 {
        Ok(())
    } else {
        Err(Failure::validation(format!(
            "--s must lie in (0, 1], got {s}"
        )))
    }
}

fn check_c(c: f64) -> Result<(), Failure> {
    if c < 0.0 {
        Ok(())
    } else {
        Err(Failure::validation(format!(
            "--c must be negative, got {c}"
        )))
    }
}

fn check_tol(tol: f64) -> Result<(), Failure> {
    if tol > 0.0 {
        Ok(())
    } else {
        Err(Failure::validation(format!(
            "--tol must be positive, got {tol}"
        )))
    }
}

impl Command {
    /// Range checks done before any graph is loaded.
    pub fn validate(&self) -> Result<(), Failure> {
        match self {
            Command::Spectral { s, .. } => check_s(*s),
            Command::Solve {
                s,
                lambda,
                c,
                starts,
                ..
            } => {
                check_s(*s)?;
                check_c(*c)?;
                if !lambda.is_finite() {
                    return Err(Failure::validation("--lambda must be finite"));
                }
                if *starts == 0 {
                    return Err(Failure::validation("--starts must be at least 1"));
                }
                Ok(())
            }
            Command::Critical { s, c, tol, .. } => {
                check_s(*s)?;
                check_c(*c)?;
                check_tol(*tol)
            }
            Command::Sweep {
                s_list,
                c_min,
                c_max,
                c_step,
                tol,
                ..
            } => {
                s_list.iter().try_for_each(|s| check_s(*s))?;
                check_tol(*tol)?;
                SweepGrid {
                    c_min: *c_min,
                    c_max: *c_max,
                    c_step: *c_step,
                    s_list: s_list.clone(),
                }
                .validate()
                .map_err(Failure::from)
            }
            Command::Selftest { .. } => Ok(()),
        }
    }
}

/// `FRACKW_THREADS`, when set, caps sweep parallelism.
pub fn threads_from_env() -> Result<Option<usize>, Failure> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(t) if t > 0 => Ok(Some(t)),
            _ => Err(Failure::validation(format!(
                "{THREADS_ENV} must be a positive integer, got `{v}`"
            ))),
        },
        Err(_) => Ok(None),
    }
}

/// Parses arguments, runs the command, prints output and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    EXIT_OK
                }
                _ => {
                    eprintln!("E-VALID: {}", e.to_string().trim_end());
                    EXIT_VALIDATION
                }
            };
        }
    };
    match execute(&cli.command) {
        Ok(text) => {
            print!("{text}");
            EXIT_OK
        }
        Err((text, failure)) => {
            print!("{text}");
            eprintln!("{}", failure.message);
            failure.code
        }
    }
}

/// Output text on success; on failure, any partial output plus the failure.
pub fn execute(command: &Command) -> Result<String, (String, Failure)> {
    let bare = |f: Failure| (String::new(), f);
    command.validate().map_err(bare)?;
    match command {
        Command::Sweep { .. } => {
            let threads = threads_from_env().map_err(bare)?;
            run_sweep(command, threads)
        }
        Command::Selftest { quick } => {
            let outcomes = run_selftest(*quick);
            let mut text = String::new();
            for o in &outcomes {
                let _ = writeln!(text, "{o}");
            }
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            if failed == 0 {
                let _ = writeln!(text, "all {} checks passed", outcomes.len());
                Ok(text)
            } else {
                Err((
                    text,
                    Failure::numeric(format!("{failed} of {} checks failed", outcomes.len())),
                ))
            }
        }
        _ => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(1)
                .build()
                .map_err(|e| bare(Failure::numeric(e.to_string())))?;
            pool.install(|| single(command)).map_err(bare)
        }
    }
}

fn load(graph: &GraphArg) -> Result<(WeightedGraph, VertexFunction), Failure> {
    graph.source.load().map_err(Failure::from)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct SpectralJson<'a> {
    eigenvalues: &'a [f64],
    phi: &'a [Vec<f64>],
    #[serde(rename = "Ls")]
    ls: Vec<Vec<f64>>,
    #[serde(rename = "Ws")]
    ws: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct SolutionJson<'a> {
    u: &'a [f64],
    residual_norm: f64,
    jacobian_sign: i8,
    iterations: usize,
}

#[derive(Serialize)]
struct SolveJson<'a> {
    s: f64,
    lambda: f64,
    c: f64,
    solutions: Vec<SolutionJson<'a>>,
    degree_estimate: i32,
    starts_used: usize,
    singular_count: usize,
}

#[derive(Serialize)]
struct CriticalJson {
    s: f64,
    c: f64,
    lambda_star: f64,
    bracket: (f64, f64),
    bracket_width: f64,
    tol: f64,
    status: SearchStatus,
    tests: usize,
}

fn spectral_text(op: &FractionalOperator) -> String {
    let dec = op.decomposition();
    let mut t = String::new();
    let _ = writeln!(t, "eigenvalues:");
    let _ = writeln!(t, "  {}", vector_line(dec.eigenvalues(), 12));
    let _ = writeln!(t, "fractional eigenvalues (s = {}):", op.s());
    let _ = writeln!(t, "  {}", vector_line(&op.fractional_eigenvalues(), 12));
    let _ = writeln!(t, "eigenvectors (mu-orthonormal, one per line):");
    for phi in dec.eigenvectors() {
        let _ = writeln!(t, "  {}", vector_line(phi, 12));
    }
    let _ = writeln!(t, "L_s:");
    t.push_str(&matrix_table(op.matrix(), 12));
    let _ = writeln!(t, "W_s:");
    t.push_str(&matrix_table(op.kernel(), 12));
    t
}

fn single(command: &Command) -> Result<String, Failure> {
    match command {
        Command::Spectral { graph, s, json } => {
            let (g, _) = load(graph)?;
            let op = fractional_operator(&g, *s)?;
            Ok(if *json {
                let dec = op.decomposition();
                to_json(&SpectralJson {
                    eigenvalues: dec.eigenvalues(),
                    phi: dec.eigenvectors(),
                    ls: op.matrix().to_rows(),
                    ws: op.kernel().to_rows(),
                })
            } else {
                spectral_text(&op)
            })
        }
        Command::Solve {
            graph,
            s,
            lambda,
            c,
            starts,
            seed,
            json,
        } => {
            let (g, h) = load(graph)?;
            let op = fractional_operator(&g, *s)?;
            let inst = ProblemInstance::new(&g, &op, h, *lambda, *c)?;
            let set = multi_start_solve(&inst, *starts, *seed, &NewtonOptions::default())?;
            if *json {
                return Ok(to_json(&SolveJson {
                    s: *s,
                    lambda: *lambda,
                    c: *c,
                    solutions: set
                        .solutions
                        .iter()
                        .map(|r| SolutionJson {
                            u: r.u.values(),
                            residual_norm: r.residual_norm,
                            jacobian_sign: r.jacobian_sign,
                            iterations: r.iterations,
                        })
                        .collect(),
                    degree_estimate: set.degree_estimate,
                    starts_used: set.starts_used,
                    singular_count: set.singular_count,
                }));
            }
            let mut t = String::new();
            let _ = writeln!(
                t,
                "solutions: {} (from {} starts)",
                set.len(),
                set.starts_used
            );
            for (k, r) in set.solutions.iter().enumerate() {
                let _ = writeln!(
                    t,
                    "  [{}] u = {}  residual = {:.3e}  sign = {:+}",
                    k + 1,
                    vector_line(r.u.values(), 12),
                    r.residual_norm,
                    r.jacobian_sign
                );
            }
            if set.singular_count > 0 {
                let _ = writeln!(t, "singular solutions (sign 0): {}", set.singular_count);
            }
            let _ = writeln!(t, "degree estimate: {}", set.degree_estimate);
            Ok(t)
        }
        Command::Critical {
            graph,
            s,
            c,
            tol,
            seed,
            json,
        } => {
            let (g, h) = load(graph)?;
            let opts = CriticalOptions {
                tol: *tol,
                seed: *seed,
                ..CriticalOptions::default()
            };
            let r = find_lambda_star(&g, &h, *c, *s, &opts)?;
            let text = if *json {
                to_json(&CriticalJson {
                    s: *s,
                    c: *c,
                    lambda_star: r.lambda_star,
                    bracket: r.bracket,
                    bracket_width: r.bracket_width(),
                    tol: r.tol,
                    status: r.status,
                    tests: r.verdicts.len(),
                })
            } else {
                format!(
                    "lambda_star = {}\nbracket = [{}, {}]\nbracket_width = {}\nstatus = {}\n",
                    fmt_sig(r.lambda_star, 12),
                    fmt_sig(r.bracket.0, 12),
                    fmt_sig(r.bracket.1, 12),
                    fmt_sig(r.bracket_width(), 12),
                    r.status
                )
            };
            if r.status == SearchStatus::OracleUncertain {
                // Printed but flagged: the verdict sequence was not monotone.
                return Err(Failure::numeric(format!(
                    "oracle uncertain; {}",
                    text.trim_end()
                )));
            }
            Ok(text)
        }
        Command::Sweep { .. } | Command::Selftest { .. } => unreachable!("dispatched in execute"),
    }
}

fn run_sweep(command: &Command, threads: Option<usize>) -> Result<String, (String, Failure)> {
    let Command::Sweep {
        graph,
        s_list,
        c_min,
        c_max,
        c_step,
        tol,
        seed,
        out,
        svg,
    } = command
    else {
        unreachable!("called with a sweep command")
    };
    let bare = |f: Failure| (String::new(), f);
    let (g, h) = load(graph).map_err(bare)?;
    let grid = SweepGrid {
        c_min: *c_min,
        c_max: *c_max,
        c_step: *c_step,
        s_list: s_list.clone(),
    };
    let opts = CriticalOptions {
        tol: *tol,
        seed: *seed,
        ..CriticalOptions::default()
    };
    let result = sweep(&g, &h, &grid, &opts, threads).map_err(|e| bare(e.into()))?;
    emit_csv(&result, out).map_err(|e| bare(Error::from(e).into()))?;
    if let Some(path) = svg {
        emit_svg(&result, graph.source.plot_y_max(), path)
            .map_err(|e| bare(Error::from(e).into()))?;
    }
    let uncertain = result.uncertain_fraction();
    let text = format!(
        "rows: {}\nuncertain rows: {}\nwrote {}\n{}",
        result.rows.len(),
        result
            .rows
            .iter()
            .filter(|r| r.status != SearchStatus::Ok)
            .count(),
        out.display(),
        svg.as_ref()
            .map(|p| format!("wrote {}\n", p.display()))
            .unwrap_or_default()
    );
    if uncertain > MAX_UNCERTAIN_FRACTION {
        return Err((
            text,
            Failure::numeric(format!(
                "{:.2}% of sweep rows are oracle-uncertain",
                100.0 * uncertain
            )),
        ));
    }
    Ok(text)
}
