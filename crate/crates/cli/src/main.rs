//! `symdeg`: degree-of-symmetry sweeps, curves and self-checks.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 numerical
//! non-convergence, 3 a verification suite failed.

mod config;
mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use symdeg::bcs::temperature_curve;
use symdeg::bec::{
    dos_ground_bec_from_order, dos_ground_bec_large_n, dos_thermal_bec, dos_thermal_bec_from_order, order_parameter_finite_t,
    BecSpec,
};
use symdeg::operator::{thermal_state, Operator, State, MAX_SITES};
use symdeg::sampling::{random_hermitian, task_rng};
use symdeg::spin::{build_hamiltonian, dos_ground_closed, dos_h_closed, dos_thermal_closed, ground_state, ManySpinSpec};
use symdeg::symmetry::{dos_hamiltonian, dos_state, Detail, DosResult, GroupSpec, Method, DEFAULT_NODES};
use symdeg::verify::{self, Suite, VerifyConfig, DEFAULT_JW_MODES, DEFAULT_SEED};

use config::{merge, merge_list, require, ConfigFile};
use table::{Format, Table};

#[derive(Debug)]
pub struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: 1, message: message.into() }
    }

    pub fn io(e: impl std::fmt::Display) -> Self {
        Self::usage(format!("i/o error: {e}"))
    }

    fn verification(message: impl Into<String>) -> Self {
        Self { code: 3, message: message.into() }
    }
}

impl From<symdeg::Error> for CliError {
    fn from(e: symdeg::Error) -> Self {
        let code = if e.is_convergence() { 2 } else { 1 };
        Self { code, message: e.to_string() }
    }
}

#[derive(Parser, Debug)]
#[command(name = "symdeg", version, about = "Degree of symmetry of many-spin, BCS and condensate models")]
struct Cli {
    /// Run file of `key = value` lines; command-line flags win
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// DoS of the spin-register Hamiltonian and its ground or thermal state
    Dos(DosArgs),
    /// Gap and DoS against T/T_c, one CSV per g(0)k_B T_c
    Bcs(BcsArgs),
    /// Condensate order parameter and thermal DoS over a β grid
    Bec(BecArgs),
    /// Run the self-check suites
    Verify(VerifyArgs),
    /// Time the three group-average methods on random operators
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct DosArgs {
    /// Number of spins
    #[arg(long)]
    n: Option<usize>,
    /// ε, coefficient of σ_z
    #[arg(long)]
    eps: Option<f64>,
    /// λ, coefficient of σ_x
    #[arg(long)]
    lambda: Option<f64>,
    /// μ, coefficient of σ_y
    #[arg(long)]
    mu: Option<f64>,
    /// Inverse temperature; the ground state is used when absent
    #[arg(long)]
    beta: Option<f64>,
    /// Comma-separated: pinching, quadrature, monte_carlo, closed
    #[arg(long, value_delimiter = ',')]
    method: Vec<String>,
    /// Gauss-Legendre nodes per angle
    #[arg(long)]
    nodes: Option<usize>,
    /// Monte Carlo samples
    #[arg(long)]
    samples: Option<usize>,
    /// Seed, required for monte_carlo
    #[arg(long)]
    seed: Option<u64>,
    /// Operator file: one row per line, entries like `1`, `0.5-2i`
    #[arg(long, value_name = "FILE")]
    matrix: Option<PathBuf>,
    /// Treat --matrix as a density matrix instead of a Hamiltonian
    #[arg(long)]
    state: bool,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write here instead of stdout
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
}

const DOS_KEYS: &[&str] =
    &["n", "eps", "lambda", "mu", "beta", "method", "nodes", "samples", "seed", "matrix", "state", "format", "output"];

#[derive(Args, Debug)]
struct BcsArgs {
    /// g(0)·k_B·T_c; repeat or comma-separate for several curves
    #[arg(long, value_delimiter = ',')]
    g0ktc: Vec<f64>,
    /// Temperature points on [0, 1.2]·T_c
    #[arg(long)]
    points: Option<usize>,
    #[arg(long, value_name = "DIR")]
    out_dir: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

const BCS_KEYS: &[&str] = &["g0ktc", "points", "out-dir", "format"];

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct BecArgs {
    /// Number of particles
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    /// start:stop:count, endpoints included
    #[arg(long, value_name = "A:B:COUNT")]
    beta_grid: Option<String>,
    /// Ground-state DoS for this order parameter instead of a β sweep
    #[arg(long)]
    a0: Option<f64>,
    /// With --a0: the N → ∞ form
    #[arg(long)]
    asymptotic: bool,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
}

const BEC_KEYS: &[&str] = &["n", "eps", "lambda", "beta-grid", "a0", "asymptotic", "format", "output"];

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Suites to run (default: all): oracle-triangle, closed-forms, log-integral,
    /// k-integral, bcs, jw, dicke, displaced-oscillator, bec
    #[arg(long, value_delimiter = ',')]
    suite: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Modes for the Jordan-Wigner suite (1 to 3)
    #[arg(long)]
    modes: Option<usize>,
    /// Also write the report here
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
}

const VERIFY_KEYS: &[&str] = &["suite", "seed", "modes", "output"];

#[derive(Args, Debug)]
struct BenchArgs {
    /// Largest number of sites
    #[arg(long)]
    n: Option<usize>,
    /// Gauss-Legendre nodes per angle
    #[arg(long)]
    nodes: Option<usize>,
    /// Monte Carlo samples
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

const BENCH_KEYS: &[&str] = &["n", "nodes", "samples", "seed"];

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            if e.code == 1 {
                eprintln!("\nFor more information, try '--help'.");
            }
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    match cli.command {
        Command::Dos(a) => {
            cfg.check_keys("dos", DOS_KEYS)?;
            cmd_dos(a, &cfg)
        }
        Command::Bcs(a) => {
            cfg.check_keys("bcs", BCS_KEYS)?;
            cmd_bcs(a, &cfg)
        }
        Command::Bec(a) => {
            cfg.check_keys("bec", BEC_KEYS)?;
            cmd_bec(a, &cfg)
        }
        Command::Verify(a) => {
            cfg.check_keys("verify", VERIFY_KEYS)?;
            cmd_verify(a, &cfg)
        }
        Command::Bench(a) => {
            cfg.check_keys("bench", BENCH_KEYS)?;
            cmd_bench(a, &cfg)
        }
    }
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| CliError::io(format!("{}: {e}", p.display())))?)),
        None => Box::new(io::stdout().lock()),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum MethodChoice {
    Pinching,
    Quadrature,
    MonteCarlo,
    Closed,
}

fn parse_method(s: &str) -> Result<MethodChoice, CliError> {
    match s.trim() {
        "pinching" => Ok(MethodChoice::Pinching),
        "quadrature" => Ok(MethodChoice::Quadrature),
        "monte_carlo" | "monte-carlo" | "mc" => Ok(MethodChoice::MonteCarlo),
        "closed" | "closed_form" => Ok(MethodChoice::Closed),
        other => Err(CliError::usage(format!("unknown method '{other}'"))),
    }
}

fn detail_text(r: &DosResult) -> String {
    match r.detail {
        Detail::None => String::new(),
        Detail::Nodes(n) => format!("nodes={n}"),
        Detail::Samples { count, seed } => format!("samples={count};seed={seed}"),
    }
}

fn parse_matrix(path: &Path) -> Result<Operator, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    let rows: Vec<Vec<Complex64>> = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.split_whitespace()
                .map(|t| t.parse::<Complex64>().map_err(|e| CliError::usage(format!("matrix entry '{t}': {e}"))))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let d = rows.len();
    if d == 0 || rows.iter().any(|r| r.len() != d) {
        return Err(CliError::usage("matrix file must hold a non-empty square matrix"));
    }
    let mat = nalgebra::DMatrix::from_fn(d, d, |r, c| rows[r][c]);
    Ok(Operator::from_matrix(mat)?)
}

enum Subject {
    Spins { spec: ManySpinSpec, beta: Option<f64> },
    Matrix { op: Operator, n: usize, as_state: bool },
}

fn cmd_dos(a: DosArgs, cfg: &ConfigFile) -> Result<(), CliError> {
    let methods: Vec<MethodChoice> = {
        let names = merge_list(a.method, cfg, "method")?;
        if names.is_empty() {
            vec![MethodChoice::Pinching, MethodChoice::Closed]
        } else {
            names.iter().map(|s| parse_method(s)).collect::<Result<_, _>>()?
        }
    };
    let nodes = merge(a.nodes, cfg, "nodes")?.unwrap_or(DEFAULT_NODES);
    let samples = merge(a.samples, cfg, "samples")?.unwrap_or(100_000);
    let seed = merge(a.seed, cfg, "seed")?;
    if methods.contains(&MethodChoice::MonteCarlo) && seed.is_none() {
        return Err(CliError::usage("monte_carlo needs --seed"));
    }
    let format = merge(a.format, cfg, "format")?.unwrap_or(Format::Csv);
    let output = merge(a.output, cfg, "output")?;
    let beta = merge(a.beta, cfg, "beta")?;
    let as_state = a.state || cfg.flag("state")?;

    let subject = match merge(a.matrix, cfg, "matrix")? {
        Some(path) => {
            let op = parse_matrix(&path)?;
            let d = op.dim();
            if !d.is_power_of_two() || d < 2 {
                return Err(CliError::usage(format!("matrix dimension {d} is not 2^N")));
            }
            let n = d.trailing_zeros() as usize;
            if let Some(given) = merge(a.n, cfg, "n")? {
                if given != n {
                    return Err(CliError::usage(format!("--n {given} does not match a {d}x{d} matrix")));
                }
            }
            if methods.contains(&MethodChoice::Closed) {
                return Err(CliError::usage("closed forms need --n/--eps/--lambda, not --matrix"));
            }
            Subject::Matrix { op, n, as_state }
        }
        None => {
            let n = require(merge(a.n, cfg, "n")?, "n")?;
            let eps = require(merge(a.eps, cfg, "eps")?, "eps")?;
            let lambda = require(merge(a.lambda, cfg, "lambda")?, "lambda")?;
            let mu = merge(a.mu, cfg, "mu")?.unwrap_or(0.0);
            Subject::Spins { spec: ManySpinSpec::new(n, eps, lambda, mu)?, beta }
        }
    };

    let mut table = Table::new(&["target", "method", "value", "error_estimate", "detail"]);
    let numeric = |m: MethodChoice| match m {
        MethodChoice::Pinching => Method::Pinching,
        MethodChoice::Quadrature => Method::Quadrature { nodes_per_angle: nodes },
        MethodChoice::MonteCarlo => Method::MonteCarlo { samples, seed: seed.unwrap_or(0) },
        MethodChoice::Closed => unreachable!(),
    };
    let mut push = |target: &str, r: DosResult| {
        table.push(vec![target.into(), r.method.name().into(), r.value.into(), r.error_estimate.into(), detail_text(&r).into()]);
    };

    match subject {
        Subject::Matrix { op, n, as_state } => {
            let group = GroupSpec::new(n)?;
            if as_state {
                let rho = State::mixed(op)?;
                for &m in &methods {
                    push("state", dos_state(&rho, group, numeric(m))?);
                }
            } else {
                for &m in &methods {
                    push("hamiltonian", dos_hamiltonian(&op, group, numeric(m))?);
                }
            }
        }
        Subject::Spins { spec, beta } => {
            let needs_matrix = methods.iter().any(|&m| m != MethodChoice::Closed);
            let (h, rho) = if needs_matrix {
                if spec.n > MAX_SITES {
                    return Err(CliError::usage(format!("matrix methods support at most {MAX_SITES} spins; use --method closed")));
                }
                let h = build_hamiltonian(&spec)?;
                let rho = match beta {
                    Some(b) => thermal_state(&h, b)?,
                    None => ground_state(&spec)?,
                };
                (Some(h), Some(rho))
            } else {
                (None, None)
            };
            let state_name = if beta.is_some() { "thermal" } else { "ground" };
            for &m in &methods {
                let r = match m {
                    MethodChoice::Closed => DosResult::closed_form(dos_h_closed(&spec)?),
                    _ => dos_hamiltonian(h.as_ref().unwrap(), GroupSpec::new(spec.n)?, numeric(m))?,
                };
                push("hamiltonian", r);
            }
            for &m in &methods {
                let r = match m {
                    MethodChoice::Closed => DosResult::closed_form(match beta {
                        Some(b) => dos_thermal_closed(&spec, b)?,
                        None => dos_ground_closed(&spec)?,
                    }),
                    _ => dos_state(rho.as_ref().unwrap(), GroupSpec::new(spec.n)?, numeric(m))?,
                };
                push(state_name, r);
            }
        }
    }
    table.write(format, open_output(output.as_deref())?)
}

fn g0ktc_label(g: f64) -> String {
    format!("{g}")
}

fn cmd_bcs(a: BcsArgs, cfg: &ConfigFile) -> Result<(), CliError> {
    let mut values = merge_list(a.g0ktc, cfg, "g0ktc")?;
    if values.is_empty() {
        values = vec![0.4, 0.5];
    }
    values.sort_by(f64::total_cmp);
    values.dedup();
    let points = merge(a.points, cfg, "points")?.unwrap_or(50);
    if points == 0 {
        return Err(CliError::usage("--points must be at least 1"));
    }
    let out_dir = merge(a.out_dir, cfg, "out-dir")?.unwrap_or_else(|| PathBuf::from("."));
    let format = merge(a.format, cfg, "format")?.unwrap_or(Format::Csv);
    std::fs::create_dir_all(&out_dir).map_err(|e| CliError::io(format!("{}: {e}", out_dir.display())))?;
    let ext = match format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    for g in values {
        let rows = temperature_curve(g, points)?;
        let mut table = Table::new(&["t_over_tc", "delta_over_delta0", "dos"]);
        for r in rows {
            table.push(vec![r.t_over_tc.into(), r.delta_over_delta0.into(), r.dos.into()]);
        }
        let path = out_dir.join(format!("bcs_g0ktc_{}.{ext}", g0ktc_label(g)));
        table.write(format, open_output(Some(&path))?)?;
        println!("{}", path.display());
    }
    Ok(())
}

fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || CliError::usage(format!("grid '{s}' must look like start:stop:count"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if count == 0 || !lo.is_finite() || !hi.is_finite() {
        return Err(bad());
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect())
}

fn cmd_bec(a: BecArgs, cfg: &ConfigFile) -> Result<(), CliError> {
    let format = merge(a.format, cfg, "format")?.unwrap_or(Format::Csv);
    let output = merge(a.output, cfg, "output")?;
    let asymptotic = a.asymptotic || cfg.flag("asymptotic")?;
    let n = merge(a.n, cfg, "n")?;

    if let Some(a0) = merge(a.a0, cfg, "a0")? {
        let mut table = Table::new(&["a0", "dos"]);
        let dos = if asymptotic {
            dos_ground_bec_large_n(a0)
        } else {
            dos_ground_bec_from_order(a0, require(n, "n")?)?
        };
        table.push(vec![a0.into(), dos.into()]);
        return table.write(format, open_output(output.as_deref())?);
    }
    if asymptotic {
        return Err(CliError::usage("--asymptotic needs --a0"));
    }

    let spec = BecSpec::new(
        require(n, "n")?,
        require(merge(a.eps, cfg, "eps")?, "eps")?,
        require(merge(a.lambda, cfg, "lambda")?, "lambda")?,
        64,
    )?;
    let grid = parse_grid(&merge(a.beta_grid, cfg, "beta-grid")?.unwrap_or_else(|| "0:5:50".to_string()))?;
    let mut table = Table::new(&["beta", "order_parameter", "dos_field", "dos_order"]);
    for beta in grid {
        table.push(vec![
            beta.into(),
            order_parameter_finite_t(&spec, beta)?.into(),
            dos_thermal_bec(&spec, beta)?.into(),
            dos_thermal_bec_from_order(&spec, beta)?.into(),
        ]);
    }
    table.write(format, open_output(output.as_deref())?)
}

fn cmd_verify(a: VerifyArgs, cfg: &ConfigFile) -> Result<(), CliError> {
    let names = merge_list(a.suite, cfg, "suite")?;
    let suites = if names.is_empty() {
        Suite::ALL.to_vec()
    } else {
        names.iter().map(|s| Suite::parse(s.trim())).collect::<Result<Vec<_>, _>>()?
    };
    let jw_modes = merge(a.modes, cfg, "modes")?.unwrap_or(DEFAULT_JW_MODES);
    let vcfg = VerifyConfig { seed: merge(a.seed, cfg, "seed")?.unwrap_or(DEFAULT_SEED), jw_modes, suites };
    let outcomes = verify::run(&vcfg)?;
    let text = verify::report(&vcfg, &outcomes);
    print!("{text}");
    if let Some(path) = merge::<PathBuf>(a.output, cfg, "output")? {
        std::fs::write(&path, &text).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    }
    let failed: Vec<&str> = outcomes.iter().filter(|o| !o.passed()).map(|o| o.suite.name()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::verification(format!("failed suites: {}", failed.join(", "))))
    }
}

fn cmd_bench(a: BenchArgs, cfg: &ConfigFile) -> Result<(), CliError> {
    let n_max = merge(a.n, cfg, "n")?.unwrap_or(4);
    let nodes = merge(a.nodes, cfg, "nodes")?.unwrap_or(16);
    let samples = merge(a.samples, cfg, "samples")?.unwrap_or(100_000);
    let seed = merge(a.seed, cfg, "seed")?.unwrap_or(DEFAULT_SEED);
    if n_max == 0 || n_max > MAX_SITES {
        return Err(CliError::usage(format!("--n must be in 1..={MAX_SITES}")));
    }
    let mut table = Table::new(&["n", "method", "value", "seconds"]);
    for n in 1..=n_max {
        let h = random_hermitian(&mut task_rng(seed, n as u64), 1 << n)?;
        let group = GroupSpec::new(n)?;
        let methods = [
            Method::Pinching,
            Method::Quadrature { nodes_per_angle: nodes },
            Method::MonteCarlo { samples, seed },
        ];
        for m in methods {
            let start = Instant::now();
            match dos_hamiltonian(&h, group, m) {
                Ok(r) => {
                    let secs = start.elapsed().as_secs_f64();
                    table.push(vec![n.into(), r.method.name().into(), r.value.into(), secs.into()]);
                }
                // the tensor grid outgrows its budget first
                Err(symdeg::Error::GridBudget { .. }) => {}
                Err(e) => return Err(e.into()),
            }
        }
    }
    table.write(Format::Csv, io::stdout().lock())
}
