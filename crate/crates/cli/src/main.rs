//! `symeig`: smallest symplectic eigenvalues from the command line.
//!
//! Subcommands: `solve` (trace-minimization optimizer), `spectrum` and
//! `williamson` (direct oracle), `check` (classify a provided frame),
//! `generate` (plant a test problem to a file), `enumerate` (critical-value
//! multiset of a spectrum). Matrices travel as Matrix Market array files and
//! every command emits a JSON report, to `--out` or standard output.
//!
//! Exit codes: 0 success; 1 the solver ran but did not converge (the report
//! is still written); 2 input or validation error.
//!
//! `SYMEIG_LOG` ∈ {quiet, info, trace} (default quiet) controls logging on
//! standard error: `info` adds a one-line summary per command, `trace` adds
//! one line per accepted optimizer step.

mod config;
mod mtx;
mod report;

use std::path::{Path, PathBuf};
use std::process;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use symeig_core::analysis::{classify, enumerate_critical_values, min_value_formula};
use symeig_core::brockett::{build_weights, WeightMode, WeightSpec};
use symeig_core::linalg::sym_eig;
use symeig_core::optimizer::{solve, SolverConfig};
use symeig_core::symplectic::{plant_spd_with_basis, symplectic_spectrum, williamson};
use symeig_core::{tol, SpdMatrix, SymplecticFrame};

use config::FileConfig;
use report::{Json, Report};

#[derive(Parser)]
#[command(
    name = "symeig",
    version,
    about = "Smallest symplectic eigenvalues and eigenvector pairs of SPD matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimize tr(Ñ XᵀMX) over symplectic frames for the k smallest pairs.
    Solve(SolveArgs),
    /// Full symplectic spectrum via the Williamson oracle.
    Spectrum(SpectrumArgs),
    /// Williamson decomposition SᵀMS = diag(D, D) with SᵀJS = J.
    Williamson(WilliamsonArgs),
    /// Classify a frame as critical / saddle / global-min candidate.
    Check(CheckArgs),
    /// Plant an SPD matrix with a prescribed symplectic spectrum.
    Generate(GenerateArgs),
    /// Enumerate the critical-value multiset 2Σ d_{i_j}ν_j of a spectrum.
    Enumerate(EnumerateArgs),
}

/// Weight selection shared by the commands that need ν.
#[derive(Args)]
struct WeightArgs {
    /// Auto weights ν_j = 1 + j·eps (default eps 0.05).
    #[arg(long, conflicts_with = "weights")]
    eps: Option<f64>,
    /// Explicit comma-separated weights, positive and strictly increasing.
    #[arg(long, value_delimiter = ',')]
    weights: Option<Vec<f64>>,
}

impl WeightArgs {
    fn build(&self, k: usize, file: &FileConfig) -> Result<WeightSpec, String> {
        let mode = match &self.weights {
            Some(list) => WeightMode::Explicit(list.clone()),
            None => WeightMode::Auto {
                eps: self.eps.or(file.eps).unwrap_or(tol::AUTO_EPS_DEFAULT),
            },
        };
        build_weights(k, mode).map_err(|e| e.to_string())
    }
}

/// Solver knobs; unset values fall back to the config file, then defaults.
#[derive(Args)]
struct SolverOverrides {
    /// Convergence tolerance on the scaled KKT residual.
    #[arg(long)]
    tol: Option<f64>,
    /// Iteration cap.
    #[arg(long)]
    max_iter: Option<usize>,
    /// Step length used before any curvature information exists.
    #[arg(long)]
    step_init: Option<f64>,
    /// Seed for the random initial frame.
    #[arg(long)]
    seed: Option<u64>,
}

impl SolverOverrides {
    fn apply(&self, file: &FileConfig) -> SolverConfig {
        let mut cfg = SolverConfig::default();
        // Config file first, CLI flags on top: CLI > config > defaults.
        if let Some(v) = file.tol {
            cfg.tol = v;
        }
        if let Some(v) = file.max_iter {
            cfg.max_iter = v;
        }
        if let Some(v) = file.step_init {
            cfg.step_init = v;
        }
        if let Some(v) = file.seed {
            cfg.seed = v;
        }
        if let Some(v) = file.alternate_bb {
            cfg.alternate_bb = v;
        }
        if let Some(v) = file.nonmonotone_memory {
            cfg.nonmonotone_memory = v;
        }
        if let Some(v) = file.refeasibility_threshold {
            cfg.refeasibility_threshold = v;
        }
        if let Some(v) = self.tol {
            cfg.tol = v;
        }
        if let Some(v) = self.max_iter {
            cfg.max_iter = v;
        }
        if let Some(v) = self.step_init {
            cfg.step_init = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        cfg
    }
}

#[derive(Args)]
struct SolveArgs {
    /// SPD input matrix (Matrix Market array file, 2n×2n).
    #[arg(long)]
    matrix: PathBuf,
    /// Number of eigenvalue pairs to compute (1 ≤ k ≤ n).
    #[arg(long)]
    k: usize,
    #[command(flatten)]
    weights: WeightArgs,
    #[command(flatten)]
    solver: SolverOverrides,
    /// Flat `key = value` config file; CLI flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the converged frame (2n×2k, pair values nonincreasing across
    /// columns — the arrangement that minimizes the cost) as a Matrix
    /// Market file.
    #[arg(long)]
    frame_out: Option<PathBuf>,
    /// Report destination; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SpectrumArgs {
    /// SPD input matrix (Matrix Market array file, 2n×2n).
    #[arg(long)]
    matrix: PathBuf,
    /// Report destination; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct WilliamsonArgs {
    /// SPD input matrix (Matrix Market array file, 2n×2n).
    #[arg(long)]
    matrix: PathBuf,
    /// Write the symplectic diagonalizer S (2n×2n) as a Matrix Market file.
    #[arg(long)]
    s_out: Option<PathBuf>,
    /// Report destination; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    /// SPD input matrix (Matrix Market array file, 2n×2n).
    #[arg(long)]
    matrix: PathBuf,
    /// Frame to classify (Matrix Market array file, 2n×2k, `real general`).
    #[arg(long)]
    frame: PathBuf,
    #[command(flatten)]
    weights: WeightArgs,
    /// Criticality tolerance on the scaled KKT residual.
    #[arg(long)]
    tol: Option<f64>,
    /// Flat `key = value` config file; CLI flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Report destination; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    /// Half-order n (the matrix is 2n×2n).
    #[arg(long)]
    n: usize,
    /// Planted symplectic spectrum, comma-separated, ascending positive.
    #[arg(long, value_delimiter = ',')]
    spectrum: Vec<f64>,
    /// Seed for the random symplectic basis.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Magnitude of the random generators shaping the basis.
    #[arg(long, default_value_t = 0.5)]
    magnitude: f64,
    /// Destination for the planted matrix (`real symmetric` storage).
    #[arg(long)]
    matrix_out: PathBuf,
    /// Optional destination for the planted symplectic basis (2n×2n).
    #[arg(long)]
    basis_out: Option<PathBuf>,
    /// Report destination; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EnumerateArgs {
    /// SPD matrix whose oracle spectrum feeds the enumeration.
    #[arg(
        long,
        required_unless_present = "spectrum",
        conflicts_with = "spectrum"
    )]
    matrix: Option<PathBuf>,
    /// Spectrum given directly, comma-separated positive reals.
    #[arg(long, value_delimiter = ',')]
    spectrum: Option<Vec<f64>>,
    /// Selection size (1 ≤ k ≤ n).
    #[arg(long)]
    k: usize,
    #[command(flatten)]
    weights: WeightArgs,
    /// Flat `key = value` config file; CLI flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Report destination; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Verbosity on standard error, from `SYMEIG_LOG`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum LogLevel {
    Quiet,
    Info,
    Trace,
}

impl LogLevel {
    fn from_env() -> Result<LogLevel, String> {
        match std::env::var("SYMEIG_LOG") {
            Err(std::env::VarError::NotPresent) => Ok(LogLevel::Quiet),
            Err(e) => Err(format!("SYMEIG_LOG: {e}")),
            Ok(v) => match v.as_str() {
                "quiet" | "" => Ok(LogLevel::Quiet),
                "info" => Ok(LogLevel::Info),
                "trace" => Ok(LogLevel::Trace),
                other => Err(format!(
                    "SYMEIG_LOG must be one of quiet, info, trace; got {other:?}"
                )),
            },
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let level = match LogLevel::from_env() {
        Ok(level) => level,
        Err(msg) => {
            eprintln!("error: {msg}");
            process::exit(2);
        }
    };
    match run(cli.command, level) {
        Ok(code) => process::exit(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            process::exit(2);
        }
    }
}

fn run(command: Command, level: LogLevel) -> Result<i32, String> {
    match command {
        Command::Solve(args) => run_solve(args, level),
        Command::Spectrum(args) => run_spectrum(args, level),
        Command::Williamson(args) => run_williamson(args, level),
        Command::Check(args) => run_check(args, level),
        Command::Generate(args) => run_generate(args, level),
        Command::Enumerate(args) => run_enumerate(args, level),
    }
}

/// Loads an SPD matrix, rejecting odd dimensions, asymmetry, and (for the
/// commands whose algorithms would not notice on their own) indefiniteness.
fn load_spd(path: &Path, require_pd_check: bool) -> Result<SpdMatrix, String> {
    let m = mtx::read_matrix(path).map_err(|e| e.to_string())?;
    let spd = SpdMatrix::new(m).map_err(|e| format!("{}: {e}", path.display()))?;
    if require_pd_check {
        let eig = sym_eig(spd.matrix()).map_err(|e| format!("{}: {e}", path.display()))?;
        let lo = eig.values[0];
        if lo <= 0.0 {
            return Err(format!(
                "{}: matrix is not positive definite (smallest eigenvalue {lo:.3e})",
                path.display()
            ));
        }
    }
    Ok(spd)
}

fn load_file_config(path: Option<&Path>) -> Result<FileConfig, String> {
    match path {
        Some(p) => config::load(p),
        None => Ok(FileConfig::default()),
    }
}

fn elapsed_ms(t0: Instant) -> f64 {
    t0.elapsed().as_secs_f64() * 1e3
}

fn run_solve(args: SolveArgs, level: LogLevel) -> Result<i32, String> {
    let spd = load_spd(&args.matrix, true)?;
    let file = load_file_config(args.config.as_deref())?;
    let cfg = args.solver.apply(&file);
    let w = args.weights.build(args.k, &file)?;

    let t0 = Instant::now();
    let result = solve(&spd, args.k, &w, &cfg).map_err(|e| e.to_string())?;
    let elapsed = elapsed_ms(t0);

    if level >= LogLevel::Trace {
        for (i, (f, kkt)) in result.trace.iter().enumerate() {
            eprintln!("trace: step={i} f={f:.16e} kkt={kkt:.3e}");
        }
    }
    if level >= LogLevel::Info {
        eprintln!(
            "info: solve n={} k={} converged={} iterations={} escapes={} kkt={:.3e} f={:.9e}",
            spd.n(),
            args.k,
            result.converged,
            result.iterations,
            result.escapes,
            result.kkt_residual,
            result.f_value
        );
    }

    // `values` (and the frame matching them) sort ascending, the
    // eigendecomposition convention; the minimizer itself pairs values
    // nonincreasing against the ascending weights. Reversing the pair order
    // recovers that critical arrangement, which is what gets classified and
    // written, so `check` on the emitted frame sees the critical point.
    let xm = result.frame.matrix();
    let k = args.k;
    let mut desc = symeig_core::Matrix::zeros(xm.rows(), xm.cols());
    for j in 0..k {
        desc.set_col(j, &xm.col(k - 1 - j));
        desc.set_col(k + j, &xm.col(2 * k - 1 - j));
    }
    let critical_frame = SymplecticFrame::new(desc).map_err(|e| e.to_string())?;
    let classification = classify(&spd, &critical_frame, &w, cfg.tol)
        .map_err(|e| e.to_string())?
        .classification
        .to_string();

    if let Some(frame_path) = &args.frame_out {
        mtx::write_general(frame_path, critical_frame.matrix()).map_err(|e| e.to_string())?;
    }

    let mut rep = Report::new("solve");
    rep.n = Some(spd.n() as u64);
    rep.k = Some(args.k as u64);
    rep.weights = Some(w.nu().to_vec());
    rep.values = Some(result.values.clone());
    rep.kkt_residual = Some(result.kkt_residual);
    rep.offdiag_residual = Some(result.offdiag_residual);
    rep.feasibility_residual = Some(result.frame.residual());
    rep.classification = Some(classification);
    rep.iterations = Some(result.iterations as u64);
    rep.f_value = Some(result.f_value);
    rep.elapsed_ms = elapsed;
    rep.seed = Some(cfg.seed);
    rep.extras = vec![
        ("converged", Json::Bool(result.converged)),
        ("stagnated", Json::Bool(result.stagnated)),
        ("escapes", Json::UInt(result.escapes as u64)),
        ("pair_residuals", Json::floats(&result.pair_residuals)),
    ];
    rep.write(args.out.as_deref())?;

    Ok(if result.converged { 0 } else { 1 })
}

fn run_spectrum(args: SpectrumArgs, level: LogLevel) -> Result<i32, String> {
    let spd = load_spd(&args.matrix, false)?;
    let t0 = Instant::now();
    let spec = symplectic_spectrum(&spd).map_err(|e| e.to_string())?;
    let elapsed = elapsed_ms(t0);

    if level >= LogLevel::Info {
        eprintln!(
            "info: spectrum n={} pairing_residual={:.3e}",
            spd.n(),
            spec.pairing_residual
        );
    }

    let mut rep = Report::new("spectrum");
    rep.n = Some(spd.n() as u64);
    rep.values = Some(spec.values.clone());
    rep.elapsed_ms = elapsed;
    rep.extras = vec![("pairing_residual", Json::Float(spec.pairing_residual))];
    rep.write(args.out.as_deref())?;
    Ok(0)
}

fn run_williamson(args: WilliamsonArgs, level: LogLevel) -> Result<i32, String> {
    let spd = load_spd(&args.matrix, false)?;
    let t0 = Instant::now();
    let dec = williamson(&spd).map_err(|e| e.to_string())?;
    let elapsed = elapsed_ms(t0);

    if level >= LogLevel::Info {
        eprintln!(
            "info: williamson n={} symplectic_residual={:.3e} diag_residual={:.3e}",
            spd.n(),
            dec.symplectic_residual,
            dec.diag_residual
        );
    }

    if let Some(s_path) = &args.s_out {
        mtx::write_general(s_path, &dec.s).map_err(|e| e.to_string())?;
    }

    let mut rep = Report::new("williamson");
    rep.n = Some(spd.n() as u64);
    rep.values = Some(dec.d.clone());
    rep.elapsed_ms = elapsed;
    rep.extras = vec![
        ("symplectic_residual", Json::Float(dec.symplectic_residual)),
        ("diag_residual", Json::Float(dec.diag_residual)),
        ("pairing_residual", Json::Float(dec.pairing_residual)),
    ];
    rep.write(args.out.as_deref())?;
    Ok(0)
}

fn run_check(args: CheckArgs, level: LogLevel) -> Result<i32, String> {
    let spd = load_spd(&args.matrix, true)?;
    let xm = mtx::read_matrix(&args.frame).map_err(|e| e.to_string())?;
    let frame_display = args.frame.display().to_string();
    if xm.rows() != spd.dim() {
        return Err(format!(
            "{frame_display}: frame has {rows} rows but the matrix is {dim}×{dim}",
            rows = xm.rows(),
            dim = spd.dim(),
        ));
    }
    if xm.cols() == 0 || xm.cols() % 2 != 0 {
        return Err(format!(
            "{frame_display}: frame must have 2k columns for some k ≥ 1, got {}",
            xm.cols()
        ));
    }
    let k = xm.cols() / 2;
    if k > spd.n() {
        return Err(format!(
            "{frame_display}: frame selects k = {k} pairs but the matrix has only n = {}",
            spd.n()
        ));
    }
    let x = SymplecticFrame::new(xm).map_err(|e| format!("{frame_display}: {e}"))?;

    let file = load_file_config(args.config.as_deref())?;
    let w = args.weights.build(k, &file)?;
    let tolerance = args.tol.or(file.tol).unwrap_or(tol::KKT_DEFAULT_TOL);

    let t0 = Instant::now();
    let cp = classify(&spd, &x, &w, tolerance).map_err(|e| e.to_string())?;
    let elapsed = elapsed_ms(t0);

    if level >= LogLevel::Info {
        eprintln!(
            "info: check classification={} kkt={:.3e} critical={}",
            cp.classification, cp.kkt_residual, cp.is_critical
        );
    }

    let mut sorted_values = cp.pair_values.clone();
    sorted_values.sort_by(f64::total_cmp);

    let certificate = match &cp.certificate {
        Some(c) => Json::Object(vec![
            ("alpha", Json::UInt(c.alpha as u64)),
            ("beta", Json::UInt(c.beta as u64)),
            ("hessian_value", Json::Float(c.hessian_value)),
        ]),
        None => Json::Null,
    };

    let mut rep = Report::new("check");
    rep.n = Some(spd.n() as u64);
    rep.k = Some(k as u64);
    rep.weights = Some(w.nu().to_vec());
    rep.values = Some(sorted_values);
    rep.kkt_residual = Some(cp.kkt_residual);
    rep.feasibility_residual = Some(x.residual());
    rep.classification = Some(cp.classification.to_string());
    rep.f_value = Some(cp.f_value);
    rep.elapsed_ms = elapsed;
    rep.extras = vec![
        ("is_critical", Json::Bool(cp.is_critical)),
        ("order_nonincreasing", Json::Bool(cp.order_nonincreasing)),
        ("pair_values", Json::floats(&cp.pair_values)),
        ("certificate", certificate),
    ];
    rep.write(args.out.as_deref())?;
    Ok(0)
}

fn run_generate(args: GenerateArgs, level: LogLevel) -> Result<i32, String> {
    if args.spectrum.len() != args.n {
        return Err(format!(
            "--spectrum lists {} values but --n is {}",
            args.spectrum.len(),
            args.n
        ));
    }
    // Ascending input keeps the generate → spectrum round trip exact: the
    // oracle reports the spectrum sorted.
    for pair in args.spectrum.windows(2) {
        if pair[1] < pair[0] {
            return Err(format!(
                "--spectrum must ascend, got {} after {}",
                pair[1], pair[0]
            ));
        }
    }

    let t0 = Instant::now();
    let (m, s) = plant_spd_with_basis(args.n, &args.spectrum, args.seed, args.magnitude)
        .map_err(|e| e.to_string())?;
    let elapsed = elapsed_ms(t0);

    mtx::write_symmetric(&args.matrix_out, m.matrix()).map_err(|e| e.to_string())?;
    if let Some(basis_path) = &args.basis_out {
        mtx::write_general(basis_path, &s).map_err(|e| e.to_string())?;
    }

    if level >= LogLevel::Info {
        eprintln!(
            "info: generate n={} seed={} magnitude={} -> {}",
            args.n,
            args.seed,
            args.magnitude,
            args.matrix_out.display()
        );
    }

    let mut rep = Report::new("generate");
    rep.n = Some(args.n as u64);
    rep.values = Some(args.spectrum.clone());
    rep.elapsed_ms = elapsed;
    rep.seed = Some(args.seed);
    rep.extras = vec![("magnitude", Json::Float(args.magnitude))];
    rep.write(args.out.as_deref())?;
    Ok(0)
}

fn run_enumerate(args: EnumerateArgs, level: LogLevel) -> Result<i32, String> {
    let file = load_file_config(args.config.as_deref())?;
    let t0 = Instant::now();
    let d_all: Vec<f64> = match (&args.matrix, &args.spectrum) {
        (Some(path), None) => {
            let spd = load_spd(path, false)?;
            symplectic_spectrum(&spd).map_err(|e| e.to_string())?.values
        }
        (None, Some(list)) => list.clone(),
        // clap enforces exactly one of the two.
        _ => unreachable!("clap guarantees --matrix xor --spectrum"),
    };
    let n = d_all.len();
    let w = args.weights.build(args.k, &file)?;
    let values = enumerate_critical_values(&d_all, &w, args.k).map_err(|e| e.to_string())?;

    let mut ascending = d_all.clone();
    ascending.sort_by(f64::total_cmp);
    let formula = min_value_formula(&ascending[..args.k], &w).map_err(|e| e.to_string())?;
    let elapsed = elapsed_ms(t0);

    if level >= LogLevel::Info {
        eprintln!(
            "info: enumerate n={n} k={} count={} min={:.9e}",
            args.k,
            values.len(),
            values[0]
        );
    }

    let mut rep = Report::new("enumerate");
    rep.n = Some(n as u64);
    rep.k = Some(args.k as u64);
    rep.weights = Some(w.nu().to_vec());
    rep.f_value = Some(values[0]);
    rep.extras = vec![
        ("min_value", Json::Float(values[0])),
        ("formula_value", Json::Float(formula)),
    ];
    rep.values = Some(values);
    rep.elapsed_ms = elapsed;
    rep.write(args.out.as_deref())?;
    Ok(0)
}
