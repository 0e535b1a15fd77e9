use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spectral_core::io::{self, ConfigError, ProblemConfig};
use spectral_core::{classify_regime, solve, BlockVector, Method, SolveError, SolverOptions, SpectralProblem};

const EXIT_OK: u8 = 0;
const EXIT_IO: u8 = 1;
const EXIT_MAX_ITER: u8 = 2;
const EXIT_STRUCTURAL: u8 = 3;
const EXIT_BREAKDOWN: u8 = 4;

#[derive(Parser)]
#[command(name = "spectral", version, about = "Positive (σ,p)-eigenpairs of nonnegative tensors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the positive eigenpair
    Solve(SolveArgs),
    /// Report structural assumptions and the regime
    Check(ProblemArgs),
    /// Run the built-in benchmark suite with both methods
    Bench(BenchArgs),
    /// Write a seeded random sparse tensor
    Random(RandomArgs),
}

#[derive(Args)]
struct ProblemArgs {
    /// tensor file in the text format
    #[arg(long)]
    tensor: PathBuf,
    /// blocks of one-based modes, e.g. "1;2,3" (default: one block)
    #[arg(long)]
    partition: Option<String>,
    /// exponents per block, e.g. "2,4" or "3/2,5"; one value is shared by all blocks
    #[arg(long)]
    p: String,
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, default_value = "lsnnm")]
    method: Method,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, default_value_t = 500)]
    max_iter: usize,
    #[arg(long, default_value_t = 1e-2)]
    armijo_c: f64,
    /// backtracking factor of the line search
    #[arg(long, default_value_t = 0.5)]
    rho: f64,
}

impl SolverArgs {
    fn options(&self) -> SolverOptions {
        SolverOptions {
            tol: self.tol,
            max_iter: self.max_iter,
            armijo_c: self.armijo_c,
            backtrack_rho: self.rho,
            method: self.method,
            ..SolverOptions::default()
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[command(flatten)]
    solver: SolverArgs,
    /// write the result JSON here instead of stdout
    #[arg(long)]
    json: Option<PathBuf>,
    /// write the iteration trace as CSV
    #[arg(long)]
    trace: Option<PathBuf>,
    /// start from a seeded random positive point instead of all ones
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    solver: SolverArgs,
    /// also write all rows as JSON
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct RandomArgs {
    /// comma-separated dimensions, e.g. "3,3,3"
    #[arg(long)]
    dims: String,
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// output file (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn new(code: u8, msg: impl Into<String>) -> Self {
        Self { code, msg: msg.into() }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        let code = match e {
            ConfigError::Problem(_) => EXIT_STRUCTURAL,
            _ => EXIT_IO,
        };
        Failure::new(code, e.to_string())
    }
}

fn write_out(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", path.display())))
}

fn config_of(args: &ProblemArgs, solver: Option<&SolverArgs>, seed: Option<u64>) -> Result<ProblemConfig, Failure> {
    let defaults = SolverOptions::default();
    Ok(ProblemConfig {
        tensor_path: args.tensor.clone(),
        partition: args.partition.as_deref().map(io::parse_partition).transpose()?,
        p: io::parse_exponents(&args.p)?,
        method: solver.map_or(defaults.method, |s| s.method),
        tol: solver.map_or(defaults.tol, |s| s.tol),
        max_iter: solver.map_or(defaults.max_iter, |s| s.max_iter),
        armijo_c: solver.map_or(defaults.armijo_c, |s| s.armijo_c),
        backtrack_rho: solver.map_or(defaults.backtrack_rho, |s| s.rho),
        seed,
    })
}

fn random_start(prob: &SpectralProblem, seed: u64) -> BlockVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = (0..prob.dim()).map(|_| rng.gen_range(0.5..1.5)).collect();
    BlockVector::from_flat(prob.partition(), data).expect("length matches the partition")
}

fn cmd_solve(args: &SolveArgs) -> Result<u8, Failure> {
    let config = config_of(&args.problem, Some(&args.solver), args.seed)?;
    let prob = config.load()?;
    let report = classify_regime(&prob);
    if !report.strict_nonneg {
        return Err(Failure::new(
            EXIT_STRUCTURAL,
            "structural rejection: the tensor is not σ-strictly nonnegative, so no positive eigenpair exists",
        ));
    }
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }

    let x0 = config.seed.map(|s| random_start(&prob, s));
    let opts = config.solver_options();
    let (result, code) = match solve(&prob, x0.as_ref(), &opts) {
        Ok(r) => (r, EXIT_OK),
        Err(e) => {
            let code = match e {
                SolveError::MaxIterExceeded(_) => EXIT_MAX_ITER,
                SolveError::SingularNewtonSystem { .. } | SolveError::LineSearchFailed { .. } => EXIT_BREAKDOWN,
                SolveError::InvalidStart(_) | SolveError::InvalidOptions(_) => EXIT_IO,
                SolveError::Map(_) => EXIT_BREAKDOWN,
            };
            eprintln!("error: {e}");
            match e.partial() {
                Some(r) => (r.clone(), code),
                None => return Err(Failure::new(code, e.to_string())),
            }
        }
    };

    let json = serde_json::to_string_pretty(&io::result_json(&prob, &result)).expect("result serializes");
    match &args.json {
        Some(path) => {
            write_out(path, &json)?;
            println!(
                "lambda* = {:.15} res = {:e} iterations = {} converged = {}",
                result.lambda_star, result.res, result.iterations, result.converged
            );
        }
        None => println!("{json}"),
    }
    if let Some(path) = &args.trace {
        let file = File::create(path).map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", path.display())))?;
        let mut w = BufWriter::new(file);
        io::write_trace_csv(&mut w, &result.trace)
            .and_then(|_| w.flush())
            .map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", path.display())))?;
    }
    Ok(code)
}

fn cmd_check(args: &ProblemArgs) -> Result<u8, Failure> {
    let prob = config_of(args, None, None)?.load()?;
    let report = classify_regime(&prob);
    println!("{}", serde_json::to_string_pretty(&io::check_json(&prob, &report)).expect("report serializes"));
    Ok(EXIT_OK)
}

fn cmd_bench(args: &BenchArgs) -> Result<u8, Failure> {
    let opts = args.solver.options();
    opts.validate().map_err(|e| Failure::new(EXIT_IO, e.to_string()))?;
    let rows = io::run_bench(&opts);
    print!("{}", io::format_table(&rows));
    if let Some(path) = &args.json {
        let json = serde_json::json!({ "schema_version": io::SCHEMA_VERSION, "rows": rows });
        write_out(path, &serde_json::to_string_pretty(&json).expect("rows serialize"))?;
    }
    Ok(EXIT_OK)
}

fn cmd_random(args: &RandomArgs) -> Result<u8, Failure> {
    let dims = args
        .dims
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| Failure::new(EXIT_IO, format!("bad dimensions {:?}", args.dims)))?;
    let t = io::random_tensor(&dims, args.density, args.seed).map_err(|e| Failure::new(EXIT_IO, e.to_string()))?;
    let text = io::tensor_to_string(&t);
    match &args.out {
        Some(path) => write_out(path, &text)?,
        None => print!("{text}"),
    }
    Ok(EXIT_OK)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_IO);
        }
    };
    let outcome = match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Check(a) => cmd_check(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Random(a) => cmd_random(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
