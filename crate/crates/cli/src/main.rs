use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use udgmcp_core::grid::CellSolver;
use udgmcp_core::harness::{
    format_points, generate_instance, read_partition, read_points, run_on, write_json,
    write_points, Algorithm, Distribution, ExperimentConfig, ExperimentError, InstanceSource,
    InstanceSpec, IoError,
};
use udgmcp_core::width::{select_width, xi_convergents, RationalWidth};
use udgmcp_core::{build_graph, psi, uncross_partition, validate_partition};

const EXIT_USAGE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_SOLVER: u8 = 3;

#[derive(Parser)]
#[command(
    name = "udgmcp",
    version,
    about = "Clique partition solvers for unit disk graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance.
    Gen(GenArgs),
    /// Solve an instance and print a JSON result.
    Solve(SolveArgs),
    /// Check a partition against an instance.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        partition: PathBuf,
    },
    /// Remove overlapping hulls from a partition.
    Uncross {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        partition: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print convergents of 1 + 2/sqrt(3) and the derived strip widths.
    Convergents {
        /// Print convergents 0..=t.
        #[arg(long, conflicts_with = "eps")]
        t: Option<u32>,
        /// Print the width selected for this eps.
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Run a solver over a batch of generated instances and summarize ratios.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Dist {
    Uniform,
    Clustered,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Exact,
    Strips3,
    StripsRand,
    GridPtas,
}

#[derive(Clone, Copy, ValueEnum)]
enum CellSolverArg {
    Oracle,
    Enum,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 10.0)]
    width: f64,
    #[arg(long, default_value_t = 10.0)]
    height: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Dist::Uniform)]
    dist: Dist,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct SolverArgs {
    #[arg(long, value_enum, default_value_t = Algo::StripsRand)]
    algo: Algo,
    #[arg(long, default_value_t = 0.3)]
    eps: f64,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    /// Seed for the per-round random shifts.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Use the rational strip width from the continued fraction.
    #[arg(long, conflicts_with = "irrational")]
    rational: bool,
    /// Use the width sqrt(3)/2 (default).
    #[arg(long)]
    irrational: bool,
    /// Number of rounds; derived from eps and delta when omitted.
    #[arg(long)]
    rounds: Option<usize>,
    /// Grid cell side in place of ceil(16/eps).
    #[arg(long)]
    k_override: Option<u32>,
    #[arg(long, value_enum, default_value_t = CellSolverArg::Oracle)]
    cell_solver: CellSolverArg,
}

#[derive(Args)]
struct SolveArgs {
    /// Point file: one "x y" pair per line.
    #[arg(long = "in")]
    input: PathBuf,
    /// Write the JSON result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 14)]
    n: usize,
    #[arg(long, default_value_t = 100)]
    instances: u64,
    #[arg(long, default_value_t = 3.0)]
    side: f64,
    #[arg(long, value_enum, default_value_t = Dist::Uniform)]
    dist: Dist,
    #[command(flatten)]
    solver: SolverArgs,
}

struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn usage(msg: impl ToString) -> Self {
        Failure {
            code: EXIT_USAGE,
            msg: msg.to_string(),
        }
    }

    fn input(msg: impl ToString) -> Self {
        Failure {
            code: EXIT_INPUT,
            msg: msg.to_string(),
        }
    }

    fn solver(msg: impl ToString) -> Self {
        Failure {
            code: EXIT_SOLVER,
            msg: msg.to_string(),
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::input(e)
    }
}

impl From<ExperimentError> for Failure {
    fn from(e: ExperimentError) -> Self {
        if e.is_parameter_error() {
            Failure::usage(e)
        } else if e.is_input_error() {
            Failure::input(e)
        } else {
            Failure::solver(e)
        }
    }
}

fn distribution(d: Dist) -> Distribution {
    match d {
        Dist::Uniform => Distribution::Uniform,
        Dist::Clustered => Distribution::Clustered,
    }
}

fn experiment(args: &SolverArgs, source: InstanceSource) -> ExperimentConfig {
    let algorithm = match args.algo {
        Algo::Exact => Algorithm::Exact,
        Algo::Strips3 => Algorithm::Strips3,
        Algo::StripsRand => Algorithm::StripsRand,
        Algo::GridPtas => Algorithm::GridPtas,
    };
    let mut cfg = ExperimentConfig::new(algorithm, source);
    cfg.eps = args.eps;
    cfg.delta = args.delta;
    cfg.seed = args.seed;
    cfg.rounds = args.rounds;
    cfg.k_override = args.k_override;
    cfg.variant = if args.rational {
        udgmcp_core::Variant::Rational
    } else {
        udgmcp_core::Variant::Irrational
    };
    cfg.cell_solver = match args.cell_solver {
        CellSolverArg::Oracle => CellSolver::Oracle,
        CellSolverArg::Enum => CellSolver::Enumerative,
    };
    cfg
}

fn emit(out: Option<&Path>, value: &serde_json::Value) -> Result<(), Failure> {
    match out {
        Some(path) => write_json(path, value).map_err(Failure::input),
        None => {
            println!(
                "{}",
                serde_json::to_string_pretty(value).expect("serializable")
            );
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Gen(a) => {
            let spec = InstanceSpec {
                n: a.n,
                width: a.width,
                height: a.height,
                seed: a.seed,
                distribution: distribution(a.dist),
            };
            let ps = generate_instance(&spec).map_err(Failure::usage)?;
            match a.out {
                Some(path) => write_points(&path, &ps)?,
                None => print!("{}", format_points(&ps)),
            }
        }
        Command::Solve(a) => {
            let ps = read_points(&a.input)?;
            let cfg = experiment(&a.solver, InstanceSource::File(a.input.clone()));
            let result = run_on(&ps, &cfg)?;
            emit(
                a.out.as_deref(),
                &serde_json::to_value(&result).expect("serializable"),
            )?;
        }
        Command::Verify { input, partition } => {
            let ps = read_points(&input)?;
            let cp = read_partition(&partition)?;
            let violations = validate_partition(&build_graph(&ps), &cp);
            if violations.is_empty() {
                println!("valid: {} cliques over {} points", cp.len(), ps.len());
            } else {
                for v in &violations {
                    eprintln!("{v}");
                }
                return Err(Failure::input(format!(
                    "{} violation(s) found",
                    violations.len()
                )));
            }
        }
        Command::Uncross {
            input,
            partition,
            out,
        } => {
            let ps = read_points(&input)?;
            let cp = read_partition(&partition)?;
            let outcome = uncross_partition(&cp, &ps).map_err(|e| match e {
                udgmcp_core::UncrossError::InvalidPartition(_) => Failure::input(e),
                _ => Failure::solver(e),
            })?;
            let value = json!({
                "n": ps.len(),
                "num_cliques": outcome.partition.len(),
                "cliques": outcome.partition.parts,
                "psi_before": outcome.psi_trace.first(),
                "psi_after": psi(&outcome.partition, &ps),
                "psi_trace": outcome.psi_trace,
                "moves": outcome.moves,
            });
            emit(out.as_deref(), &value)?;
        }
        Command::Convergents { t, eps } => {
            if let Some(eps) = eps {
                let w = select_width(eps).map_err(Failure::usage)?;
                println!("t p q d");
                println!("{} {} {} {}", w.t, w.p, w.q, w.d());
            } else {
                println!("t p q d");
                for c in xi_convergents(t.unwrap_or(5)) {
                    let d = if c.is_above_xi() {
                        RationalWidth::from_convergent(&c).d().to_string()
                    } else {
                        "-".to_string()
                    };
                    println!("{} {} {} {}", c.t, c.p, c.q, d);
                }
            }
        }
        Command::Bench(a) => {
            let mut ratios = Vec::new();
            let mut total_ms = 0.0;
            for i in 0..a.instances {
                let spec = InstanceSpec {
                    n: a.n,
                    width: a.side,
                    height: a.side,
                    seed: a.solver.seed.wrapping_add(i),
                    distribution: distribution(a.dist),
                };
                let ps = generate_instance(&spec).map_err(Failure::input)?;
                let mut cfg = experiment(&a.solver, InstanceSource::Generated(spec));
                cfg.seed = a.solver.seed.wrapping_add(i);
                let r = run_on(&ps, &cfg)?;
                total_ms += r.elapsed_ms;
                if let Some(x) = r.ratio {
                    ratios.push(x);
                }
            }
            let max = ratios.iter().copied().fold(f64::NAN, f64::max);
            let mean = ratios.iter().sum::<f64>() / ratios.len().max(1) as f64;
            let value = json!({
                "instances": a.instances,
                "n": a.n,
                "with_ratio": ratios.len(),
                "mean_ratio": (!ratios.is_empty()).then_some(mean),
                "max_ratio": (!ratios.is_empty()).then_some(max),
                "total_ms": total_ms,
            });
            emit(None, &value)?;
        }
    }
    Ok(())
}

fn configure_threads() {
    if let Some(n) = std::env::var("UDGMCP_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    configure_threads();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
