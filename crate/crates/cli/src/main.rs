//! `spcap`: solve PDEs on spherical caps, dump operator sparsity, time the
//! solver and move coefficient files in and out.

mod output;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use output::{loglog_slope, num, read_coefficients, read_points, write_coefficients, write_csv};
use serde_json::json;
use spherical_cap::basis::Evaluator;
use spherical_cap::operators::{assemble, OperatorKind, OperatorSpec};
use spherical_cap::solvers::{catalog, solve_problem, time_zonal_helmholtz, AngleFn, PdeProblem, PointFn};
use spherical_cap::transforms::expand;
use spherical_cap::{BasisSpec, CapPoint};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

#[derive(Parser)]
#[command(name = "spcap", version, about = "Sparse spectral solvers on spherical caps")]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, env = "SPCAP_THREADS", global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a Poisson, Helmholtz or biharmonic problem.
    Solve(SolveArgs),
    /// Write the nonzeros of an operator and print its bandwidths.
    Spy(SpyArgs),
    /// Time build and solve of `Δu + cos(z) u = f` over several degrees.
    Bench(BenchArgs),
    /// Expand a built-in function in the cap basis.
    Expand(ExpandArgs),
    /// Evaluate a coefficient file at the points of a CSV file.
    Eval(EvalArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Problem {
    Poisson,
    Helmholtz,
    Biharmonic,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rhs {
    /// Poisson right-hand side with exact solution `(z − α) y eˣ`.
    PaperFig3,
    /// `y eˣ (z − α)`.
    PaperFig4,
    /// `(1 + erf(5(1 − 10((x − 0.5)² + y²)))) ρ²`.
    PaperFig5,
    /// Distance to a point `ε` off the sphere.
    Distance,
    /// Gaussian `exp(−ε |p − p₀|²)`.
    Gaussian,
    Zero,
}

#[derive(Clone, Copy, ValueEnum)]
enum Coefficient {
    /// `1 − (3(x − x₀)² + 5(y − y₀)² + 2(z − z₀)²)`.
    PaperFig4,
    CosZ,
    One,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct SolveArgs {
    problem: Problem,
    #[arg(long, default_value_t = 0.2, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long = "N")]
    degree: usize,
    /// Built-in right-hand side (default depends on the problem).
    #[arg(long, conflicts_with = "rhs_file")]
    rhs: Option<Rhs>,
    /// Right-hand side given as a coefficient file.
    #[arg(long)]
    rhs_file: Option<PathBuf>,
    /// Parameter of the distance and Gaussian right-hand sides.
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
    /// Wavenumber for Helmholtz.
    #[arg(long, default_value_t = 20.0)]
    k: f64,
    /// Helmholtz coefficient `v`.
    #[arg(long, value_enum, default_value_t = Coefficient::PaperFig4)]
    v: Coefficient,
    /// Dirichlet data `c₀, a₁, b₁, a₂, b₂, …` of `c(θ) = c₀ + Σ aₙ cos nθ + bₙ sin nθ`.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    boundary: Option<Vec<f64>>,
    /// Output directory for `coefficients.json` and `decay.csv`.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Summary format on stdout.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpyKind {
    Dphi,
    Wphi,
    Dtheta,
    Laplacian,
    LaplacianW,
    LaplacianW1,
    ConvertUp,
    ConvertDown,
    Rho2Laplacian,
    Biharmonic,
}

#[derive(Args)]
struct SpyArgs {
    kind: SpyKind,
    #[arg(long, default_value_t = 0.2, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long = "N")]
    degree: usize,
    /// Input parameter `a` (default depends on the operator).
    #[arg(long)]
    a: Option<usize>,
    #[arg(long, default_value_t = 2)]
    atilde: usize,
    /// CSV of `row,col,absval`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long = "N", value_delimiter = ',', required = true)]
    degrees: Vec<usize>,
    #[arg(long, default_value_t = 0.2, allow_negative_numbers = true)]
    alpha: f64,
    /// Runs per degree; the fastest is kept.
    #[arg(long, default_value_t = 1)]
    repeat: usize,
    /// CSV of `N,seconds`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Function {
    One,
    X,
    Y,
    Z,
    /// `eˣ y z`.
    ExpXyz,
    PaperFig3,
    PaperFig3Solution,
    PaperFig4,
    PaperFig4V,
    PaperFig5,
}

#[derive(Args)]
struct ExpandArgs {
    function: Function,
    #[arg(long, default_value_t = 0.2, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, default_value_t = 0)]
    a: usize,
    #[arg(long = "N")]
    degree: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    coeffs: PathBuf,
    /// CSV of `x,y,z`, optional header.
    #[arg(long)]
    points: PathBuf,
    /// CSV of `x,y,z,value`.
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    match cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Spy(a) => cmd_spy(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Expand(a) => cmd_expand(a),
        Command::Eval(a) => cmd_eval(a),
    }
}

fn rhs_function(rhs: Rhs, alpha: f64, eps: f64) -> PointFn {
    match rhs {
        Rhs::PaperFig3 => catalog::poisson_manufactured_rhs(alpha),
        Rhs::PaperFig4 => catalog::helmholtz_rhs(alpha),
        Rhs::PaperFig5 => catalog::biharmonic_rhs(),
        Rhs::Distance => catalog::poisson_distance_rhs(eps),
        Rhs::Gaussian => catalog::biharmonic_gaussian_rhs(eps),
        Rhs::Zero => catalog::constant(0.0),
    }
}

fn boundary_function(c: Vec<f64>) -> AngleFn {
    Arc::new(move |t: f64| {
        let mut s = c.first().copied().unwrap_or(0.0);
        for (j, pair) in c[1.min(c.len())..].chunks(2).enumerate() {
            let (sn, cn) = ((j + 1) as f64 * t).sin_cos();
            s += pair[0] * cn + pair.get(1).copied().unwrap_or(0.0) * sn;
        }
        s
    })
}

fn cmd_solve(args: SolveArgs) -> Result<()> {
    let alpha = args.alpha;
    let f: PointFn = match &args.rhs_file {
        Some(path) => {
            let c = read_coefficients(path)?;
            if c.spec.alpha != alpha {
                bail!("{} has alpha = {}, expected {alpha}", path.display(), c.spec.alpha);
            }
            let ev = Evaluator::new(&c)?;
            Arc::new(move |p: &CapPoint| ev.eval(p).unwrap_or(f64::NAN))
        }
        None => {
            let default = match args.problem {
                Problem::Poisson => Rhs::PaperFig3,
                Problem::Helmholtz => Rhs::PaperFig4,
                Problem::Biharmonic => Rhs::PaperFig5,
            };
            rhs_function(args.rhs.unwrap_or(default), alpha, args.eps)
        }
    };
    let mut problem = match args.problem {
        Problem::Poisson => PdeProblem::poisson(alpha, args.degree, f),
        Problem::Biharmonic => PdeProblem::biharmonic(alpha, args.degree, f),
        Problem::Helmholtz => {
            let v: PointFn = match args.v {
                Coefficient::PaperFig4 => catalog::helmholtz_coefficient(),
                Coefficient::CosZ => Arc::new(|p: &CapPoint| p.z.cos()),
                Coefficient::One => catalog::constant(1.0),
            };
            PdeProblem::helmholtz(alpha, args.degree, f, v, args.k)
        }
    };
    if let Some(c) = args.boundary {
        problem = problem.with_boundary(boundary_function(c));
    }
    let sol = solve_problem(&problem)?;
    std::fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let coeff_path = args.out.join("coefficients.json");
    let decay_path = args.out.join("decay.csv");
    write_coefficients(&coeff_path, &sol.coeffs)?;
    write_csv(
        &decay_path,
        "degree,norm",
        sol.block_norms.iter().enumerate().map(|(n, v)| format!("{n},{}", num(*v))),
    )?;
    let t = sol.timings;
    match args.format {
        Format::Json => {
            let summary = json!({
                "alpha": alpha,
                "N": args.degree,
                "residual": sol.residual_norm,
                "decoupled": sol.decoupled,
                "seconds": {"expand": t.expand, "assemble": t.assemble, "solve": t.solve},
                "coefficients": coeff_path,
                "decay": decay_path,
            });
            println!("{}", serde_json::to_string_pretty(&summary)?);
        }
        Format::Csv => {
            println!("residual,decoupled,expand,assemble,solve");
            println!(
                "{},{},{},{},{}",
                num(sol.residual_norm),
                sol.decoupled,
                num(t.expand),
                num(t.assemble),
                num(t.solve)
            );
        }
    }
    Ok(())
}

fn cmd_spy(args: SpyArgs) -> Result<()> {
    use OperatorKind::*;
    let t = args.atilde;
    let (kind, default_a) = match args.kind {
        SpyKind::Dphi => (Dphi, 0),
        SpyKind::Wphi => (Wphi, 1),
        SpyKind::Dtheta => (Dtheta, 0),
        SpyKind::Laplacian => (Laplacian, 0),
        SpyKind::LaplacianW => (WeightedLaplacian, t),
        SpyKind::LaplacianW1 => (WeightedLaplacianA1, 1),
        SpyKind::ConvertUp => (ConvertUp, 0),
        SpyKind::ConvertDown => (ConvertDown, t),
        SpyKind::Rho2Laplacian => (Rho2Laplacian, 1),
        SpyKind::Biharmonic => (Biharmonic, 2),
    };
    let spec = OperatorSpec::new(kind, args.alpha, args.a.unwrap_or(default_a), t, args.degree)?;
    let m = assemble(&spec)?;
    let entries = spherical_cap::operators::spy(&m, 0.0);
    let (l, u, lam, mu) = m.observed_bandwidths(0.0);
    let (ml, mu_) = spec.sub_block_bandwidths();
    println!("block-bandwidths ({l}, {u})");
    println!("sub-block-bandwidths ({lam}, {mu})");
    println!("mask ({ml}, {mu_})");
    println!("nonzeros {}", entries.len());
    if let Some(path) = args.out {
        write_csv(
            &path,
            "row,col,absval",
            entries.iter().map(|(r, c, v)| format!("{r},{c},{}", num(v.abs()))),
        )?;
    }
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    let mut rows = Vec::new();
    for &n in &args.degrees {
        let mut best = f64::INFINITY;
        for _ in 0..args.repeat.max(1) {
            best = best.min(time_zonal_helmholtz(args.alpha, n)?);
        }
        rows.push((n, best));
    }
    println!("N,seconds");
    for (n, t) in &rows {
        println!("{n},{}", num(*t));
    }
    if let Some(s) = loglog_slope(&rows) {
        println!("slope {s:.3}");
    }
    if let Some(path) = args.out {
        write_csv(&path, "N,seconds", rows.iter().map(|(n, t)| format!("{n},{}", num(*t))))?;
    }
    Ok(())
}

fn cmd_expand(args: ExpandArgs) -> Result<()> {
    let alpha = args.alpha;
    let f: PointFn = match args.function {
        Function::One => catalog::constant(1.0),
        Function::X => Arc::new(|p: &CapPoint| p.x),
        Function::Y => Arc::new(|p: &CapPoint| p.y),
        Function::Z => Arc::new(|p: &CapPoint| p.z),
        Function::ExpXyz => Arc::new(|p: &CapPoint| p.x.exp() * p.y * p.z),
        Function::PaperFig3 => catalog::poisson_manufactured_rhs(alpha),
        Function::PaperFig3Solution => catalog::poisson_manufactured_solution(alpha),
        Function::PaperFig4 => catalog::helmholtz_rhs(alpha),
        Function::PaperFig4V => catalog::helmholtz_coefficient(),
        Function::PaperFig5 => catalog::biharmonic_rhs(),
    };
    let c = expand(move |p: &CapPoint| f(p), &BasisSpec::new(alpha, args.a, args.degree)?)?;
    write_coefficients(&args.out, &c)
}

fn cmd_eval(args: EvalArgs) -> Result<()> {
    let c = read_coefficients(&args.coeffs)?;
    let points = read_points(&args.points, c.spec.alpha)?;
    let ev = Evaluator::new(&c)?;
    let rows = points
        .iter()
        .map(|p| Ok(format!("{},{},{},{}", num(p.x), num(p.y), num(p.z), num(ev.eval(p)?))))
        .collect::<Result<Vec<String>>>()?;
    write_csv(&args.out, "x,y,z,value", rows)
}
