//! `hyperbeta`: fit, simulate, test and scan hypergraph beta models.

mod commands;
mod config;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hyperbeta::Variant;

use commands::{resolve_space, Data};
use config::{
    parse_damping, FitConfig, Format, LrtConfig, Method, RunConfig, ScanConfig, SimulateConfig,
    Solver,
};

pub type CliResult<T> = Result<T, Box<dyn std::error::Error>>;

/// Beta models for random hypergraphs.
///
/// Every output echoes its effective configuration, either as a `config` member
/// (JSON) or as a leading `# config:` line (text). Passing such an output to
/// `--config` reruns it; flags given alongside override the stored values.
#[derive(Parser, Debug)]
#[command(name = "hyperbeta", version)]
struct Cli {
    /// Configuration to start from: a previous output or a bare JSON config.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (a directory for `scan-existence` CSV output); stdout if absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Maximum likelihood fit to an edge list or degree file.
    ///
    /// Exit status: 0 converged, 2 MLE does not exist, 3 iteration budget exhausted, 1 error.
    Fit(FitArgs),
    /// Sample hypergraphs from a model or at a fixed edge density.
    Simulate(SimulateArgs),
    /// Likelihood ratio test of the general model against the layered model.
    Lrt(LrtArgs),
    /// MLE existence frequency across edge densities.
    ScanExistence(ScanArgs),
}

#[derive(Args, Debug, Default)]
struct ModelArgs {
    #[arg(long)]
    model: Option<Variant>,
    #[arg(long)]
    n: Option<usize>,
    /// Edge sizes, comma separated.
    #[arg(long, alias = "k", value_delimiter = ',')]
    sizes: Vec<usize>,
}

#[derive(Args, Debug, Default)]
struct SolverArgs {
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// `fallback`, `none`, or a relaxation factor in (0, 1].
    #[arg(long)]
    damping: Option<String>,
}

#[derive(Args, Debug)]
struct FitArgs {
    /// Edge list (`---` separates replicates) or degree file.
    input: Option<PathBuf>,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, value_enum)]
    method: Option<Method>,
    #[command(flatten)]
    solver: SolverArgs,
    /// `json` or `csv` (iteration trace, or the fitted probability table for ips).
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Parameter file; `n` and layered sizes are read from it.
    #[arg(long)]
    beta: Option<PathBuf>,
    /// Draw uniformly among hypergraphs with this fraction of all possible edges.
    #[arg(long)]
    density: Option<f64>,
    #[arg(long)]
    replicates: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// `edges` or `degrees` (mean over replicates).
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args, Debug)]
struct LrtArgs {
    /// Edge list of replicates, or a per-size degree file.
    input: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, alias = "k", value_delimiter = ',')]
    sizes: Vec<usize>,
    /// Hypergraphs averaged into a degree file.
    #[arg(long)]
    observations: Option<usize>,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Comma separated, ascending. Default 0.05, 0.10, …, 0.95.
    #[arg(long, value_delimiter = ',')]
    densities: Vec<f64>,
    #[arg(long)]
    replicates: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    solver: SolverArgs,
    /// `csv` (summary and detail files) or `json`.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

fn pick<T>(flag: Option<T>, base: Option<T>, default: impl FnOnce() -> T) -> T {
    flag.or(base).unwrap_or_else(default)
}

fn pick_vec<T: Clone>(flag: Vec<T>, base: Option<&Vec<T>>) -> Vec<T> {
    if flag.is_empty() {
        base.cloned().unwrap_or_default()
    } else {
        flag
    }
}

fn solver(flags: SolverArgs, base: Option<&Solver>) -> CliResult<Solver> {
    let d = Solver::default();
    let s = Solver {
        tol: pick(flags.tol, base.map(|b| b.tol), || d.tol),
        max_iter: pick(flags.max_iter, base.map(|b| b.max_iter), || d.max_iter),
        damping: pick(flags.damping, base.map(|b| b.damping.clone()), || {
            d.damping.clone()
        }),
    };
    parse_damping(&s.damping)?;
    Ok(s)
}

fn check_format(format: Format, allowed: &[Format], command: &str) -> CliResult<Format> {
    if allowed.contains(&format) {
        Ok(format)
    } else {
        Err(format!("{command} does not write {format:?} output").into())
    }
}

fn resolve_fit(a: FitArgs, base: Option<FitConfig>) -> CliResult<RunConfig> {
    let b = base.as_ref();
    let input = a
        .input
        .or(b.map(|b| b.input.clone()))
        .ok_or("fit needs an input file")?;
    let data = Data::read(&input)?;
    let sizes = pick_vec(a.model.sizes, b.map(|b| &b.sizes));
    let (n, sizes) = resolve_space(a.model.n.or(b.map(|b| b.n)), &sizes, &data)?;
    let method = pick(a.method, b.map(|b| b.method), || Method::Fixedpoint);
    let damping = match method {
        Method::Fixedpoint => {
            let d = pick(a.solver.damping, b.and_then(|b| b.damping.clone()), || {
                "fallback".into()
            });
            parse_damping(&d)?;
            Some(d)
        }
        Method::Ips if a.solver.damping.is_some() => {
            return Err("--damping applies to the fixedpoint method only".into())
        }
        Method::Ips => None,
    };
    Ok(RunConfig::Fit(FitConfig {
        input,
        model: pick(a.model.model, b.map(|b| b.model), || Variant::Uniform),
        n,
        sizes,
        method,
        tol: pick(a.solver.tol, b.map(|b| b.tol), || 1e-10),
        max_iter: pick(a.solver.max_iter, b.map(|b| b.max_iter), || match method {
            Method::Fixedpoint => 5000,
            Method::Ips => 100_000,
        }),
        damping,
        format: check_format(
            pick(a.format, b.map(|b| b.format), || Format::Json),
            &[Format::Json, Format::Csv],
            "fit",
        )?,
    }))
}

fn resolve_simulate(a: SimulateArgs, base: Option<SimulateConfig>) -> CliResult<RunConfig> {
    let b = base.as_ref();
    let beta = a.beta.or(b.and_then(|b| b.beta.clone()));
    let density = a.density.or(b.and_then(|b| b.density));
    let mut n = a.model.n.or(b.map(|b| b.n));
    let mut sizes = pick_vec(a.model.sizes, b.map(|b| &b.sizes));
    if let Some(path) = &beta {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        let (pn, params) = hyperbeta::model::io::read_params(&text)?;
        if n.is_some_and(|n| n != pn) {
            return Err(format!("--n disagrees with the parameter file (n={pn})").into());
        }
        n = Some(pn);
        if sizes.is_empty() {
            if let hyperbeta::ParamVector::Layered(ls) = &params {
                sizes = ls.iter().map(|(k, _)| *k).collect();
            }
        }
    }
    if sizes.is_empty() {
        return Err("simulate needs --sizes".into());
    }
    Ok(RunConfig::Simulate(SimulateConfig {
        model: pick(a.model.model, b.map(|b| b.model), || Variant::Uniform),
        n: n.ok_or("simulate needs --n")?,
        sizes,
        beta,
        density,
        replicates: pick(a.replicates, b.map(|b| b.replicates), || 1),
        seed: pick(a.seed, b.map(|b| b.seed), || 0),
        format: check_format(
            pick(a.format, b.map(|b| b.format), || Format::Edges),
            &[Format::Edges, Format::Degrees],
            "simulate",
        )?,
    }))
}

fn resolve_lrt(a: LrtArgs, base: Option<LrtConfig>) -> CliResult<RunConfig> {
    let b = base.as_ref();
    let input = a
        .input
        .or(b.map(|b| b.input.clone()))
        .ok_or("lrt needs an input file")?;
    let data = Data::read(&input)?;
    let sizes = pick_vec(a.sizes, b.map(|b| &b.sizes));
    let (n, sizes) = resolve_space(a.n.or(b.map(|b| b.n)), &sizes, &data)?;
    let observations = match data.observations() {
        Some(count) if a.observations.is_some_and(|o| o != count) => {
            return Err(format!(
                "--observations disagrees with the {count} hypergraphs in the input"
            )
            .into())
        }
        Some(count) => count,
        None => pick(a.observations, b.map(|b| b.observations), || 1),
    };
    Ok(RunConfig::Lrt(LrtConfig {
        input,
        n,
        sizes,
        observations,
        solver: solver(a.solver, b.map(|b| &b.solver))?,
    }))
}

fn resolve_scan(a: ScanArgs, base: Option<ScanConfig>) -> CliResult<RunConfig> {
    let b = base.as_ref();
    let mut densities = pick_vec(a.densities, b.map(|b| &b.densities));
    if densities.is_empty() {
        densities = (1..=19).map(|j| j as f64 / 20.0).collect();
    }
    let sizes = pick_vec(a.model.sizes, b.map(|b| &b.sizes));
    if sizes.is_empty() {
        return Err("scan-existence needs --sizes".into());
    }
    Ok(RunConfig::ScanExistence(ScanConfig {
        model: pick(a.model.model, b.map(|b| b.model), || Variant::Uniform),
        n: a.model
            .n
            .or(b.map(|b| b.n))
            .ok_or("scan-existence needs --n")?,
        sizes,
        densities,
        replicates: pick(a.replicates, b.map(|b| b.replicates), || 20),
        seed: pick(a.seed, b.map(|b| b.seed), || 0),
        solver: solver(a.solver, b.map(|b| &b.solver))?,
        format: check_format(
            pick(a.format, b.map(|b| b.format), || Format::Csv),
            &[Format::Csv, Format::Json],
            "scan-existence",
        )?,
    }))
}

fn resolve(command: Option<Command>, base: Option<RunConfig>) -> CliResult<RunConfig> {
    let mismatch = |base: &RunConfig, command: &str| -> Box<dyn std::error::Error> {
        format!(
            "the configuration is for `{}`, not `{command}`",
            base.command()
        )
        .into()
    };
    match (command, base) {
        (None, Some(base)) => Ok(base),
        (None, None) => Err("a subcommand or --config is required".into()),
        (Some(Command::Fit(a)), base) => match base {
            None => resolve_fit(a, None),
            Some(RunConfig::Fit(c)) => resolve_fit(a, Some(c)),
            Some(other) => Err(mismatch(&other, "fit")),
        },
        (Some(Command::Simulate(a)), base) => match base {
            None => resolve_simulate(a, None),
            Some(RunConfig::Simulate(c)) => resolve_simulate(a, Some(c)),
            Some(other) => Err(mismatch(&other, "simulate")),
        },
        (Some(Command::Lrt(a)), base) => match base {
            None => resolve_lrt(a, None),
            Some(RunConfig::Lrt(c)) => resolve_lrt(a, Some(c)),
            Some(other) => Err(mismatch(&other, "lrt")),
        },
        (Some(Command::ScanExistence(a)), base) => match base {
            None => resolve_scan(a, None),
            Some(RunConfig::ScanExistence(c)) => resolve_scan(a, Some(c)),
            Some(other) => Err(mismatch(&other, "scan-existence")),
        },
    }
}

fn write_outputs(out: Option<&PathBuf>, outcome: &commands::Outcome) -> CliResult<()> {
    for (name, text) in &outcome.files {
        match (out, name) {
            (Some(dir), Some(name)) => {
                std::fs::create_dir_all(dir)?;
                std::fs::write(dir.join(name), text)?;
            }
            (Some(path), None) => std::fs::write(path, text)?,
            (None, _) => {
                std::io::stdout().write_all(text.as_bytes())?;
                // Only the first named file goes to stdout.
                break;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = (|| -> CliResult<u8> {
        let base = cli.config.as_deref().map(config::load).transpose()?;
        let config = resolve(cli.command, base)?;
        let outcome = commands::run(&config)?;
        write_outputs(cli.out.as_ref(), &outcome)?;
        Ok(outcome.code)
    })();
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
