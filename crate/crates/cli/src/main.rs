use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rhsolve_cli::error::exit;
use rhsolve_cli::output::write_all;
use rhsolve_cli::{builtins, run, CliError, CliResult, ProblemFile, RunOptions, Verb};

#[derive(Parser)]
#[command(
    name = "rhsolve",
    version,
    about = "Riemann-Hilbert problems on the disk and on Jordan domains"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve Re(conj(lambda) f) = phi and verify the boundary condition.
    Solve(RunArgs),
    /// Dirichlet problem by both extension routes, with their difference.
    Dirichlet(RunArgs),
    /// Null-space generators, Gram rank and family solutions.
    Nullspace(RunArgs),
    /// Harmonic measure of boundary arcs with a quadrature cross-check.
    Hmeasure(RunArgs),
    /// Dump a conformal map's boundary correspondence.
    Map(RunArgs),
    /// List builtin problems.
    Builtins,
    /// Print a builtin problem file.
    Example { name: String },
}

#[derive(Args)]
struct RunArgs {
    /// Problem file (JSON).
    #[arg(long, short, conflicts_with = "builtin", required_unless_present = "builtin")]
    input: Option<PathBuf>,
    /// Name of a builtin problem.
    #[arg(long, short)]
    builtin: Option<String>,
    /// Output directory; overrides `output.dir` in the file.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Grid size override (power of two).
    #[arg(long)]
    n: Option<usize>,
    /// Extension route override: direct, poisson, lusin, gehring.
    #[arg(long)]
    route: Option<String>,
    /// Seed for randomized test points.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Print every check, not only failures.
    #[arg(long, short)]
    verbose: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}

fn execute(command: Command) -> CliResult<i32> {
    let (verb, args) = match command {
        Command::Solve(a) => (Verb::Solve, a),
        Command::Dirichlet(a) => (Verb::Dirichlet, a),
        Command::Nullspace(a) => (Verb::Nullspace, a),
        Command::Hmeasure(a) => (Verb::Hmeasure, a),
        Command::Map(a) => (Verb::Map, a),
        Command::Builtins => {
            for (name, verb) in builtins::catalog() {
                println!("{name:<22}{}", verb.as_str());
            }
            return Ok(0);
        }
        Command::Example { name } => {
            print!("{}", builtins::source(&name)?);
            return Ok(0);
        }
    };
    let problem = match (&args.input, &args.builtin) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
            ProblemFile::from_json(&text)?
        }
        (None, Some(name)) => builtins::load(name)?,
        (None, None) => return Err(CliError::schema("give --input or --builtin")),
    };
    let opts = RunOptions {
        n: args.n,
        route: args.route.clone(),
        seed: args.seed,
    };
    let outcome = run(verb, problem, &opts)?;
    let dir = args
        .out
        .clone()
        .or_else(|| outcome.problem.output.dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    let paths = write_all(&dir, &outcome.artifacts)?;
    for c in &outcome.checks {
        if args.verbose || !c.pass {
            let tag = if c.pass { "ok  " } else { "FAIL" };
            eprintln!("{tag} {}: {:.3e} (threshold {:.3e})", c.name, c.value, c.threshold);
        }
    }
    if args.verbose {
        for p in &paths {
            eprintln!("wrote {}", p.display());
        }
    }
    let code = outcome.exit_code();
    if code == exit::VERIFICATION {
        eprintln!("verification failed; artifacts written to {}", dir.display());
    }
    Ok(code)
}
