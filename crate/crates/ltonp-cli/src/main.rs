use anyhow::Result;
use clap::{Parser, Subcommand};
use ltonp_cli::commands::{self, Options};
use ltonp_cli::io::{parse_leech, parse_parameter, read_json, read_problem};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Solve and verify tangential Nevanlinna-Pick interpolation problems.
#[derive(Parser)]
#[command(name = "ltonp", version)]
struct Cli {
    /// Residual threshold for success.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    /// Number of circle points in verification grids.
    #[arg(long, global = true, default_value_t = ltonp::verify::CIRCLE_POINTS)]
    grid: usize,
    /// Schur parameter file ({"constant": …} or {"system": …}).
    #[arg(long, global = true)]
    param: Option<PathBuf>,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Central solution, or the solution for --param, with diagnostics.
    Solve { problem: PathBuf },
    /// Full verification report; exit code 0 iff every residual is within --tol.
    Verify { problem: PathBuf },
    /// Complementary pair (C, D) and its identity residuals.
    Pair { problem: PathBuf },
    /// Central entropy, and the entropy of the --param solution.
    Entropy { problem: PathBuf },
    /// Order-N reduction of a polynomial Leech problem {"G", "K", "N"}.
    Leech { file: PathBuf },
    /// Commutant lifting data {Z, B, Btilde} with ZZ* + BB* = I.
    Clift { problem: PathBuf },
    /// Random problem and parameter, deterministic in --seed.
    Sample {
        #[arg(long, requires_all = ["p", "q"])]
        n: Option<usize>,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long)]
        q: Option<usize>,
    },
}

fn run(cli: &Cli) -> Result<bool> {
    let opts = Options { tol: cli.tol, grid: cli.grid, seed: cli.seed };
    let param = cli.param.as_deref().map(|p| read_json(p).and_then(|v| parse_parameter(&v))).transpose()?;
    let x = param.as_ref();
    let problem = |p: &Path| read_problem(p)?.problem();
    let (value, ok) = match &cli.command {
        Command::Solve { problem: p } => commands::solve(problem(p)?, x, &opts)?,
        Command::Verify { problem: p } => commands::verify(problem(p)?, x, &opts)?,
        Command::Pair { problem: p } => commands::pair(problem(p)?, &opts)?,
        Command::Entropy { problem: p } => commands::entropy(problem(p)?, x, &opts)?,
        Command::Leech { file } => commands::leech(&parse_leech(&read_json(file)?)?, &opts)?,
        Command::Clift { problem: p } => commands::clift(&read_problem(p)?, x, &opts)?,
        Command::Sample { n, p, q } => {
            let dims = n.zip(*p).zip(*q).map(|((n, p), q)| (n, p, q));
            commands::sample(dims, &opts)?
        }
    };
    let text = serde_json::to_string_pretty(&value)?;
    match &cli.out {
        Some(path) => std::fs::write(path, text + "\n")?,
        None => {
            if let Err(e) = writeln!(std::io::stdout().lock(), "{text}") {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    return Err(e.into());
                }
            }
        }
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
