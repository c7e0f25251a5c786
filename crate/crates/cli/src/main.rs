use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use snf_cli::error::EXIT_INVALID;
use snf_cli::json;
use snf_cli::run::{run, Command, Options};

#[derive(Parser)]
#[command(
    name = "snf",
    version,
    about = "Distance to non-trivial Smith forms of matrix polynomials"
)]
struct Cli {
    /// Seed for the randomized self-test.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Triviality, McCoy rank, lower bound and attainability.
    Check(Common),
    /// Lower bound on the distance to a non-trivial Smith form.
    Bound(Common),
    /// Nearest matrix polynomial whose adjoint has a common divisor.
    Snf {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=2))]
        deg_h: Option<u64>,
        #[command(flatten)]
        solver: Solver,
    },
    /// Nearest matrix polynomial whose rank drops by a given amount.
    Mccoy {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        rank_drop: Option<u64>,
        #[arg(long)]
        linearize: Option<bool>,
        #[command(flatten)]
        solver: Solver,
    },
    /// Seeded cross-checks against independent oracles.
    Selftest,
}

#[derive(Args)]
struct Common {
    input: PathBuf,
    /// full, support, degree or a path to a JSON mask grid.
    #[arg(long)]
    structure: Option<String>,
}

#[derive(Args)]
struct Solver {
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    reversal: bool,
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let mut opts = Options {
        seed: cli.seed,
        ..Options::default()
    };
    let mut input = None;
    let command = match cli.command {
        Sub::Check(c) => {
            input = Some(c.input);
            opts.structure = c.structure;
            Command::Check
        }
        Sub::Bound(c) => {
            input = Some(c.input);
            opts.structure = c.structure;
            Command::Bound
        }
        Sub::Snf { common, deg_h, solver } => {
            input = Some(common.input);
            opts.structure = common.structure;
            opts.deg_h = deg_h.map(|k| k as usize);
            apply_solver(&mut opts, solver);
            Command::Snf
        }
        Sub::Mccoy {
            common,
            rank_drop,
            linearize,
            solver,
        } => {
            input = Some(common.input);
            opts.structure = common.structure;
            opts.rank_drop = rank_drop.map(|r| r as usize);
            opts.linearize = linearize;
            apply_solver(&mut opts, solver);
            Command::Mccoy
        }
        Sub::Selftest => Command::Selftest,
    };
    let args: Vec<String> = argv.into_iter().skip(1).collect();
    let outcome = run(command, input.as_deref(), &opts, &args);
    if let Some(m) = &outcome.message {
        eprintln!("error: {m}");
    }
    let _ = writeln!(std::io::stdout().lock(), "{}", json::to_string(&outcome.report));
    ExitCode::from(outcome.exit_code as u8)
}

fn apply_solver(opts: &mut Options, s: Solver) {
    opts.max_iter = s.max_iter;
    opts.tol = s.tol;
    opts.reversal = s.reversal;
}
