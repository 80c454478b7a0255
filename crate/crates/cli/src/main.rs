use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ctrap_core::report::convergence_table;
use ctrap_core::{
    convergence_study, exactness_report, parse, run_integrate, weights_csv, IntegrateRequest, Result, RuleFamily,
};

/// Corrected trapezoidal quadrature with sharp error bounds.
#[derive(Parser)]
#[command(name = "ctrap", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate f over [a, b] with a composite rule and report its bound.
    Integrate(IntegrateArgs),
    /// Print the exact weight table of a family as CSV.
    Weights(WeightsArgs),
    /// Errors and observed orders for m = 1, 2, 4, ..., mmax.
    Convergence(ConvergenceArgs),
    /// Degree of exactness and kernel moments of a family.
    Exactness(FamilyArgs),
}

#[derive(Args)]
struct FamilyArgs {
    /// l1, l2, linf or alex
    #[arg(long)]
    family: RuleFamily,
    /// Rule order (number of endpoint derivatives used).
    #[arg(long)]
    n: usize,
}

#[derive(Args)]
struct Problem {
    /// Integrand in x, e.g. "exp(x)*sin(x)".
    #[arg(long = "f", allow_hyphen_values = true)]
    f: String,
    #[arg(long, allow_hyphen_values = true)]
    a: f64,
    #[arg(long, allow_hyphen_values = true)]
    b: f64,
    #[command(flatten)]
    rule: FamilyArgs,
}

#[derive(Args)]
struct IntegrateArgs {
    #[command(flatten)]
    problem: Problem,
    /// Number of subintervals.
    #[arg(long, default_value_t = 1)]
    m: usize,
    /// Also compute a reference integral and the true error.
    #[arg(long)]
    oracle: bool,
    #[arg(long, conflicts_with = "text")]
    json: bool,
    #[arg(long)]
    text: bool,
    /// Sum per-subinterval rules instead of the telescoped form.
    #[arg(long)]
    naive: bool,
}

#[derive(Args)]
struct WeightsArgs {
    #[command(flatten)]
    rule: FamilyArgs,
    /// With --b, also print weights evaluated on [a, b].
    #[arg(long, requires = "b", allow_hyphen_values = true)]
    a: Option<f64>,
    #[arg(long, requires = "a", allow_hyphen_values = true)]
    b: Option<f64>,
}

#[derive(Args)]
struct ConvergenceArgs {
    #[command(flatten)]
    problem: Problem,
    #[arg(long, default_value_t = 32)]
    mmax: usize,
}

fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Integrate(args) => {
            let p = args.problem;
            let report = run_integrate(&IntegrateRequest {
                expr: parse(&p.f)?,
                a: p.a,
                b: p.b,
                n: p.rule.n,
                family: p.rule.family,
                m: args.m,
                oracle: args.oracle,
                naive: args.naive,
            })?;
            Ok(if args.text {
                report.to_text()
            } else {
                report.to_json() + "\n"
            })
        }
        Command::Weights(args) => weights_csv(args.rule.family, args.rule.n, args.a.zip(args.b)),
        Command::Convergence(args) => {
            let p = args.problem;
            let rows = convergence_study(&parse(&p.f)?, p.a, p.b, p.rule.n, p.rule.family, args.mmax)?;
            Ok(convergence_table(&rows))
        }
        Command::Exactness(args) => Ok(exactness_report(args.family, args.n)?.to_text()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
