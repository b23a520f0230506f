use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hyperzeta_cli::{compare, identities, moments, predict, zeta, CliResult, EXIT_USAGE};

/// Zeta functions of hyperelliptic curves over odd finite fields, exact
/// central-value moments and their random-matrix predictions.
#[derive(Parser, Debug)]
#[command(name = "hyperzeta", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// L-polynomials of one curve or a whole family, written as a cache.
    Zeta(zeta::ZetaArgs),
    /// Exact moments M_k(q; d) for k = 0..=k_max.
    Moments(moments::MomentsArgs),
    /// Predicted moments Q_k(q; d) for k = 1..=k_max.
    Predict(predict::PredictArgs),
    /// Exact against predicted moments, with difference and ratio.
    Compare(compare::CompareArgs),
    /// Run an identity suite.
    Identities(identities::IdentitiesArgs),
}

fn dispatch(cli: &Cli) -> CliResult<String> {
    match &cli.command {
        Command::Zeta(a) => zeta::run(a),
        Command::Moments(a) => moments::run(a),
        Command::Predict(a) => predict::run(a),
        Command::Compare(a) => compare::run(a),
        Command::Identities(a) => identities::run(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match dispatch(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(EXIT_USAGE as u8);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
