use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use planefield::cli::{self, exit, Mode, RunOptions, Subcommand};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Command {
    /// Validate the form: content, decomposability, integrability.
    Check,
    /// Test every hypersurface for invariance and print cofactors.
    Invariant,
    /// Build and verify a first integral from the hypersurfaces.
    Integrate,
    /// Re-check the certificates of a machine report (see --report).
    Verify,
}

/// Exact Darboux first integrals for polynomial plane fields.
#[derive(Parser, Debug)]
#[command(name = "planefield", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Problem file.
    file: PathBuf,
    /// Emit the line-oriented machine format.
    #[arg(long)]
    machine: bool,
    /// Reject polynomials of higher total degree.
    #[arg(long, value_name = "N")]
    max_degree: Option<u32>,
    /// Print nothing; only the exit code matters.
    #[arg(long)]
    quiet: bool,
    /// Machine report to check (verify only); read from stdin when absent.
    #[arg(long, value_name = "FILE")]
    report: Option<PathBuf>,
}

fn read(path: &PathBuf) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::INVALID_INPUT as u8 } else { 0 });
        }
    };
    ExitCode::from(real_main(&args) as u8)
}

fn real_main(args: &Args) -> i32 {
    let text = match read(&args.file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return exit::INVALID_INPUT;
        }
    };
    let mut problem = match cli::parse_problem(&text) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{}:{e}", args.file.display());
            return exit::INVALID_INPUT;
        }
    };
    if let Some(n) = args.max_degree {
        problem.options.insert("max-degree".into(), n.to_string());
    }
    let opts = RunOptions {
        max_degree: args.max_degree,
    };
    let outcome = match args.command {
        Command::Check => cli::run(Subcommand::Check, &problem, &opts),
        Command::Invariant => cli::run(Subcommand::Invariant, &problem, &opts),
        Command::Integrate => cli::run(Subcommand::Integrate, &problem, &opts),
        Command::Verify => {
            let claimed = match &args.report {
                Some(p) => read(p),
                None => std::io::read_to_string(std::io::stdin()).map_err(|e| format!("stdin: {e}")),
            };
            let claimed = match claimed {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: {e}");
                    return exit::INVALID_INPUT;
                }
            };
            match cli::parse_machine(&claimed) {
                Ok(r) => cli::verify_report(&problem, &r),
                Err(e) => {
                    eprintln!("error: {e}");
                    return exit::INVALID_INPUT;
                }
            }
        }
    };
    if !args.quiet {
        let mode = if args.machine { Mode::Machine } else { Mode::Human };
        print!("{}", cli::serialize_report(&outcome.report, mode));
    }
    outcome.exit_code
}
