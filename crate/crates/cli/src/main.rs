use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fermicoh::verify::RunConfig;
use fermicoh_cli::{self as cli, schema::Decomposition, CliError};

#[derive(Parser)]
#[command(
    name = "fermicoh",
    version,
    about = "Fermionic coherent states on a finite Fock space"
)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a randomized verification suite against the dense oracle.
    Verify {
        /// car, brackets, representations, kahler, reorder, relpp,
        /// normal-form, unitarity, norms, kernel, denseness or all
        #[arg(long, default_value = "all")]
        suite: String,
        /// Number of modes.
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Replace every per-check tolerance (exact checks keep theirs).
        #[arg(long)]
        tol: Option<f64>,
        /// Emit the JSON report instead of a table.
        #[arg(long)]
        json: bool,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Leave out wall-clock fields so reports are reproducible byte for byte.
        #[arg(long)]
        no_timestamp: bool,
    },
    /// Gram matrix of coherent states given as a JSON list of points.
    Kernel {
        /// JSON file; stdin when absent or `-`.
        input: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Normal form of a JSON group word.
    Decompose {
        input: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Coherent-state expansion of a†_{i1}...a†_{ik} applied to the vacuum.
    Expand {
        #[arg(long)]
        dim: usize,
        /// Mode indices, 1-based.
        indices: Vec<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn read_input(path: Option<&PathBuf>) -> Result<String, CliError> {
    match path {
        Some(p) if p.as_os_str() != "-" => Ok(std::fs::read_to_string(p)?),
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn write_output(path: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// `Ok(true)` means success / overall pass.
fn run(args: Args) -> Result<bool, CliError> {
    match args.command {
        Command::Verify {
            suite,
            dim,
            trials,
            seed,
            tol,
            json,
            output,
            no_timestamp,
        } => {
            let cfg = RunConfig { dim, trials, seed, tol };
            let report = cli::cmd_verify(&suite, &cfg)?;
            let text = if json {
                cli::to_json(&cli::report_json(&report, !no_timestamp))
            } else {
                cli::report_text(&report, !no_timestamp)
            };
            write_output(output.as_ref(), &text)?;
            Ok(report.passed)
        }
        Command::Kernel { input, output } => {
            let gram = cli::cmd_kernel(&read_input(input.as_ref())?)?;
            write_output(output.as_ref(), &cli::to_json(&gram))?;
            Ok(gram.gram.iter().flatten().all(|e| e.error.is_none()))
        }
        Command::Decompose { input, output } => {
            let d = cli::cmd_decompose(&read_input(input.as_ref())?)?;
            write_output(output.as_ref(), &cli::to_json(&d))?;
            Ok(matches!(d, Decomposition::NormalForm(_)))
        }
        Command::Expand { dim, indices, output } => {
            let e = cli::cmd_expand(dim, &indices)?;
            write_output(output.as_ref(), &cli::to_json(&e))?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
