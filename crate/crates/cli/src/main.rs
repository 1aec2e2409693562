//! Command-line front end for the dual-tree complex wavelet toolkit.

mod error;
mod formats;
mod ops;
mod verify;

use clap::{Args, Parser, Subcommand};
use error::CliError;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "dtcwt",
    about = "Dual-tree complex wavelet analysis, resynthesis, wavelet tables, and verification",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct TransformArgs {
    /// Spline degree parameter (approximation order alpha + 1).
    #[arg(long, default_value_t = 8.0)]
    alpha: f64,
    /// Base fractional shift of tree a; tree b uses tau + 1/2.
    #[arg(long, default_value_t = 0.0)]
    tau: f64,
    /// Decomposition depth.
    #[arg(long, default_value_t = 4)]
    levels: usize,
    /// Input file.
    #[arg(long)]
    input: PathBuf,
    /// Output file or prefix.
    #[arg(long)]
    output: PathBuf,
    /// Fine-grid length for the sampled mother wavelets.
    #[arg(long = "fine-grid")]
    fine_grid: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a single-column signal into dual-tree coefficients.
    Analyze1d(TransformArgs),
    /// Rebuild a signal from coefficients written by analyze1d.
    Synth1d {
        /// Coefficient prefix or metadata file.
        #[arg(long)]
        input: PathBuf,
        /// Output signal file.
        #[arg(long)]
        output: PathBuf,
        #[arg(long = "fine-grid")]
        fine_grid: Option<usize>,
    },
    /// Analyze a plain PGM image into six directional bands per level.
    Analyze2d(TransformArgs),
    /// Rebuild an image (plain-text matrix) from analyze2d output.
    Synth2d {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long = "fine-grid")]
        fine_grid: Option<usize>,
    },
    /// Emit quadrature pairs H_tau psi, H_{tau+1/2} psi and their envelope
    /// as a plain-text table, one column group per tau.
    WaveletGen {
        #[arg(long, default_value_t = 8.0)]
        alpha: f64,
        /// Fractional shift; repeat for several column groups.
        #[arg(long = "tau", required = true)]
        taus: Vec<f64>,
        #[arg(long)]
        output: PathBuf,
        #[arg(long = "fine-grid")]
        fine_grid: Option<usize>,
    },
    /// Run the built-in verification suite and print a pass/fail table.
    Verify {
        /// Tolerance profile: strict (contract) or calibrated (measured).
        #[arg(long = "tolerance-profile", default_value = "strict")]
        profile: String,
        /// Append a deliberately failing check (runner self-test).
        #[arg(long = "inject-fault", default_value_t = false)]
        inject_fault: bool,
        #[arg(long = "fine-grid")]
        fine_grid: Option<usize>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze1d(args) => ops::cmd_analyze1d(&ops::JobConfig {
            alpha: args.alpha,
            tau: args.tau,
            levels: args.levels,
            input: args.input,
            output: args.output,
            fine_len: args.fine_grid,
        }),
        Command::Synth1d {
            input,
            output,
            fine_grid,
        } => ops::cmd_synth1d(&input, &output, fine_grid),
        Command::Analyze2d(args) => ops::cmd_analyze2d(&ops::JobConfig {
            alpha: args.alpha,
            tau: args.tau,
            levels: args.levels,
            input: args.input,
            output: args.output,
            fine_len: args.fine_grid,
        }),
        Command::Synth2d {
            input,
            output,
            fine_grid,
        } => ops::cmd_synth2d(&input, &output, fine_grid),
        Command::WaveletGen {
            alpha,
            taus,
            output,
            fine_grid,
        } => ops::cmd_wavelet_gen(alpha, &taus, &output, fine_grid),
        Command::Verify {
            profile,
            inject_fault,
            fine_grid,
        } => {
            let profile = verify::Profile::parse(&profile).ok_or_else(|| {
                CliError::precondition(format!(
                    "unknown tolerance profile {profile:?} (use strict or calibrated)"
                ))
            })?;
            // The environment variable overrides the default; the flag
            // overrides both.
            let env_fine = std::env::var("DTCWT_VERIFY_FINE_GRID")
                .ok()
                .and_then(|v| v.parse::<usize>().ok());
            let fine = fine_grid.or(env_fine);
            let results = verify::run_suite(profile, fine, inject_fault);
            let failures = verify::print_report(&results);
            if failures > 0 {
                Err(CliError::VerifyFailed(failures))
            } else {
                Ok(())
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(e, CliError::VerifyFailed(_)) {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
