//! `opspectra`: dilation operators on polynomial sequences from the command line.
//!
//! Exit status is 0 on success, 1 on usage errors and 2 when the mathematics
//! refuses (a failed precondition, an undecidable verdict or a rejected
//! construction).

mod commands;
mod config;
mod output;
mod report;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::*;
use config::{Format, Overrides, RunConfig};
use output::Failure;
use report::ReportArgs;

#[derive(Parser, Debug)]
#[command(name = "opspectra", version, about = "Dilation operators on polynomial sequences")]
struct Cli {
    /// JSON run configuration
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, env = "OPSPECTRA_HORIZON")]
    horizon: Option<usize>,
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Comma-separated truncation sizes
    #[arg(long, global = true, value_delimiter = ',')]
    ladder: Option<Vec<usize>>,
    /// Directory for JSON/CSV artifacts
    #[arg(long = "out-dir", global = true)]
    out_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Synthesize the operator with eigenfunctions p and eigenvalues d
    Synth(SynthArgs),
    /// Solve degree by degree for eigenfunctions of a given operator
    Eigensolve(EigensolveArgs),
    /// The fourth-order operator without a fourth-degree eigenfunction
    Counterexample(CounterexampleArgs),
    /// Diagonal change of the synthesized operator under a change of d
    Perturb(PerturbArgs),
    /// Decide whether a dilation operator is a shift
    Shiftcheck(ShiftArgs),
    /// Matrix of a dilation operator in a coefficient space
    Matrix(MatrixArgs),
    /// Thin, blocked and closability verdicts for a matrix
    Classify(ClassifyArgs),
    /// Membership of a vector in the adjoint domain
    AdjointTest(AdjointArgs),
    /// Coefficients of the closure applied to a vector
    ClosureApply(ClosureArgs),
    /// Necessary conditions for a closure graph point
    Thm6(Thm6Args),
    /// Sufficient conditions and a witnessing sequence for a closure graph point
    Thm7(Thm7Args),
    /// Approximate eigenvectors and their residuals
    Eigenprobe(EigenprobeArgs),
    /// Eigenvalues of finite truncations
    Spectrum(SpectrumArgs),
    /// Markdown summary of artifacts
    Report(ReportArgs),
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<u8, Failure> {
    let cfg = RunConfig::resolve(
        cli.config.as_deref(),
        Overrides {
            horizon: cli.horizon,
            tolerance: cli.tolerance,
            ladder: cli.ladder,
            output_dir: cli.out_dir,
            format: cli.format,
        },
    )?;
    let artifact = match &cli.cmd {
        Cmd::Synth(a) => synth(a, &cfg)?,
        Cmd::Eigensolve(a) => eigensolve(a, &cfg)?,
        Cmd::Counterexample(a) => counterexample(a, &cfg)?,
        Cmd::Perturb(a) => perturb(a, &cfg)?,
        Cmd::Shiftcheck(a) => shiftcheck(a, &cfg)?,
        Cmd::Matrix(a) => matrix(a, &cfg)?,
        Cmd::Classify(a) => classify(a, &cfg)?,
        Cmd::AdjointTest(a) => adjoint_test(a, &cfg)?,
        Cmd::ClosureApply(a) => closure(a, &cfg)?,
        Cmd::Thm6(a) => thm6(a, &cfg)?,
        Cmd::Thm7(a) => thm7(a, &cfg)?,
        Cmd::Eigenprobe(a) => eigenprobe(a, &cfg)?,
        Cmd::Spectrum(a) => spectrum(a, &cfg)?,
        Cmd::Report(a) => {
            let md = report::render(a, &cfg)?;
            out.write_all(md.as_bytes()).map_err(|e| Failure::Usage(e.to_string()))?;
            if let Some(dir) = &cfg.output_dir {
                fs::create_dir_all(dir)
                    .and_then(|_| fs::write(dir.join("report.md"), &md))
                    .map_err(|e| Failure::Usage(e.to_string()))?;
            }
            return Ok(0);
        }
    };
    artifact.emit(&cfg, out)?;
    Ok(artifact.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match run(cli, &mut lock) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("{f}");
            ExitCode::from(f.exit_code())
        }
    }
}
