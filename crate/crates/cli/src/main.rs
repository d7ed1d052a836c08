use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pf_cli::{run_analyze, run_synth, AnalyzeArgs, SynthArgs};

#[derive(Parser)]
#[command(
    name = "pf",
    version,
    about = "Perspective-consistency checks for annotated images"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze an annotation document. Exit status: 0 consistent,
    /// 1 inconsistent, 2 indeterminate or input error.
    Analyze {
        file: PathBuf,
        #[arg(long = "tolerance-px", value_name = "F")]
        tolerance_px: Option<f64>,
        #[arg(long, value_name = "PATH")]
        report: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        overlay: Option<PathBuf>,
    },
    /// Generate a synthetic scene and its ground-truth sidecar.
    Synth {
        /// tiled-floor, cubes-shadows or mirror-boxes
        #[arg(long)]
        template: String,
        #[arg(long)]
        seed: u64,
        #[arg(long = "noise-px", value_name = "F", default_value_t = 0.0)]
        noise_px: f64,
        #[arg(
            long = "inject-yaw-deg",
            value_name = "F",
            allow_negative_numbers = true
        )]
        inject_yaw_deg: Option<f64>,
        #[arg(
            long = "inject-shift-px",
            value_name = "F",
            allow_negative_numbers = true
        )]
        inject_shift_px: Option<f64>,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let mut out = std::io::stdout().lock();
    let mut err = std::io::stderr().lock();
    let status = match cli.command {
        Command::Analyze {
            file,
            tolerance_px,
            report,
            overlay,
        } => run_analyze(
            &AnalyzeArgs {
                file,
                tolerance_px,
                report,
                overlay,
            },
            &mut out,
            &mut err,
        ),
        Command::Synth {
            template,
            seed,
            noise_px,
            inject_yaw_deg,
            inject_shift_px,
            out: dir,
        } => run_synth(
            &SynthArgs {
                template,
                seed,
                noise_px,
                inject_yaw_deg,
                inject_shift_px,
                out: dir,
            },
            &mut err,
        ),
    };
    ExitCode::from(status.code())
}
