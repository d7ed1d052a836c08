//! `pf analyze` and `pf synth`.
//!
//! Both commands write their machine-readable output to files only. The
//! analyze summary goes to `out` and every diagnostic to `err`, so callers
//! (and tests) can capture the two streams separately.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use pf_core::analysis::analyze_document;
use pf_core::annotation::{
    canonical, parse_annotations, render_overlay, write_annotations, write_report,
};
use pf_core::scene::{generate_scene, SceneSpec, SceneTemplate};
use pf_core::{Verdict, TOOL_VERSION};

/// Process exit status of a command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Consistent,
    Inconsistent,
    /// Indeterminate verdict or any input error.
    Indeterminate,
}

impl ExitStatus {
    pub fn code(self) -> u8 {
        match self {
            ExitStatus::Consistent => 0,
            ExitStatus::Inconsistent => 1,
            ExitStatus::Indeterminate => 2,
        }
    }
}

impl From<Verdict> for ExitStatus {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Consistent => ExitStatus::Consistent,
            Verdict::Inconsistent => ExitStatus::Inconsistent,
            Verdict::Indeterminate => ExitStatus::Indeterminate,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct AnalyzeArgs {
    pub file: PathBuf,
    pub tolerance_px: Option<f64>,
    pub report: Option<PathBuf>,
    pub overlay: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct SynthArgs {
    pub template: String,
    pub seed: u64,
    pub noise_px: f64,
    pub inject_yaw_deg: Option<f64>,
    pub inject_shift_px: Option<f64>,
    pub out: PathBuf,
}

/// Paths written by a successful `synth`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthOutput {
    pub document: PathBuf,
    pub truth: PathBuf,
}

pub fn run_analyze(args: &AnalyzeArgs, out: &mut dyn Write, err: &mut dyn Write) -> ExitStatus {
    match analyze(args, out) {
        Ok(status) => status,
        Err(e) => {
            let _ = writeln!(err, "pf analyze: {e}");
            ExitStatus::Indeterminate
        }
    }
}

fn analyze(args: &AnalyzeArgs, out: &mut dyn Write) -> Result<ExitStatus, CliError> {
    if let Some(t) = args.tolerance_px {
        if !(t.is_finite() && t > 0.0) {
            return Err(CliError::Usage(format!(
                "--tolerance-px must be positive, got {t}"
            )));
        }
    }
    let text = fs::read_to_string(&args.file).map_err(|e| CliError::io(&args.file, e))?;
    let doc = parse_annotations(&text).map_err(|e| CliError::Input {
        path: args.file.clone(),
        message: e.to_string(),
    })?;
    let report = analyze_document(&doc, args.tolerance_px, TOOL_VERSION);
    if let Some(path) = &args.report {
        write_file(path, &write_report(&report))?;
    }
    if let Some(path) = &args.overlay {
        write_file(path, &render_overlay(&doc, &report))?;
    }
    for line in report.summary_lines() {
        writeln!(out, "{line}").map_err(|e| CliError::io(Path::new("<stdout>"), e))?;
    }
    writeln!(out, "OVERALL {}", report.overall_verdict)
        .map_err(|e| CliError::io(Path::new("<stdout>"), e))?;
    Ok(report.overall_verdict.into())
}

pub fn run_synth(args: &SynthArgs, err: &mut dyn Write) -> ExitStatus {
    match synth(args) {
        Ok(_) => ExitStatus::Consistent,
        Err(e) => {
            let _ = writeln!(err, "pf synth: {e}");
            ExitStatus::Indeterminate
        }
    }
}

/// Generates the scene and writes `<template>-<seed>.json` with its
/// `<template>-<seed>.truth.json` sidecar into `args.out`.
pub fn synth(args: &SynthArgs) -> Result<SynthOutput, CliError> {
    let template: SceneTemplate = args
        .template
        .parse()
        .map_err(|e: pf_core::scene::SceneError| CliError::Usage(e.to_string()))?;
    let mut spec = SceneSpec::new(template);
    if let Some(yaw) = args.inject_yaw_deg {
        spec = spec.with_yaw(yaw);
    }
    if let Some(shift) = args.inject_shift_px {
        spec = spec.with_shift(shift);
    }
    let scene = generate_scene(&spec, args.seed, args.noise_px)
        .map_err(|e| CliError::Usage(e.to_string()))?;

    fs::create_dir_all(&args.out).map_err(|e| CliError::io(&args.out, e))?;
    let stem = format!("{template}-{}", args.seed);
    let output = SynthOutput {
        document: args.out.join(format!("{stem}.json")),
        truth: args.out.join(format!("{stem}.truth.json")),
    };
    write_file(&output.document, &write_annotations(&scene.annotations))?;
    write_file(
        &output.truth,
        &canonical::to_canonical_string(&scene.ground_truth),
    )?;
    Ok(output)
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{}: {message}", path.display())]
    Input { path: PathBuf, message: String },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source: e,
        }
    }
}
