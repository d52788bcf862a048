//! Command-line driver for layered set-indicator ascent runs.
//!
//! `run` executes one manifest (a preset, a TOML file, or bare flags) and
//! writes a sampled trace, the final objective set, and a summary with
//! cross-evaluations of both indicators and IGD. `compare` executes two
//! manifests that share a problem and seed and prints their
//! cross-evaluations side by side.

use std::path::Path;

use thiserror::Error;

pub mod manifest;
pub mod output;
pub mod presets;
pub mod runner;

pub use manifest::RunManifest;
pub use runner::{execute, resolve, RunReport};

#[derive(Debug, Error)]
pub enum CliError {
    /// Invalid arguments or an invalid preset/flag combination; exit code 2.
    #[error("{0}")]
    Usage(String),
    /// Failure while executing or writing results; exit code 3.
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }
}

/// Runs a manifest and writes its files under `out_dir` when given.
/// Returns the printed summary.
pub fn run_to_files(manifest: &RunManifest, out_dir: Option<&Path>) -> Result<String, CliError> {
    let resolved = resolve(manifest)?;
    let report = execute(&resolved)?;
    let summary = output::summary_text(manifest, resolved.seed, &report);
    if let Some(dir) = out_dir {
        write_outputs(manifest, &report, dir, &summary)?;
    }
    Ok(summary)
}

fn write_outputs(
    manifest: &RunManifest,
    report: &RunReport,
    dir: &Path,
    summary: &str,
) -> Result<(), CliError> {
    let io_err = |e: std::io::Error| CliError::Runtime(format!("cannot write output: {e}"));
    std::fs::create_dir_all(dir).map_err(io_err)?;
    let trace = output::render_trace(
        &report.result.trace,
        manifest.sample_stride,
        manifest.format,
    );
    std::fs::write(dir.join(output::trace_file_name(manifest.format)), trace).map_err(io_err)?;

    let last = report.result.trace.last().unwrap();
    let objective = last
        .objective_points
        .clone()
        .unwrap_or_else(|| last.points.clone());
    std::fs::write(
        dir.join("final_set.csv"),
        output::final_set_csv(&objective),
    )
    .map_err(io_err)?;
    if last.objective_points.is_some() {
        std::fs::write(
            dir.join("final_decisions.csv"),
            output::final_set_csv(&last.points),
        )
        .map_err(io_err)?;
    }
    std::fs::write(dir.join("summary.txt"), summary).map_err(io_err)?;
    Ok(())
}

/// Runs two manifests that must share a problem and seed; returns the
/// comparison table.
pub fn compare_to_table(
    a: &RunManifest,
    b: &RunManifest,
    out_dir: Option<&Path>,
) -> Result<String, CliError> {
    if a.problem != b.problem {
        return Err(CliError::Usage(format!(
            "compared runs must share a problem, got `{}` and `{}`",
            a.problem, b.problem
        )));
    }
    let resolved_a = resolve(a)?;
    let resolved_b = resolve(b)?;
    if resolved_a.seed != resolved_b.seed {
        return Err(CliError::Usage(format!(
            "compared runs must share a seed, got {} and {}",
            resolved_a.seed, resolved_b.seed
        )));
    }
    let report_a = execute(&resolved_a)?;
    let report_b = execute(&resolved_b)?;
    let table = output::compare_table(&report_a, &report_b);
    if let Some(dir) = out_dir {
        let io_err = |e: std::io::Error| CliError::Runtime(format!("cannot write output: {e}"));
        std::fs::create_dir_all(dir).map_err(io_err)?;
        std::fs::write(dir.join("compare.txt"), &table).map_err(io_err)?;
    }
    Ok(table)
}
