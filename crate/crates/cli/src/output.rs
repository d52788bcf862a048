//! Trace, final-set, and summary writers.
//!
//! The CSV trace schema is fixed: `iter,value,layer_sizes,point_0_c0,...`
//! with layer sizes encoded as `8+5+2`. The JSON format mirrors the CSV
//! columns as an array of flat objects with numbers at 17 significant
//! digits. Given an identical manifest (seed included), the written bytes
//! are identical.

use layered_ascent::ascent::TraceRecord;
use std::fmt::Write as _;

use crate::manifest::{indicator_label, OutputFormat, RunManifest};
use crate::runner::{sampled_rows, RunReport};

pub fn layer_profile_string(sizes: &[usize]) -> String {
    sizes
        .iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join("+")
}

fn csv_header(mu: usize, dim: usize) -> String {
    let mut header = String::from("iter,value,layer_sizes");
    for i in 0..mu {
        for c in 0..dim {
            write!(header, ",point_{i}_c{c}").unwrap();
        }
    }
    header
}

/// Shortest round-trip decimal form; bitwise deterministic per value.
fn csv_number(v: f64) -> String {
    format!("{v}")
}

/// Seventeen significant digits, enough to reproduce any f64 exactly.
fn json_number(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn trace_csv(trace: &[TraceRecord], stride: usize) -> String {
    let mu = trace[0].points.len();
    let dim = trace[0].points[0].len();
    let mut out = csv_header(mu, dim);
    out.push('\n');
    for record in sampled_rows(trace, stride) {
        write!(
            out,
            "{},{},{}",
            record.iteration,
            csv_number(record.value),
            layer_profile_string(&record.layer_sizes)
        )
        .unwrap();
        for point in &record.points {
            for v in point {
                write!(out, ",{}", csv_number(*v)).unwrap();
            }
        }
        out.push('\n');
    }
    out
}

pub fn trace_json(trace: &[TraceRecord], stride: usize) -> String {
    let mut out = String::from("[\n");
    let rows = sampled_rows(trace, stride);
    for (n, record) in rows.iter().enumerate() {
        write!(
            out,
            "  {{\"iter\": {}, \"value\": {}, \"layer_sizes\": \"{}\"",
            record.iteration,
            json_number(record.value),
            layer_profile_string(&record.layer_sizes)
        )
        .unwrap();
        for (i, point) in record.points.iter().enumerate() {
            for (c, v) in point.iter().enumerate() {
                write!(out, ", \"point_{i}_c{c}\": {}", json_number(*v)).unwrap();
            }
        }
        out.push('}');
        if n + 1 < rows.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str("]\n");
    out
}

/// Final objective vectors, one CSV row per labelled point.
pub fn final_set_csv(points: &[Vec<f64>]) -> String {
    let mut out = String::new();
    for point in points {
        let row: Vec<String> = point.iter().map(|v| csv_number(*v)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn summary_text(manifest: &RunManifest, seed: u64, report: &RunReport) -> String {
    let mut out = String::new();
    writeln!(out, "run: {}", report.label).unwrap();
    writeln!(
        out,
        "problem: {} (gamma={}), indicator: {}, optimizer: {:?}",
        manifest.problem,
        manifest.gamma,
        indicator_label(manifest.indicator),
        manifest.optimizer
    )
    .unwrap();
    writeln!(
        out,
        "mu: {}  seed: {}  iterations: {}  accepted: {}",
        report.result.trace[0].points.len(),
        seed,
        report.iterations,
        report.accepted
    )
    .unwrap();
    for (tag, eval) in [("initial", &report.initial), ("final", &report.final_eval)] {
        write!(
            out,
            "{tag}: J={:.6}  layers={}  Mag(front)={:.6}  HV(front)={:.6}",
            eval.surrogate,
            layer_profile_string(&eval.layer_profile),
            eval.first_layer_mag,
            eval.first_layer_hv
        )
        .unwrap();
        if let Some(igd) = eval.igd {
            write!(out, "  IGD={igd:.6}").unwrap();
        }
        out.push('\n');
        for (l, (hv, mag)) in eval.layer_values.iter().enumerate() {
            writeln!(out, "  layer {}: HV={hv:.6} Mag={mag:.6}", l + 1).unwrap();
        }
    }
    writeln!(out, "layer profile at stride {}:", manifest.sample_stride).unwrap();
    for record in sampled_rows(&report.result.trace, manifest.sample_stride) {
        writeln!(
            out,
            "  {:>5}  J={:.6}  {}{}",
            record.iteration,
            record.value,
            layer_profile_string(&record.layer_sizes),
            if record.perturbation { "  (perturbation)" } else { "" }
        )
        .unwrap();
    }
    out
}

pub fn trace_file_name(format: OutputFormat) -> &'static str {
    match format {
        OutputFormat::Csv => "trace.csv",
        OutputFormat::Json => "trace.json",
    }
}

pub fn render_trace(trace: &[TraceRecord], stride: usize, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => trace_csv(trace, stride),
        OutputFormat::Json => trace_json(trace, stride),
    }
}

/// Two-run comparison table in the style of the cross-evaluation summaries.
pub fn compare_table(a: &RunReport, b: &RunReport) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{:<24} {:>6} {:>6} {:>10} {:>10} {:>10} {:>10} {:>10}",
        "case", "iters", "acc.", "Mag0", "Magf", "HV0", "HVf", "IGDf"
    )
    .unwrap();
    for report in [a, b] {
        writeln!(
            out,
            "{:<24} {:>6} {:>6} {:>10.5} {:>10.5} {:>10.5} {:>10.5} {:>10}",
            report.label,
            report.iterations,
            report.accepted,
            report.initial.first_layer_mag,
            report.final_eval.first_layer_mag,
            report.initial.first_layer_hv,
            report.final_eval.first_layer_hv,
            report
                .final_eval
                .igd
                .map(|v| format!("{v:.5}"))
                .unwrap_or_else(|| "-".into())
        )
        .unwrap();
    }
    out
}
