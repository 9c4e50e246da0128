//! Per-frame trace rows and metric report text.

use std::io::{self, Write};

use crate::detect::SlipState;
use crate::eval::MetricsReport;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub timestamp: f64,
    pub normal: f64,
    pub shear: f64,
    pub moment_z: f64,
    pub stick_ratio: Option<f64>,
    pub state_baseline: SlipState,
    pub state_stick_ratio: SlipState,
    pub truth: Option<SlipState>,
}

pub const TRACE_HEADER: &str =
    "timestamp_s,f_n,f_t,m_z,stick_ratio,state_baseline,state_stick_ratio,truth";

/// Writes the trace as comma-separated text; absent values are empty cells.
pub fn write_trace_csv<W: Write>(records: &[TraceRecord], mut out: W) -> io::Result<()> {
    writeln!(out, "{TRACE_HEADER}")?;
    for r in records {
        let sr = r.stick_ratio.map(|v| v.to_string()).unwrap_or_default();
        let truth = r.truth.map(|s| s.as_str()).unwrap_or("");
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.timestamp,
            r.normal,
            r.shear,
            r.moment_z,
            sr,
            r.state_baseline,
            r.state_stick_ratio,
            truth
        )?;
    }
    out.flush()
}

fn metric(value: Option<f64>) -> String {
    value
        .map(|v| v.to_string())
        .unwrap_or_else(|| "absent".into())
}

/// Writes reports as `key = value` lines, one `[detector]` section each.
pub fn write_report<W: Write>(reports: &[MetricsReport], mut out: W) -> io::Result<()> {
    for (i, r) in reports.iter().enumerate() {
        if i > 0 {
            writeln!(out)?;
        }
        let c = &r.counts;
        writeln!(out, "[{}]", r.detector)?;
        writeln!(out, "run_id = {}", r.run_id)?;
        writeln!(out, "runs = {}", r.runs)?;
        writeln!(out, "mu = {}", r.config.mu)?;
        writeln!(out, "sr_threshold = {}", r.config.sr_threshold)?;
        writeln!(out, "contact_epsilon = {}", r.config.contact_epsilon)?;
        writeln!(out, "debounce_k = {}", r.config.debounce_k)?;
        writeln!(out, "tp = {}", c.true_pos)?;
        writeln!(out, "fp = {}", c.false_pos)?;
        writeln!(out, "tn = {}", c.true_neg)?;
        writeln!(out, "fn = {}", c.false_neg)?;
        writeln!(out, "ignored = {}", c.ignored)?;
        writeln!(out, "unlabeled = {}", c.unlabeled)?;
        writeln!(out, "accuracy = {}", metric(r.accuracy))?;
        writeln!(out, "precision = {}", metric(r.precision))?;
        writeln!(out, "recall = {}", metric(r.recall))?;
    }
    out.flush()
}
