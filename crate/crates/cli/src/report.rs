//! Output assembly: the self-describing manifest header, fixed-format CSV
//! rows, and the output sink.
//!
//! Probabilities are printed with 6 decimal places (lossless at the default
//! 800-trial resolution of 1/800) and counts as plain integers, so re-runs
//! with the same seed produce byte-identical bodies.

use std::io::Write;
use std::path::Path;
use std::time::Duration;

use keygraph::montecarlo::{Estimate, SweepCell};

pub fn fmt_prob(value: f64) -> String {
    format!("{value:.6}")
}

fn csv_escape(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

/// Comment-line header carried at the top of every output so results are
/// self-describing and reproducible.
pub struct Manifest {
    pub command: &'static str,
    pub seed: u64,
    pub config_echo: String,
}

impl Manifest {
    pub fn render(&self, duration: Duration) -> String {
        let mut text = String::new();
        text.push_str(&format!("# keygraph {}\n", env!("CARGO_PKG_VERSION")));
        text.push_str(&format!("# command: {}\n", self.command));
        text.push_str(&format!("# seed: {}\n", self.seed));
        text.push_str(&format!("# config: {}\n", self.config_echo));
        text.push_str(&format!("# duration_ms: {}\n", duration.as_millis()));
        text
    }
}

pub const SWEEP_HEADER: &str =
    "k1,k2,alpha,rho,model,trials,p_no_isolated,p_connected,ci95,critical_k1,error";

fn sweep_row(
    cell: &SweepCell,
    model: &str,
    rho: Option<f64>,
    estimate: Option<&Estimate>,
) -> String {
    let k2 = cell.ring_sizes.last().copied().unwrap_or(cell.k1);
    let rho_text = rho.map(fmt_prob).unwrap_or_default();
    let critical = cell
        .critical_k1
        .map(|k| k.to_string())
        .unwrap_or_default();
    let error = cell.error.as_deref().map(csv_escape).unwrap_or_default();
    match estimate {
        Some(estimate) => format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            cell.k1,
            k2,
            fmt_prob(cell.alpha),
            rho_text,
            model,
            estimate.trials(),
            fmt_prob(estimate.p_no_isolated()),
            fmt_prob(estimate.p_connected()),
            fmt_prob(estimate.ci_half_width_95()),
            critical,
            error,
        ),
        None => format!(
            "{},{},{},{},{},,,,,{},{}",
            cell.k1,
            k2,
            fmt_prob(cell.alpha),
            rho_text,
            model,
            critical,
            error,
        ),
    }
}

/// CSV rows for one sweep cell: one `onoff` (or `disk`) row, plus a `disk`
/// row when the cell ran the paired twin. Failed cells emit a single row
/// with the error column filled.
pub fn sweep_cell_rows(cell: &SweepCell, primary_model: &str) -> Vec<String> {
    match &cell.estimates {
        Some(estimates) => {
            let primary_rho = if primary_model == "disk" { cell.rho } else { None };
            let mut rows = vec![sweep_row(
                cell,
                primary_model,
                primary_rho,
                Some(&estimates.primary),
            )];
            if let Some(twin) = &estimates.disk_twin {
                rows.push(sweep_row(cell, "disk", cell.rho, Some(twin)));
            }
            rows
        }
        None => vec![sweep_row(cell, primary_model, None, None)],
    }
}

/// Writes manifest plus body to `--out` or stdout.
pub fn emit(out: Option<&Path>, manifest: &Manifest, duration: Duration, body: &str) -> std::io::Result<()> {
    let text = format!("{}{}", manifest.render(duration), body);
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())
        }
    }
}
