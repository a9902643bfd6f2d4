//! CSV tables. Floats use fixed notation with 6 fractional digits, every
//! table has a header row, and every line ends with `\n`.

use std::fmt::Write;

use crate::experiment::{EstimatorSummary, SummaryStats, SweepRow, TrialRecord, TrialSnapshot};
use crate::localizers::{localization_error, Diagnostics, Estimator};
use crate::network::NodeClass;

pub const NODES_HEADER: &str = "node_id,x,y,class,received_power";
pub const ESTIMATES_HEADER: &str = "method,x,y,error,fallback";
pub const DIAGNOSTICS_HEADER: &str =
    "mode,chord,low_id,low_x,low_y,low_power,high_id,high_x,high_y,high_power,d12,k,delta_l,t";
pub const TRIALS_HEADER: &str =
    "trial_index,jammer_x,jammer_y,boundary_count,method,mode,status,x,y,error";
pub const SUMMARY_HEADER: &str =
    "axis,value,method,mode,trials,failures,fallbacks,mean_error,std_error,median_error";

/// Fixed 6-digit formatting; `-0.000000` is written as `0.000000`.
pub fn fmt_f64(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".to_owned()
    } else {
        s
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

/// `node_id,x,y,class,received_power`; power is empty for non-boundary nodes.
pub fn nodes_csv(snapshot: &TrialSnapshot) -> String {
    let mut out = String::from(NODES_HEADER);
    out.push('\n');
    let mut observed = snapshot.observations.iter().peekable();
    for node in &snapshot.nodes {
        let class = snapshot.classes[&node.id];
        let power = if class == NodeClass::Boundary {
            let obs = observed
                .next_if(|o| o.node_id == node.id)
                .expect("observations follow node order");
            fmt_f64(obs.received_power)
        } else {
            String::new()
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            node.id,
            fmt_f64(node.position.x),
            fmt_f64(node.position.y),
            class,
            power
        );
    }
    out
}

/// `method,x,y,error,fallback`, one row per estimator. Failed estimators
/// leave the numeric columns empty.
pub fn estimates_csv(snapshot: &TrialSnapshot) -> String {
    let mut out = String::from(ESTIMATES_HEADER);
    out.push('\n');
    for (est, outcome) in &snapshot.outcomes {
        let method = estimator_column(*est);
        match outcome {
            Some(o) => {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    method,
                    fmt_f64(o.estimate.position.x),
                    fmt_f64(o.estimate.position.y),
                    fmt_f64(localization_error(&o.estimate, snapshot.jammer.position)),
                    o.fallback.is_some()
                );
            }
            None => {
                let _ = writeln!(out, "{method},,,,false");
            }
        }
    }
    out
}

/// Method column for single-trial tables: `CL`, `CJ`, `GJL(paper)` or `GJL(geometric)`.
fn estimator_column(est: Estimator) -> String {
    est.label()
}

/// Chord-level GJL diagnostics; header only when GJL fell back or failed.
pub fn diagnostics_csv(snapshot: &TrialSnapshot) -> String {
    let mut out = String::from(DIAGNOSTICS_HEADER);
    out.push('\n');
    for (_, outcome) in &snapshot.outcomes {
        let Some(o) = outcome else { continue };
        let Diagnostics::Gjl(diag) = &o.estimate.diagnostics else {
            continue;
        };
        for (i, c) in diag.chords.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                diag.mode,
                i + 1,
                c.low.node_id,
                fmt_f64(c.low.position.x),
                fmt_f64(c.low.position.y),
                fmt_f64(c.low.received_power),
                c.high.node_id,
                fmt_f64(c.high.position.x),
                fmt_f64(c.high.position.y),
                fmt_f64(c.high.received_power),
                fmt_f64(c.d12),
                fmt_f64(c.k),
                fmt_f64(c.delta_l),
                fmt_f64(c.t)
            );
        }
    }
    out
}

/// Long-format per-trial table: one row per (trial, estimator).
pub fn trials_csv(records: &[TrialRecord]) -> String {
    let mut out = String::from(TRIALS_HEADER);
    out.push('\n');
    for r in records {
        for (est, status) in &r.results {
            let (x, y) = match status.estimate() {
                Some(p) => (fmt_f64(p.x), fmt_f64(p.y)),
                None => (String::new(), String::new()),
            };
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                r.trial_index,
                fmt_f64(r.jammer_truth.x),
                fmt_f64(r.jammer_truth.y),
                r.boundary_count,
                est.method(),
                est.mode_label(),
                status.label(),
                x,
                y,
                fmt_opt(status.error())
            );
        }
    }
    out
}

/// `axis,value,method,mode,trials,failures,fallbacks,mean_error,std_error,median_error`.
pub fn summary_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for row in rows {
        push_summary_line(&mut out, row.axis.as_str(), &row.value.label(), &row.summary);
    }
    out
}

/// Summary table of a single experiment, labelled with a fixed axis and value.
pub fn experiment_summary_csv(axis: &str, value: &str, summary: &SummaryStats) -> String {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for row in &summary.rows {
        push_summary_line(&mut out, axis, value, row);
    }
    out
}

fn push_summary_line(out: &mut String, axis: &str, value: &str, s: &EstimatorSummary) {
    let _ = writeln!(
        out,
        "{},{},{},{},{},{},{},{},{},{}",
        axis,
        value,
        s.estimator.method(),
        s.estimator.mode_label(),
        s.trials,
        s.failures,
        s.fallbacks,
        fmt_opt(s.mean_error),
        fmt_opt(s.std_error),
        fmt_opt(s.median_error)
    );
}

/// Parses a summary table back into `(method, mode, mean_error)` triples.
pub fn parse_summary_means(csv: &str) -> Vec<(String, String, Option<f64>)> {
    csv.lines()
        .skip(1)
        .filter(|l| !l.is_empty())
        .map(|line| {
            let cols: Vec<&str> = line.split(',').collect();
            (
                cols[2].to_owned(),
                cols[3].to_owned(),
                cols[7].parse::<f64>().ok(),
            )
        })
        .collect()
}
