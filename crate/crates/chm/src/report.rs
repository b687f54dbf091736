//! Human-readable run report.

use std::fmt::Write as _;

use chm_core::{IfsSystem, Schedule, SscStatus};

/// Everything the report shows besides the schedule itself.
pub struct ReportContext<'a> {
    pub label: &'a str,
    pub system: &'a IfsSystem,
    pub ssc: SscStatus,
    pub warnings: &'a [String],
    /// `(generation, low, high)` from `--certify`, or the reason it failed.
    pub interval: Option<Result<(usize, f64, f64), String>>,
}

pub fn render(ctx: &ReportContext<'_>, schedule: &Schedule, aborted: Option<&str>) -> String {
    let sys = ctx.system;
    let geo = &schedule.geometry;
    let mut out = String::new();
    let _ = writeln!(out, "system: {} ({} maps in R^{})", ctx.label, sys.len(), sys.ambient_dim());
    let _ = writeln!(out, "similarity dimension s = {:.12}", sys.dimension());
    let _ = writeln!(
        out,
        "diameter R in [{:.9}, {:.9}], separation c in [{:.9}, {:.9}] (depth {})",
        geo.diameter_low, geo.diameter_up, geo.gap_low, geo.gap_up, geo.depth_used
    );
    let _ = writeln!(out, "strong separation: {}", ctx.ssc);
    for w in ctx.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "{:>3}  {:>12}  {:>12}  {:>14}  {:>14}  {:>12}  {:>9}  {:>12}",
        "g", "m_tilde", "d_tilde", "center", "witness", "ball mu_g", "certified", "upper bound"
    );
    for r in &schedule.records {
        let bound = r.certified_upper_bound.map_or_else(|| "-".to_string(), |b| format!("{b:.7}"));
        let _ = writeln!(
            out,
            "{:>3}  {:>12.7}  {:>12.7}  {:>14}  {:>14}  {:>12.9}  {:>9}  {:>12}",
            r.generation,
            r.m_tilde,
            r.d_tilde,
            r.center.code.to_string(),
            r.witness.code.to_string(),
            r.ball_discrete_measure,
            if r.certified { "yes" } else { "no" },
            bound
        );
    }
    let _ = writeln!(out);
    match (schedule.stabilized_at, schedule.records.last()) {
        (Some(g0), Some(last)) => {
            let _ = writeln!(out, "m̃ stabilized at generation {g0}, value {:.5}", last.m_tilde);
            let pairs: Vec<String> = last.canonical_minimizers().iter().map(|(c, w)| format!("({c}, {w})")).collect();
            let _ = writeln!(out, "minimizing pairs: {}", pairs.join(" "));
        }
        _ => {
            let _ = writeln!(out, "no generation completed");
        }
    }
    match schedule.best_upper_bound() {
        Some((g, b)) => {
            let _ = writeln!(out, "best certified upper bound {b:.5} at generation {g}");
        }
        None => {
            let _ = writeln!(out, "no certified upper bound");
        }
    }
    match &ctx.interval {
        Some(Ok((g, lo, hi))) => {
            let _ = writeln!(out, "certified density interval at generation {g}: [{lo:.7}, {hi:.7}]");
        }
        Some(Err(why)) => {
            let _ = writeln!(out, "certified density interval unavailable: {why}");
        }
        None => {}
    }
    if let Some(why) = aborted {
        let _ = writeln!(out, "aborted: {why}");
    }
    out
}
