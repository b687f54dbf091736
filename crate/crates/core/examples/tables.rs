//! Prints the per-generation minimizers of every catalog system.
//!
//! `cargo run --release -p chm-core --example tables [name] [g_max]`

use chm_core::{gallery, run_schedule, ScheduleOptions};

fn main() {
    let mut args = std::env::args().skip(1);
    let names: Vec<String> = match args.next() {
        Some(n) => vec![n],
        None => gallery::CATALOG.iter().map(|s| s.to_string()).collect(),
    };
    let g_max: Option<usize> = args.next().and_then(|g| g.parse().ok());
    for name in names {
        let entry = gallery::get(&name).expect("known system");
        let g = g_max.unwrap_or_else(|| entry.expected_table.len().saturating_sub(1).clamp(3, 5));
        let sched = run_schedule(&entry.system, g, &ScheduleOptions::default()).expect("schedule");
        println!("{}  s = {:.9}", entry.name, entry.system.dimension());
        for r in &sched.records {
            let expected = entry.expected_table.get(r.generation).map(|e| e.1);
            println!(
                "  g={} m={:.6} expected={:?} d={:.6} mu={:.8} center={} witness={} certified={} bound={:?} ties={}",
                r.generation,
                r.m_tilde,
                expected,
                r.d_tilde,
                r.ball_discrete_measure,
                r.center.code.canonical(),
                r.witness.code.canonical(),
                r.certified,
                r.certified_upper_bound,
                r.all_minimizers.len()
            );
        }
        println!("  stabilized at {:?}", sched.stabilized_at);
    }
}
