use std::path::PathBuf;
use std::process::ExitCode;

use chm::{run_and_report, RunConfig, Source, Workers};
use clap::{ArgGroup, Parser};

/// Estimate the centered Hausdorff measure of a self-similar set.
#[derive(Debug, Parser)]
#[command(name = "chm", version, group(ArgGroup::new("source").required(true).args(["gallery", "system"])))]
struct Args {
    /// Gallery system, e.g. cantor-1-3 or sierpinski(0.2)
    #[arg(long)]
    gallery: Option<String>,
    /// JSON system file
    #[arg(long)]
    system: Option<PathBuf>,
    /// Last generation to scan
    #[arg(long, default_value_t = 6)]
    g_max: usize,
    #[arg(long, default_value_t = 1e-12)]
    tie_tol: f64,
    /// Measure-bracket resolution relative to the diameter bound
    #[arg(long, default_value_t = 1e-6)]
    bracket_tol: f64,
    /// Largest point cloud allowed (accepts 2e6)
    #[arg(long, default_value = "2e6", value_parser = parse_count)]
    budget: usize,
    /// Worker threads, or "auto"
    #[arg(long, default_value = "auto", value_parser = parse_workers)]
    workers: Workers,
    /// Report file; defaults to stdout
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    csv: Option<PathBuf>,
    /// SVG plot of the last generation (1D and 2D only)
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Bracket the density of the final minimizing ball
    #[arg(long)]
    certify: bool,
    /// Run even when strong separation is not certified
    #[arg(long)]
    allow_unverified_ssc: bool,
}

fn parse_count(s: &str) -> Result<usize, String> {
    if let Ok(n) = s.parse::<usize>() {
        return Ok(n);
    }
    match s.parse::<f64>() {
        Ok(x) if x >= 1.0 && x.fract() == 0.0 && x <= usize::MAX as f64 => Ok(x as usize),
        _ => Err(format!("expected a positive integer, got {s}")),
    }
}

fn parse_workers(s: &str) -> Result<Workers, String> {
    if s == "auto" {
        return Ok(Workers::Auto);
    }
    match s.parse::<usize>() {
        Ok(k) if k > 0 => Ok(Workers::Fixed(k)),
        _ => Err(format!("expected a positive integer or 'auto', got {s}")),
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let source = match (args.gallery, args.system) {
        (Some(name), _) => Source::Gallery(name),
        (None, Some(path)) => Source::File(path),
        (None, None) => unreachable!("clap enforces the source group"),
    };
    let config = RunConfig {
        g_max: args.g_max,
        tie_tol: args.tie_tol,
        bracket_tol: args.bracket_tol,
        budget: args.budget,
        workers: args.workers,
        report: args.report,
        csv: args.csv,
        svg: args.svg,
        certify: args.certify,
        allow_unverified_ssc: args.allow_unverified_ssc,
        ..RunConfig::new(source)
    };
    match run_and_report(&config) {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("chm: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
