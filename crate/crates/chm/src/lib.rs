//! Files, reports and the command-line driver around [`chm_core`].

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use chm_core::{
    certified_density_interval, estimate_geometry, gallery, run_schedule_with, BracketOptions, IfsSystem, PointCloud,
    ScanOptions, Schedule, ScheduleOptions, SscStatus,
};
use thiserror::Error;

pub mod input;
pub mod report;
pub mod svg;
pub mod table;

pub use input::{parse_system_file, parse_system_str};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Input { path: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("strong separation is {0}; pass --allow-unverified-ssc to run anyway")]
    Ssc(SscStatus),
    #[error("computation aborted: {0}")]
    Aborted(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path}: {source}")]
    Csv { path: String, source: csv::Error },
}

impl CliError {
    /// 2 for bad input, 1 for anything that stops a valid run.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input { .. } | CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Gallery(String),
    File(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Workers {
    Auto,
    Fixed(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub source: Source,
    pub g_max: usize,
    pub tie_tol: f64,
    /// Bracket resolution relative to the diameter bound `R_up`.
    pub bracket_tol: f64,
    /// Largest point cloud allowed.
    pub budget: usize,
    pub workers: Workers,
    /// `None` writes the report to stdout.
    pub report: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub certify: bool,
    pub allow_unverified_ssc: bool,
}

impl RunConfig {
    pub fn new(source: Source) -> Self {
        RunConfig {
            source,
            g_max: 6,
            tie_tol: 1e-12,
            bracket_tol: 1e-6,
            budget: 2_000_000,
            workers: Workers::Auto,
            report: None,
            csv: None,
            svg: None,
            certify: false,
            allow_unverified_ssc: false,
        }
    }

    fn validate(&self) -> Result<(), CliError> {
        for (name, v) in [("--tie-tol", self.tie_tol), ("--bracket-tol", self.bracket_tol)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError::Usage(format!("{name} must be a positive number, got {v}")));
            }
        }
        if self.budget == 0 {
            return Err(CliError::Usage("--budget must be positive".into()));
        }
        if self.workers == Workers::Fixed(0) {
            return Err(CliError::Usage("--workers must be positive".into()));
        }
        Ok(())
    }

    pub fn schedule_options(&self) -> ScheduleOptions {
        ScheduleOptions {
            scan: ScanOptions { tie_tol: self.tie_tol, ..ScanOptions::default() },
            bracket: BracketOptions { rel_tol: self.bracket_tol, tie_tol: self.tie_tol, ..BracketOptions::default() },
            max_points: self.budget,
            geometry_depth: None,
        }
    }
}

/// Result of a completed run.
#[derive(Debug)]
pub struct RunSummary {
    pub schedule: Schedule,
    pub report: String,
}

fn create(path: &PathBuf) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn load(source: &Source) -> Result<(String, IfsSystem, Vec<String>), CliError> {
    match source {
        Source::Gallery(name) => {
            let entry =
                gallery::get(name).map_err(|e| CliError::Input { path: "--gallery".into(), message: e.to_string() })?;
            Ok((entry.name, entry.system, entry.warnings))
        }
        Source::File(path) => Ok((path.display().to_string(), parse_system_file(path)?, Vec::new())),
    }
}

/// Runs the schedule and writes the requested outputs.
///
/// On an abort after some generations finished, the CSV keeps those rows and
/// the report is still written, then the error is returned.
pub fn run_and_report(config: &RunConfig) -> Result<RunSummary, CliError> {
    config.validate()?;
    let (label, system, warnings) = load(&config.source)?;
    if config.svg.is_some() && system.ambient_dim() > 2 {
        return Err(CliError::Usage(format!(
            "SVG output supports 1D and 2D systems only; this system lives in R^{}",
            system.ambient_dim()
        )));
    }
    let pool = match config.workers {
        Workers::Auto => rayon::ThreadPoolBuilder::new(),
        Workers::Fixed(k) => rayon::ThreadPoolBuilder::new().num_threads(k),
    }
    .build()
    .map_err(|e| CliError::Aborted(e.to_string()))?;
    pool.install(|| execute(config, &label, &system, &warnings))
}

fn execute(config: &RunConfig, label: &str, system: &IfsSystem, warnings: &[String]) -> Result<RunSummary, CliError> {
    let opts = config.schedule_options();
    let geometry =
        estimate_geometry(system, system.default_geometry_depth()).map_err(|e| CliError::Aborted(e.to_string()))?;
    let ssc = geometry.ssc_status();
    if ssc != SscStatus::Certified && !config.allow_unverified_ssc {
        return Err(CliError::Ssc(ssc));
    }

    let mut csv_out = match &config.csv {
        Some(path) => Some(
            table::RowWriter::new(create(path)?)
                .map_err(|source| CliError::Csv { path: path.display().to_string(), source })?,
        ),
        None => None,
    };
    let mut csv_error = None;
    let outcome = run_schedule_with(system, config.g_max, &opts, |rec| {
        if let (Some(w), None) = (csv_out.as_mut(), csv_error.as_ref()) {
            if let Err(e) = w.write(rec) {
                csv_error = Some(e);
            }
        }
    });
    if let (Some(source), Some(path)) = (csv_error, &config.csv) {
        return Err(CliError::Csv { path: path.display().to_string(), source });
    }
    drop(csv_out);

    let (schedule, aborted) = match outcome {
        Ok(s) => (s, None),
        Err(failure) => match failure.partial {
            Some(partial) => (*partial, Some(failure.error.to_string())),
            None => return Err(CliError::Aborted(failure.error.to_string())),
        },
    };

    let interval = match (config.certify, schedule.records.last()) {
        (true, Some(last)) => Some(
            certified_density_interval(system, &schedule.geometry, &last.center.coords, last.d_tilde, &opts.bracket)
                .map(|(lo, hi)| (last.generation, lo, hi))
                .map_err(|e| e.to_string()),
        ),
        _ => None,
    };

    let ctx = report::ReportContext { label, system, ssc, warnings, interval };
    let text = report::render(&ctx, &schedule, aborted.as_deref());
    match &config.report {
        Some(path) => {
            let mut f = create(path)?;
            f.write_all(text.as_bytes())
                .and_then(|_| f.flush())
                .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        }
        None => print!("{text}"),
    }

    if let (Some(path), Some(last)) = (&config.svg, schedule.records.last()) {
        let cloud = PointCloud::generation_of(system, last.generation, config.budget)
            .map_err(|e| CliError::Aborted(e.to_string()))?;
        let mut f = create(path)?;
        f.write_all(svg::render(&cloud, last)?.as_bytes())
            .and_then(|_| f.flush())
            .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    }

    match aborted {
        Some(why) => Err(CliError::Aborted(why)),
        None => Ok(RunSummary { schedule, report: text }),
    }
}
