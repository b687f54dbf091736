#![cfg_attr(not(feature = "std"), no_std)]

//! Centered Hausdorff measure of self-similar sets under the strong
//! separation condition.
//!
//! The crate builds the coded point clouds `A_g` of an iterated function
//! system of similitudes together with their discrete measures `mu_g`,
//! minimizes the discrete inverse density `(2d)^s / mu_g(B(x, d))` over
//! admissible center/witness pairs for every generation, and turns the
//! minimizing balls into rigorous upper bounds using a cylinder-subdivision
//! bracket of the invariant measure.
//!
//! The core is `no_std` (it needs `alloc`). The `parallel` feature (on by
//! default) pulls in `std` and rayon and spreads the per-center scan over the
//! active thread pool; results are identical for any worker count.
//!
//! ```
//! use chm_core::{gallery, scan::{run_schedule, ScheduleOptions}};
//!
//! let entry = gallery::get("cantor-1-3").unwrap();
//! let schedule = run_schedule(&entry.system, 3, &ScheduleOptions::default()).unwrap();
//! let last = schedule.records.last().unwrap();
//! assert!((last.m_tilde - 1.19902).abs() < 1e-5);
//! assert_eq!(schedule.stabilized_at, Some(2));
//! ```

extern crate alloc;

pub mod cloud;
pub mod code;
mod error;
pub mod gallery;
mod linalg;
pub mod oracle;
pub mod scan;
pub mod similitude;
mod sum;
pub mod system;

pub use cloud::{CodedPoint, PointCloud, PointRef, DEFAULT_MAX_POINTS};
pub use code::Code;
pub use error::Error;
pub use oracle::{certified_density_interval, measure_bracket, BracketOptions, MeasureBracket};
pub use scan::{
    ball_discrete_measure, certify_record, run_schedule, run_schedule_with, scan_generation, DensityRecord,
    ScanOptions, Schedule, ScheduleFailure, ScheduleOptions,
};
pub use similitude::Similitude;
pub use system::{check_ssc, estimate_geometry, GeometryBounds, IfsSystem, SscStatus};

/// Default tie tolerance for comparing distances: `|a - b| <= tol * max(1, a)`.
pub const DEFAULT_TIE_TOL: f64 = 1e-12;

/// `radius + tol * max(1, radius)`: the numerical closure of a closed ball.
#[inline]
pub(crate) fn closed_limit(radius: f64, tol: f64) -> f64 {
    radius + tol * if radius > 1.0 { radius } else { 1.0 }
}
