//! The per-generation minimization of the discrete inverse density
//! `h_g(x, d) = (2d)^s / mu_g(B(x, d))` over admissible pairs, its
//! certification, and the schedule driving it over generations.
//!
//! A pair (center, witness) is admissible when the first code symbols
//! differ, i.e. the two points lie in different first-level cylinders.
//! For each center every distance to the cloud is sorted; the discrete
//! measure at a candidate distance `d` is the total weight of points at
//! distance `<= d + tol * max(1, d)`, so tie groups on the sphere are
//! counted in full.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;

use crate::cloud::{CodedPoint, PointCloud, DEFAULT_MAX_POINTS};
use crate::oracle::{measure_bracket, BracketOptions};
use crate::sum::CompensatedSum;
use crate::{closed_limit, estimate_geometry, linalg, Code, Error, GeometryBounds, IfsSystem, DEFAULT_TIE_TOL};

/// Relative tolerance within which pairs count as joint minimizers.
pub const MINIMIZER_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    /// Distances `a <= b` are tied when `b - a <= tie_tol * max(1, a)`.
    pub tie_tol: f64,
    /// Pairs within this relative distance of the minimum are all reported.
    pub minimizer_tol: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self { tie_tol: DEFAULT_TIE_TOL, minimizer_tol: MINIMIZER_TOL }
    }
}

/// The minimizer of one generation.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityRecord {
    pub generation: usize,
    /// `(2 d_tilde)^s / ball_discrete_measure`.
    pub m_tilde: f64,
    pub center: CodedPoint,
    pub witness: CodedPoint,
    /// Distance from center to witness, the radius of the minimizing ball.
    pub d_tilde: f64,
    /// `mu_g(B(center, d_tilde))`.
    pub ball_discrete_measure: f64,
    pub certified: bool,
    pub certified_upper_bound: Option<f64>,
    /// Every (center, witness) code pair within the minimizer tolerance
    /// of `m_tilde`, sorted lexicographically.
    pub all_minimizers: Vec<(Code, Code)>,
}

impl DensityRecord {
    /// Minimizer pairs in the shortest-code notation, sorted.
    pub fn canonical_minimizers(&self) -> Vec<(Code, Code)> {
        let mut v: Vec<(Code, Code)> =
            self.all_minimizers.iter().map(|(c, w)| (c.canonical(), w.canonical())).collect();
        v.sort();
        v.dedup();
        v
    }
}

/// One candidate evaluated for a center, as seen by the sorted sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    pub witness: usize,
    pub distance: f64,
    /// Cumulative discrete measure of the closed ball at `distance`.
    pub measure: f64,
    pub admissible: bool,
}

/// Reusable buffers for one center's sweep.
#[derive(Default)]
struct Scratch {
    // (distance bits, point index); non-negative floats order like their bits
    order: Vec<(u64, u32)>,
    prefix: Vec<f64>,
}

/// Sorts the distances from `center` up to `reach` and calls
/// `visit(witness, distance, measure)` in increasing distance; `visit`
/// returns `false` to stop. Points beyond `reach` (plus the closure
/// tolerance) are neither visited nor needed for the measures visited.
fn sweep(
    cloud: &PointCloud<'_>,
    center: usize,
    tie_tol: f64,
    reach: f64,
    scratch: &mut Scratch,
    mut visit: impl FnMut(usize, f64, f64) -> bool,
) {
    let n = cloud.len();
    let x = cloud.coords(center);
    let cutoff = closed_limit(reach, tie_tol);
    scratch.order.clear();
    for q in 0..n {
        let d = linalg::dist(x, cloud.coords(q));
        if d <= cutoff {
            scratch.order.push((d.to_bits(), q as u32));
        }
    }
    // stable on the distance bits, so ties stay in index order
    radsort::sort_by_key(&mut scratch.order, |p| p.0);

    scratch.prefix.clear();
    scratch.prefix.push(0.0);
    let mut acc = CompensatedSum::new();
    for &(_, q) in &scratch.order {
        acc.add(cloud.weight(q as usize));
        scratch.prefix.push(acc.value());
    }

    let len = scratch.order.len();
    let mut k = 0usize;
    for j in 0..len {
        let (bits, q) = scratch.order[j];
        let d = f64::from_bits(bits);
        if d > reach {
            break;
        }
        let limit = closed_limit(d, tie_tol);
        while k < len && f64::from_bits(scratch.order[k].0) <= limit {
            k += 1;
        }
        if !visit(q as usize, d, scratch.prefix[k]) {
            break;
        }
    }
}

/// Every candidate distance for `center` with its cumulative measure, as
/// computed inside [`scan_generation`].
pub fn center_candidates(cloud: &PointCloud<'_>, center: usize, opts: &ScanOptions) -> Vec<Candidate> {
    let first = cloud.first_symbol(center);
    let mut out = Vec::with_capacity(cloud.len());
    let mut scratch = Scratch::default();
    sweep(cloud, center, opts.tie_tol, f64::INFINITY, &mut scratch, |q, d, mu| {
        out.push(Candidate { witness: q, distance: d, measure: mu, admissible: cloud.first_symbol(q) != first });
        true
    });
    out
}

/// Best value of one center with all witnesses attaining it.
struct CenterBest {
    h: f64,
    // (witness, h, distance, measure)
    ties: Vec<(u32, f64, f64, f64)>,
}

/// Conservative pre-filter for candidates: with `bound` an attained value,
/// a candidate whose measure falls in bucket `b` (measure `<= edge_b`) and
/// whose distance exceeds `0.5 (bound * edge_b)^(1/s)` has
/// `h > bound` and can be skipped without evaluating the power.
struct Screen {
    limits: Vec<f64>,
}

const SCREEN_BUCKETS: usize = 4096;

impl Screen {
    fn open() -> Self {
        Screen { limits: Vec::new() }
    }

    fn new(bound: f64, s: f64) -> Self {
        let limits = (0..SCREEN_BUCKETS)
            .map(|b| {
                let edge = if b + 1 == SCREEN_BUCKETS { 1.0 + 1e-9 } else { (b + 1) as f64 / SCREEN_BUCKETS as f64 };
                0.5 * libm::pow(bound * edge, 1.0 / s)
            })
            .collect();
        Screen { limits }
    }

    #[inline]
    fn rules_out(&self, d: f64, mu: f64) -> bool {
        if self.limits.is_empty() {
            return false;
        }
        let b = ((mu * SCREEN_BUCKETS as f64) as usize).min(SCREEN_BUCKETS - 1);
        d > self.limits[b]
    }
}

fn scan_center(
    cloud: &PointCloud<'_>,
    center: usize,
    opts: &ScanOptions,
    reach: f64,
    screen: &Screen,
    scratch: &mut Scratch,
) -> CenterBest {
    let s = cloud.system().dimension();
    let first = cloud.first_symbol(center);
    let mut best = CenterBest { h: f64::INFINITY, ties: Vec::new() };
    let mut d_stop = f64::INFINITY;
    sweep(cloud, center, opts.tie_tol, reach, scratch, |q, d, mu| {
        if d > d_stop {
            return false;
        }
        if cloud.first_symbol(q) == first || mu <= 0.0 || screen.rules_out(d, mu) {
            return true;
        }
        let h = libm::pow(2.0 * d, s) / mu;
        if h < best.h {
            best.h = h;
            let cut = h * (1.0 + opts.minimizer_tol);
            best.ties.retain(|t| t.1 <= cut);
            d_stop = stop_distance(h, s);
        }
        if h <= best.h * (1.0 + opts.minimizer_tol) {
            best.ties.push((q as u32, h, d, mu));
        }
        true
    });
    best
}

/// Distance beyond which no witness can reach `h` from above: `h >= (2d)^s`
/// since `mu <= 1`, so `(2d)^s > h (1 + 1e-9)` rules a witness out while
/// keeping every pair within the minimizer tolerance.
fn stop_distance(h: f64, s: f64) -> f64 {
    0.5 * libm::pow(h * (1.0 + 1e-9), 1.0 / s)
}

/// Minimizes `h_g` over all admissible pairs of the cloud.
///
/// The reported pair is the lexicographically smallest (center code,
/// witness code) among the joint minimizers. Centers are scanned in
/// parallel under the `parallel` feature; the reduction runs afterwards in
/// center order, so the result does not depend on the worker count.
pub fn scan_generation(cloud: &PointCloud<'_>, opts: &ScanOptions) -> DensityRecord {
    let n = cloud.len();
    assert!(cloud.system().len() >= 2 && n >= 2, "cloud needs points in two cylinders");

    // a few full sweeps give an attained value, which bounds the global
    // minimum and caps how far every other center has to look
    let s = cloud.system().dimension();
    let mut scratch = Scratch::default();
    let open = Screen::open();
    let seed = [0, n / 3, (2 * n) / 3]
        .iter()
        .map(|&l| scan_center(cloud, l, opts, f64::INFINITY, &open, &mut scratch).h)
        .fold(f64::INFINITY, f64::min);
    let reach = stop_distance(seed, s);
    let screen = Screen::new(seed * (1.0 + 1e-9), s);

    #[cfg(feature = "parallel")]
    let per_center: Vec<CenterBest> = {
        use rayon::prelude::*;
        (0..n)
            .into_par_iter()
            .map_init(Scratch::default, |scratch, l| scan_center(cloud, l, opts, reach, &screen, scratch))
            .collect()
    };
    #[cfg(not(feature = "parallel"))]
    let per_center: Vec<CenterBest> =
        (0..n).map(|l| scan_center(cloud, l, opts, reach, &screen, &mut scratch)).collect();

    let global = per_center.iter().map(|c| c.h).fold(f64::INFINITY, f64::min);
    let cut = global * (1.0 + opts.minimizer_tol);
    // (center, witness, h, distance, measure), centers ascending
    let mut pairs: Vec<(usize, usize, f64, f64, f64)> = Vec::new();
    for (l, c) in per_center.iter().enumerate() {
        if c.h <= cut {
            for &(q, h, d, mu) in &c.ties {
                if h <= cut {
                    pairs.push((l, q as usize, h, d, mu));
                }
            }
        }
    }
    // cloud order is lexicographic code order
    pairs.sort_by_key(|p| (p.0, p.1));
    let &(l, q, h, d, mu) = pairs.first().expect("an admissible pair exists for m >= 2");
    DensityRecord {
        generation: cloud.generation(),
        m_tilde: h,
        center: cloud.point(l).to_owned(),
        witness: cloud.point(q).to_owned(),
        d_tilde: d,
        ball_discrete_measure: mu,
        certified: false,
        certified_upper_bound: None,
        all_minimizers: pairs
            .iter()
            .map(|&(l, q, ..)| (Code::from(cloud.code(l)), Code::from(cloud.code(q))))
            .collect(),
    }
}

/// `mu_g(B(center, radius))` by direct summation over the closed ball.
pub fn ball_discrete_measure(cloud: &PointCloud<'_>, center: &[f64], radius: f64, tie_tol: f64) -> f64 {
    let limit = closed_limit(radius, tie_tol);
    let mut acc = CompensatedSum::new();
    for p in cloud.iter() {
        if linalg::dist(center, p.coords) <= limit {
            acc.add(p.weight);
        }
    }
    acc.value()
}

/// Decides whether `mu_g(B) = mu(B)` for the record's ball, and attaches an
/// upper bound for `C^s(E)` either way.
///
/// The test is sufficient only: every length-`(g+1)` cylinder must lie
/// entirely on the same side of the sphere as its cloud point, judged by
/// the bounding balls `B(p, r R_up)` and `B(f_code(o), r rho)`. Uncertified
/// records take `(2 d)^s / lower` from the measure bracket instead.
pub fn certify_record(
    record: &DensityRecord,
    cloud: &PointCloud<'_>,
    geometry: &GeometryBounds,
    tie_tol: f64,
    bracket: &BracketOptions,
) -> DensityRecord {
    let system = cloud.system();
    let (hull_center, hull_radius) = system.enclosing_ball();
    let center = &record.center.coords;
    let limit = closed_limit(record.d_tilde, tie_tol);
    let k = cloud.code_len();
    let mut ratios = alloc::vec![1.0; cloud.len()];
    for (i, r) in ratios.iter_mut().enumerate() {
        *r = cloud.code(i).iter().map(|&j| system.maps()[usize::from(j)].ratio()).product();
    }
    debug_assert!(k >= 1);

    let decided = (0..cloud.len()).all(|i| {
        let p = cloud.coords(i);
        let r = ratios[i];
        let d_point = linalg::dist(center, p);
        let rho_point = r * geometry.diameter_up;
        let hull = system.apply_code(cloud.code(i), hull_center);
        let d_hull = linalg::dist(center, &hull);
        let rho_hull = r * hull_radius;
        if d_point <= limit {
            d_point + rho_point <= limit || d_hull + rho_hull <= limit
        } else {
            d_point - rho_point > limit || d_hull - rho_hull > limit
        }
    });

    let mut out = record.clone();
    out.certified = decided;
    out.certified_upper_bound = if decided {
        Some(record.m_tilde)
    } else {
        measure_bracket(system, geometry, center, record.d_tilde, bracket)
            .ok()
            .filter(|b| b.lower > 0.0)
            .map(|b| libm::pow(2.0 * record.d_tilde, system.dimension()) / b.lower)
    };
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleOptions {
    pub scan: ScanOptions,
    pub bracket: BracketOptions,
    pub max_points: usize,
    /// Depth of the geometry bracket; `None` picks
    /// [`IfsSystem::default_geometry_depth`].
    pub geometry_depth: Option<usize>,
}

impl Default for ScheduleOptions {
    fn default() -> Self {
        Self {
            scan: ScanOptions::default(),
            bracket: BracketOptions::default(),
            max_points: DEFAULT_MAX_POINTS,
            geometry_depth: None,
        }
    }
}

/// Certified records of generations `0..=g` and the stabilization signal.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    pub geometry: GeometryBounds,
    pub records: Vec<DensityRecord>,
    /// Smallest `g0` with identical canonical minimizer sets on `g0..=g_max`.
    pub stabilized_at: Option<usize>,
}

impl Schedule {
    /// Smallest certified upper bound over all generations, with its generation.
    pub fn best_upper_bound(&self) -> Option<(usize, f64)> {
        self.records
            .iter()
            .filter_map(|r| r.certified_upper_bound.map(|b| (r.generation, b)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }
}

pub(crate) fn stabilization(records: &[DensityRecord]) -> Option<usize> {
    let last = records.last()?.canonical_minimizers();
    let mut g0 = records.len() - 1;
    while g0 > 0 && records[g0 - 1].canonical_minimizers() == last {
        g0 -= 1;
    }
    Some(records[g0].generation)
}

/// A schedule that stopped early; `partial` keeps the finished generations.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleFailure {
    pub partial: Option<Box<Schedule>>,
    pub error: Error,
}

impl fmt::Display for ScheduleFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let done = self.partial.as_ref().map_or(0, |s| s.records.len());
        write!(f, "{} (after {done} completed generation(s))", self.error)
    }
}

impl core::error::Error for ScheduleFailure {}

/// Runs generations `0..=g_max`, certifying each record.
pub fn run_schedule(system: &IfsSystem, g_max: usize, opts: &ScheduleOptions) -> Result<Schedule, ScheduleFailure> {
    run_schedule_with(system, g_max, opts, |_| {})
}

/// [`run_schedule`] with a callback invoked as each record completes.
pub fn run_schedule_with(
    system: &IfsSystem,
    g_max: usize,
    opts: &ScheduleOptions,
    mut on_record: impl FnMut(&DensityRecord),
) -> Result<Schedule, ScheduleFailure> {
    let depth = opts.geometry_depth.unwrap_or_else(|| system.default_geometry_depth());
    let geometry = estimate_geometry(system, depth).map_err(|error| ScheduleFailure { partial: None, error })?;
    let mut records = Vec::with_capacity(g_max + 1);
    let mut cloud = PointCloud::initial_with_budget(system, opts.max_points);
    for g in 0..=g_max {
        if g > 0 {
            match cloud.refine() {
                Ok(next) => cloud = next,
                Err(error) => {
                    let stabilized_at = stabilization(&records);
                    let partial = Schedule { geometry, records, stabilized_at };
                    return Err(ScheduleFailure { partial: Some(Box::new(partial)), error });
                }
            }
        }
        let raw = scan_generation(&cloud, &opts.scan);
        let rec = certify_record(&raw, &cloud, &geometry, opts.scan.tie_tol, &opts.bracket);
        on_record(&rec);
        records.push(rec);
    }
    let stabilized_at = stabilization(&records);
    Ok(Schedule { geometry, records, stabilized_at })
}
