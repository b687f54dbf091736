//! Iterated function systems of similitudes: validation, similarity
//! dimension, and rigorous brackets for the diameter `R = |E|` and the
//! first-level separation gap `c`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::cloud::PointCloud;
use crate::linalg;
use crate::{Error, Similitude};

/// Target residual of `sum r_i^s - 1` for the dimension solver.
pub const DIMENSION_TOL: f64 = 1e-12;

/// Outcome of the numeric strong-separation test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SscStatus {
    /// `c_low > 0`: the first-level cylinders are provably disjoint.
    Certified,
    /// The bracket straddles zero at the depth used.
    Inconclusive,
    /// Two first-level cylinders share a cloud point.
    Violated,
}

impl core::fmt::Display for SscStatus {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            SscStatus::Certified => "certified",
            SscStatus::Inconclusive => "inconclusive",
            SscStatus::Violated => "violated",
        })
    }
}

/// A validated list of `m >= 2` similitudes on `R^n` with its derived constants.
#[derive(Debug, Clone)]
pub struct IfsSystem {
    maps: Vec<Similitude>,
    ambient_dim: usize,
    dimension: f64,
    r_max: f64,
    weights: Vec<f64>,
    hull_center: Vec<f64>,
    hull_radius: f64,
}

impl IfsSystem {
    pub fn new(maps: Vec<Similitude>) -> Result<Self, Error> {
        if maps.len() < 2 {
            return Err(Error::Degenerate { maps: maps.len() });
        }
        if maps.len() > usize::from(u16::MAX) {
            return Err(Error::InvalidParameter { name: "map count", value: maps.len() as f64 });
        }
        let ambient_dim = maps[0].dimension();
        for (i, f) in maps.iter().enumerate() {
            if f.dimension() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    context: format!("maps[{i}]"),
                    expected: ambient_dim,
                    found: f.dimension(),
                });
            }
        }
        let ratios: Vec<f64> = maps.iter().map(Similitude::ratio).collect();
        let dimension = similarity_dimension(&ratios)?;
        // equal ratios give weights 1/m exactly
        let weights = if ratios.iter().all(|&r| r == ratios[0]) {
            vec![1.0 / ratios.len() as f64; ratios.len()]
        } else {
            ratios.iter().map(|&r| libm::pow(r, dimension)).collect()
        };
        let r_max = ratios.iter().copied().fold(0.0, f64::max);
        let (hull_center, hull_radius) = invariant_ball(&maps);
        Ok(Self { maps, ambient_dim, dimension, r_max, weights, hull_center, hull_radius })
    }

    pub fn maps(&self) -> &[Similitude] {
        &self.maps
    }

    /// Number of maps `m`.
    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Similarity dimension `s`, the root of `sum r_i^s = 1`.
    pub fn dimension(&self) -> f64 {
        self.dimension
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    /// Natural measure of the first-level cylinder `i`: `r_i^s`.
    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// All ratios equal.
    pub fn is_homogeneous(&self) -> bool {
        let r0 = self.maps[0].ratio();
        self.maps.iter().all(|f| f.ratio() == r0)
    }

    /// A closed ball `B(center, radius)` mapped into itself by every map,
    /// hence containing the attractor. The center is the centroid of the
    /// fixed points.
    pub fn enclosing_ball(&self) -> (&[f64], f64) {
        (&self.hull_center, self.hull_radius)
    }

    /// Applies the map with code `code` (outermost symbol first) to `x`.
    pub fn apply_code(&self, code: &[u16], x: &[f64]) -> Vec<f64> {
        let mut cur = x.to_vec();
        let mut next = vec![0.0; x.len()];
        for &j in code.iter().rev() {
            self.maps[usize::from(j)].apply_into(&cur, &mut next);
            core::mem::swap(&mut cur, &mut next);
        }
        cur
    }

    /// Conjugates every map by the isometry `x -> U x + t`.
    pub fn transformed(&self, rotation: &[f64], shift: &[f64]) -> Result<IfsSystem, Error> {
        let maps = self.maps.iter().map(|f| f.conjugate(rotation, shift)).collect::<Result<Vec<_>, _>>()?;
        IfsSystem::new(maps)
    }

    /// Multiplies every translation by `factor`, sending `E` to `factor * E`.
    pub fn with_scaled_translations(&self, factor: f64) -> Result<IfsSystem, Error> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::InvalidParameter { name: "scale factor", value: factor });
        }
        IfsSystem::new(self.maps.iter().map(|f| f.with_scaled_translation(factor)).collect())
    }

    /// Depth used when callers do not choose one: the deepest generation
    /// up to 8 whose cloud has at most 4096 points, deepened further if
    /// `2 r_max^(depth+1) >= 1/2`.
    pub fn default_geometry_depth(&self) -> usize {
        let m = self.len();
        let mut depth = 1;
        while depth < 8 && checked_pow(m, depth + 2).is_some_and(|n| n <= 4096) {
            depth += 1;
        }
        while 2.0 * libm::pow(self.r_max, (depth + 1) as f64) >= 0.5 && depth < 64 {
            depth += 1;
        }
        depth
    }
}

pub(crate) fn checked_pow(m: usize, e: usize) -> Option<usize> {
    let mut acc: usize = 1;
    for _ in 0..e {
        acc = acc.checked_mul(m)?;
    }
    Some(acc)
}

fn invariant_ball(maps: &[Similitude]) -> (Vec<f64>, f64) {
    let n = maps[0].dimension();
    let mut center = vec![0.0; n];
    for f in maps {
        for (c, p) in center.iter_mut().zip(f.fixed_point()) {
            *c += p;
        }
    }
    for c in &mut center {
        *c /= maps.len() as f64;
    }
    // B(c, rho) is invariant iff |f_i(c) - c| + r_i rho <= rho for every i
    let radius = maps.iter().map(|f| linalg::dist(&f.apply(&center), &center) / (1.0 - f.ratio())).fold(0.0, f64::max);
    (center, radius * (1.0 + 1e-14))
}

/// Solves `sum r_i^s = 1` by bisection on the strictly decreasing map
/// `s -> sum r_i^s`, starting from `[0, s_hi]` with `s_hi` doubled from 1.
pub fn similarity_dimension(ratios: &[f64]) -> Result<f64, Error> {
    if ratios.len() < 2 {
        return Err(Error::Degenerate { maps: ratios.len() });
    }
    for (i, &r) in ratios.iter().enumerate() {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::RatioOutOfRange { map: i, ratio: r });
        }
    }
    let moment = |s: f64| ratios.iter().map(|&r| libm::pow(r, s)).sum::<f64>() - 1.0;
    let mut lo = 0.0;
    let mut hi = 1.0;
    while moment(hi) >= 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    let mut best = (hi, moment(hi));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = moment(mid);
        if libm::fabs(v) < libm::fabs(best.1) {
            best = (mid, v);
        }
        if v == 0.0 {
            break;
        }
        if v > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(best.0)
}

/// Brackets for `R = |E|` and `c = min_{i != j} dist(f_i E, f_j E)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometryBounds {
    pub diameter_low: f64,
    pub diameter_up: f64,
    pub gap_low: f64,
    pub gap_up: f64,
    pub depth_used: usize,
}

impl GeometryBounds {
    /// The numeric separation verdict carried by these brackets.
    pub fn ssc_status(&self) -> SscStatus {
        let scale = if self.diameter_low > 1.0 { self.diameter_low } else { 1.0 };
        if self.gap_up <= 1e-12 * scale {
            SscStatus::Violated
        } else if self.gap_low > 0.0 {
            SscStatus::Certified
        } else {
            SscStatus::Inconclusive
        }
    }
}

/// Diameter and cross-first-cylinder minimum distance of a cloud.
pub(crate) fn cloud_extent(cloud: &PointCloud<'_>) -> (f64, f64) {
    let n = cloud.len();
    let mut diameter = 0.0f64;
    let mut gap = f64::INFINITY;
    for i in 0..n {
        let p = cloud.coords(i);
        let first = cloud.first_symbol(i);
        for j in i + 1..n {
            let d = linalg::dist(p, cloud.coords(j));
            diameter = diameter.max(d);
            if cloud.first_symbol(j) != first {
                gap = gap.min(d);
            }
        }
    }
    (diameter, gap)
}

/// Brackets `R` and `c` from the clouds of generations up to `depth`.
///
/// With `D` the cloud diameter and `h = r_max^(depth+1)`, every point of `E`
/// lies within `h |E|` of the cloud, so `D <= |E| <= D / (1 - 2h)` and the
/// minimum cross-cylinder cloud distance `ĉ` satisfies
/// `ĉ - 2h R_up <= c <= ĉ`. The upper diameter bound is also capped by the
/// diameter of the invariant ball. Brackets from shallower generations are
/// intersected in, so deeper calls never widen them.
pub fn estimate_geometry(system: &IfsSystem, depth: usize) -> Result<GeometryBounds, Error> {
    if depth == 0 {
        return Err(Error::InvalidParameter { name: "geometry depth", value: 0.0 });
    }
    let h_final = libm::pow(system.r_max(), (depth + 1) as f64);
    if 2.0 * h_final >= 1.0 {
        return Err(Error::DepthTooShallow { depth, gap: h_final });
    }
    let ball_diameter = 2.0 * system.enclosing_ball().1;
    let mut bounds = GeometryBounds {
        diameter_low: 0.0,
        diameter_up: ball_diameter,
        gap_low: f64::NEG_INFINITY,
        gap_up: f64::INFINITY,
        depth_used: depth,
    };
    let mut cloud = PointCloud::initial(system);
    for g in 0..=depth {
        if g > 0 {
            cloud = cloud.refine()?;
        }
        let h = libm::pow(system.r_max(), (g + 1) as f64);
        let (diameter, gap) = cloud_extent(&cloud);
        bounds.diameter_low = bounds.diameter_low.max(diameter);
        bounds.gap_up = bounds.gap_up.min(gap);
        if 2.0 * h < 1.0 {
            bounds.diameter_up = bounds.diameter_up.min(diameter / (1.0 - 2.0 * h));
        }
        bounds.gap_low = bounds.gap_low.max(gap - 2.0 * h * bounds.diameter_up);
    }
    Ok(bounds)
}

/// Numeric strong-separation test at `depth`; a depth that cannot bracket
/// the geometry reports [`SscStatus::Inconclusive`].
pub fn check_ssc(system: &IfsSystem, depth: usize) -> SscStatus {
    match estimate_geometry(system, depth) {
        Ok(g) => g.ssc_status(),
        Err(_) => SscStatus::Inconclusive,
    }
}
