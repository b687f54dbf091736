//! Two-sided brackets of the invariant measure `mu(B(x, d))` by depth-first
//! subdivision of the code tree.
//!
//! Each cylinder `E_i = f_i(E)` is enclosed twice: in `B(f_i(a), r_i R_up)`
//! with `a` the fixed point of map 0 (a point of `E`), and in
//! `B(f_i(o), r_i rho)` with `B(o, rho)` the invariant ball of the system.
//! A cylinder whose enclosure lies inside the closed ball contributes
//! `r_i^s` to both bounds, one whose enclosure misses it contributes
//! nothing, and straddling cylinders are split until their enclosure radius
//! drops below `tol`, at which point they count toward the upper bound only.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg;
use crate::sum::CompensatedSum;
use crate::{closed_limit, Error, GeometryBounds, IfsSystem, DEFAULT_TIE_TOL};

/// Default node budget for one bracket.
pub const DEFAULT_NODE_BUDGET: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketOptions {
    /// Absolute resolution length; `None` means `rel_tol * R_up`.
    pub tol: Option<f64>,
    pub rel_tol: f64,
    pub node_budget: usize,
    /// Closure tolerance for the ball boundary, as in the density scan.
    pub tie_tol: f64,
}

impl Default for BracketOptions {
    fn default() -> Self {
        Self { tol: None, rel_tol: 1e-6, node_budget: DEFAULT_NODE_BUDGET, tie_tol: DEFAULT_TIE_TOL }
    }
}

impl BracketOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol: Some(tol), ..Self::default() }
    }

    pub fn resolved_tol(&self, geometry: &GeometryBounds) -> f64 {
        self.tol.unwrap_or(self.rel_tol * geometry.diameter_up)
    }
}

/// An enclosure `lower <= mu(B) <= upper`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureBracket {
    pub lower: f64,
    pub upper: f64,
    /// Deepest code length visited.
    pub depth_reached: usize,
    pub nodes_visited: usize,
}

impl MeasureBracket {
    pub fn undecided_mass(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }
}

struct Frame {
    // composed map f_i as (ratio * Q) and translation, both row-major
    offset: usize,
    ratio: f64,
    weight: f64,
    depth: usize,
}

/// Brackets `mu(B(center, radius))` for the invariant measure of `system`.
pub fn measure_bracket(
    system: &IfsSystem,
    geometry: &GeometryBounds,
    center: &[f64],
    radius: f64,
    opts: &BracketOptions,
) -> Result<MeasureBracket, Error> {
    let n = system.ambient_dim();
    if center.len() != n {
        return Err(Error::DimensionMismatch { context: "ball center".into(), expected: n, found: center.len() });
    }
    if !(radius >= 0.0 && radius.is_finite()) {
        return Err(Error::InvalidParameter { name: "radius", value: radius });
    }
    let tol = opts.resolved_tol(geometry);
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidParameter { name: "bracket tolerance", value: tol });
    }
    let limit = closed_limit(radius, opts.tie_tol);
    let (hull_center, hull_radius) = system.enclosing_ball();
    let anchor = system.maps()[0].fixed_point();
    let r_up = geometry.diameter_up;

    let stride = n * n + n;
    let mut arena: Vec<f64> = Vec::new();
    let mut free: Vec<usize> = Vec::new();
    let mut stack: Vec<Frame> = Vec::new();
    let alloc_frame = |arena: &mut Vec<f64>, free: &mut Vec<usize>| -> usize {
        if let Some(off) = free.pop() {
            off
        } else {
            let off = arena.len();
            arena.resize(off + stride, 0.0);
            off
        }
    };

    let root = alloc_frame(&mut arena, &mut free);
    arena[root..root + n * n].copy_from_slice(&linalg::identity(n));
    stack.push(Frame { offset: root, ratio: 1.0, weight: 1.0, depth: 0 });

    let mut lower = CompensatedSum::new();
    let mut upper = CompensatedSum::new();
    let mut visited = 0usize;
    let mut depth_reached = 0usize;
    let mut p = vec![0.0; n];
    let mut q = vec![0.0; n];

    while let Some(frame) = stack.pop() {
        visited += 1;
        if visited > opts.node_budget {
            return Err(Error::NodeBudgetExceeded { limit: opts.node_budget });
        }
        depth_reached = depth_reached.max(frame.depth);
        let (lin, tr) = arena[frame.offset..frame.offset + stride].split_at(n * n);
        apply_affine(lin, tr, hull_center, &mut p);
        apply_affine(lin, tr, &anchor, &mut q);
        let rho_hull = frame.ratio * hull_radius;
        let rho_anchor = frame.ratio * r_up;
        let d_hull = linalg::dist(center, &p);
        let d_anchor = linalg::dist(center, &q);

        let inside = d_hull + rho_hull <= limit || d_anchor + rho_anchor <= limit;
        let outside = d_hull - rho_hull > limit || d_anchor - rho_anchor > limit;
        if inside {
            lower.add(frame.weight);
            upper.add(frame.weight);
        } else if outside {
        } else if rho_anchor < tol {
            upper.add(frame.weight);
        } else {
            // children pushed in reverse so map 0 is explored first
            for j in (0..system.len()).rev() {
                let child = alloc_frame(&mut arena, &mut free);
                compose_into(&mut arena, frame.offset, child, system, j, n);
                stack.push(Frame {
                    offset: child,
                    ratio: frame.ratio * system.maps()[j].ratio(),
                    weight: frame.weight * system.weight(j),
                    depth: frame.depth + 1,
                });
            }
        }
        free.push(frame.offset);
    }

    let upper = upper.value().clamp(0.0, 1.0);
    let lower = lower.value().clamp(0.0, upper);
    Ok(MeasureBracket { lower, upper, depth_reached, nodes_visited: visited })
}

#[inline]
fn apply_affine(lin: &[f64], tr: &[f64], x: &[f64], out: &mut [f64]) {
    linalg::mat_vec(lin, x, out);
    for (o, b) in out.iter_mut().zip(tr) {
        *o += b;
    }
}

/// Writes the composition `parent ∘ f_j` into the child frame.
fn compose_into(arena: &mut [f64], parent: usize, child: usize, system: &IfsSystem, j: usize, n: usize) {
    let f = &system.maps()[j];
    let r = f.ratio();
    let q = f.orthogonal();
    let b = f.translation();
    let stride = n * n + n;
    let (lo, hi) = if parent < child {
        let (a, b) = arena.split_at_mut(child);
        (&a[parent..parent + stride], &mut b[..stride])
    } else {
        let (a, b) = arena.split_at_mut(parent);
        (&b[..stride], &mut a[child..child + stride])
    };
    let (plin, ptr) = lo.split_at(n * n);
    let (clin, ctr) = hi.split_at_mut(n * n);
    for i in 0..n {
        for k in 0..n {
            let mut acc = 0.0;
            for l in 0..n {
                acc += plin[i * n + l] * q[l * n + k];
            }
            clin[i * n + k] = r * acc;
        }
    }
    for i in 0..n {
        let mut acc = ptr[i];
        for l in 0..n {
            acc += plin[i * n + l] * b[l];
        }
        ctr[i] = acc;
    }
}

/// `((2 radius)^s / upper, (2 radius)^s / lower)`. For a center on the
/// attractor and an admissible radius the high end bounds `C^s(E)` from above.
pub fn certified_density_interval(
    system: &IfsSystem,
    geometry: &GeometryBounds,
    center: &[f64],
    radius: f64,
    opts: &BracketOptions,
) -> Result<(f64, f64), Error> {
    let bracket = measure_bracket(system, geometry, center, radius, opts)?;
    if bracket.lower <= 0.0 {
        return Err(Error::EmptyBall);
    }
    let num = libm::pow(2.0 * radius, system.dimension());
    Ok((num / bracket.upper, num / bracket.lower))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{estimate_geometry, Similitude};

    fn cantor() -> IfsSystem {
        IfsSystem::new(vec![
            Similitude::homothety(1.0 / 3.0, vec![0.0]).unwrap(),
            Similitude::homothety(1.0 / 3.0, vec![2.0 / 3.0]).unwrap(),
        ])
        .unwrap()
    }

    /// Exact interval arithmetic on the Cantor construction: mass of
    /// `[a, b]` by recursion over triadic intervals down to `depth`,
    /// returning (lower, upper).
    fn cantor_interval_mass(lo: f64, hi: f64, a: f64, b: f64, depth: usize) -> (f64, f64) {
        if lo >= a && hi <= b {
            return (1.0, 1.0);
        }
        if hi < a || lo > b {
            return (0.0, 0.0);
        }
        if depth == 0 {
            return (0.0, 1.0);
        }
        let third = (hi - lo) / 3.0;
        let l = cantor_interval_mass(lo, lo + third, a, b, depth - 1);
        let r = cantor_interval_mass(hi - third, hi, a, b, depth - 1);
        (0.5 * (l.0 + r.0), 0.5 * (l.1 + r.1))
    }

    #[test]
    fn huge_ball_is_everything() {
        let sys = cantor();
        let geom = estimate_geometry(&sys, 6).unwrap();
        let b = measure_bracket(&sys, &geom, &[0.4], geom.diameter_up + 0.4, &BracketOptions::default()).unwrap();
        assert_eq!((b.lower, b.upper), (1.0, 1.0));
    }

    #[test]
    fn cantor_right_half() {
        let sys = cantor();
        let geom = estimate_geometry(&sys, 6).unwrap();
        let b = measure_bracket(&sys, &geom, &[2.0 / 3.0], 1.0 / 3.0, &BracketOptions::with_tol(1e-6)).unwrap();
        let (lo, hi) = cantor_interval_mass(0.0, 1.0, 1.0 / 3.0, 1.0, 30);
        assert!(lo <= 0.5 && 0.5 <= hi);
        assert!(b.contains(0.5), "{b:?}");
        assert!(b.undecided_mass() < 1e-3);
    }

    #[test]
    fn cantor_left_ball_matches_interval_recursion() {
        let sys = cantor();
        let geom = estimate_geometry(&sys, 6).unwrap();
        let b = measure_bracket(&sys, &geom, &[0.0], 0.3, &BracketOptions::with_tol(1e-6)).unwrap();
        let (lo, hi) = cantor_interval_mass(0.0, 1.0, -0.3, 0.3, 40);
        assert!(hi - lo < 1e-9);
        assert!(b.lower <= hi + 1e-12 && lo <= b.upper + 1e-12, "{b:?} vs [{lo}, {hi}]");
        assert!(b.undecided_mass() < 1e-3);
    }

    #[test]
    fn monotone_in_tolerance() {
        let sys = cantor();
        let geom = estimate_geometry(&sys, 6).unwrap();
        let mut prev: Option<MeasureBracket> = None;
        for tol in [1e-2, 1e-3, 1e-4, 1e-5, 1e-6] {
            let b = measure_bracket(&sys, &geom, &[0.0], 0.3, &BracketOptions::with_tol(tol)).unwrap();
            if let Some(p) = prev {
                assert!(b.lower >= p.lower - 1e-14 && b.upper <= p.upper + 1e-14);
            }
            prev = Some(b);
        }
    }

    #[test]
    fn node_budget_enforced() {
        let sys = cantor();
        let geom = estimate_geometry(&sys, 6).unwrap();
        let opts = BracketOptions { tol: Some(1e-12), node_budget: 50, ..BracketOptions::default() };
        assert!(matches!(
            measure_bracket(&sys, &geom, &[0.0], 0.3, &opts),
            Err(Error::NodeBudgetExceeded { limit: 50 })
        ));
    }

    #[test]
    fn empty_ball_has_no_density_interval() {
        let sys = cantor();
        let geom = estimate_geometry(&sys, 6).unwrap();
        let err = certified_density_interval(&sys, &geom, &[0.5], 0.1, &BracketOptions::default());
        assert_eq!(err, Err(Error::EmptyBall));
    }

    #[test]
    fn cantor_optimal_interval() {
        let sys = cantor();
        let geom = estimate_geometry(&sys, 6).unwrap();
        let (lo, hi) =
            certified_density_interval(&sys, &geom, &[1.0 / 3.0], 2.0 / 3.0, &BracketOptions::with_tol(1e-8)).unwrap();
        let exact = libm::pow(4.0, 2f64.ln() / 3f64.ln()) / 2.0;
        assert!(lo <= exact + 1e-12 && exact <= hi + 1e-12);
        assert!(hi - lo < 1e-9);
    }
}
