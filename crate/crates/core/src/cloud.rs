//! Coded point clouds `A_g` and their discrete measures `mu_g`.
//!
//! Generation `g = 0` is the set of fixed points; generation `g + 1` applies
//! every map to every point of generation `g`. A point of generation `g`
//! carries a code of length `g + 1` and the weight `r_code^s`, the natural
//! measure of the cylinder that code names.

use alloc::vec;
use alloc::vec::Vec;

use crate::system::{checked_pow, GeometryBounds, IfsSystem};
use crate::{Code, Error};

/// Default cap on the number of points in one generation.
pub const DEFAULT_MAX_POINTS: usize = 2_000_000;

/// An owned point of a cloud.
#[derive(Debug, Clone, PartialEq)]
pub struct CodedPoint {
    pub coords: Vec<f64>,
    pub code: Code,
    pub weight: f64,
}

/// Borrowed view of one cloud point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointRef<'c> {
    pub coords: &'c [f64],
    pub code: &'c [u16],
    pub weight: f64,
}

impl PointRef<'_> {
    pub fn to_owned(&self) -> CodedPoint {
        CodedPoint { coords: self.coords.to_vec(), code: Code::from(self.code), weight: self.weight }
    }
}

/// The discrete measure `mu_g` supported on `A_g`, points in lexicographic
/// code order.
#[derive(Debug, Clone)]
pub struct PointCloud<'s> {
    system: &'s IfsSystem,
    generation: usize,
    max_points: usize,
    coords: Vec<f64>,
    codes: Vec<u16>,
    weights: Vec<f64>,
}

impl<'s> PointCloud<'s> {
    /// Generation 0: the fixed points, point `i` weighted `r_i^s`.
    pub fn initial(system: &'s IfsSystem) -> Self {
        Self::initial_with_budget(system, DEFAULT_MAX_POINTS)
    }

    pub fn initial_with_budget(system: &'s IfsSystem, max_points: usize) -> Self {
        let m = system.len();
        let mut coords = Vec::with_capacity(m * system.ambient_dim());
        for f in system.maps() {
            coords.extend(f.fixed_point());
        }
        Self {
            system,
            generation: 0,
            max_points,
            coords,
            codes: (0..m as u16).collect(),
            weights: system.weights().to_vec(),
        }
    }

    /// Generation after `generations` refinements of the fixed points.
    pub fn generation_of(system: &'s IfsSystem, generations: usize, max_points: usize) -> Result<Self, Error> {
        let mut cloud = Self::initial_with_budget(system, max_points);
        for _ in 0..generations {
            cloud = cloud.refine()?;
        }
        Ok(cloud)
    }

    pub fn system(&self) -> &'s IfsSystem {
        self.system
    }

    pub fn generation(&self) -> usize {
        self.generation
    }

    pub fn max_points(&self) -> usize {
        self.max_points
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.system.ambient_dim()
    }

    pub fn code_len(&self) -> usize {
        self.generation + 1
    }

    #[inline]
    pub fn coords(&self, i: usize) -> &[f64] {
        let n = self.dim();
        &self.coords[i * n..(i + 1) * n]
    }

    #[inline]
    pub fn code(&self, i: usize) -> &[u16] {
        let k = self.code_len();
        &self.codes[i * k..(i + 1) * k]
    }

    #[inline]
    pub fn first_symbol(&self, i: usize) -> u16 {
        self.codes[i * self.code_len()]
    }

    #[inline]
    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn point(&self, i: usize) -> PointRef<'_> {
        PointRef { coords: self.coords(i), code: self.code(i), weight: self.weight(i) }
    }

    pub fn iter(&self) -> impl Iterator<Item = PointRef<'_>> + '_ {
        (0..self.len()).map(move |i| self.point(i))
    }

    /// Index of the point with the given code, by binary search.
    pub fn find(&self, code: &[u16]) -> Option<usize> {
        if code.len() != self.code_len() {
            return None;
        }
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.code(mid).cmp(code) {
                core::cmp::Ordering::Less => lo = mid + 1,
                core::cmp::Ordering::Greater => hi = mid,
                core::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    /// Total mass; 1 up to rounding.
    pub fn total_weight(&self) -> f64 {
        let mut s = crate::sum::CompensatedSum::new();
        for &w in &self.weights {
            s.add(w);
        }
        s.value()
    }

    /// `r_max^(g+1) * R_up`: every point of the attractor lies within this
    /// distance of the cloud.
    pub fn gap(&self, geometry: &GeometryBounds) -> f64 {
        libm::pow(self.system.r_max(), (self.generation + 1) as f64) * geometry.diameter_up
    }

    /// Number of points the next generation would hold.
    pub fn next_len(&self) -> Option<usize> {
        checked_pow(self.system.len(), self.generation + 2)
    }

    /// Applies every map to every point: the image of `mu_g` under the
    /// Markov operator `sum_j r_j^s mu_g ∘ f_j⁻¹`. Map `j`'s block comes
    /// before map `j+1`'s, which keeps the output in lexicographic order.
    pub fn refine(&self) -> Result<PointCloud<'s>, Error> {
        let m = self.system.len();
        let n = self.dim();
        let len = self.len();
        let requested = self.next_len().unwrap_or(usize::MAX);
        if requested > self.max_points {
            return Err(Error::BudgetExceeded { limit: self.max_points, requested });
        }
        let k = self.code_len();
        let total = len * m;
        let maps = self.system.maps();

        let mut coords = vec![0.0; total * n];
        let fill = |idx: usize, out: &mut [f64]| {
            let (j, p) = (idx / len, idx % len);
            maps[j].apply_into(self.coords(p), out);
        };
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            coords.par_chunks_mut(n).enumerate().for_each(|(idx, out)| fill(idx, out));
        }
        #[cfg(not(feature = "parallel"))]
        for (idx, out) in coords.chunks_mut(n).enumerate() {
            fill(idx, out);
        }

        let mut codes = Vec::with_capacity(total * (k + 1));
        let mut weights = Vec::with_capacity(total);
        for j in 0..m {
            let wj = self.system.weight(j);
            for p in 0..len {
                codes.push(j as u16);
                codes.extend_from_slice(self.code(p));
                weights.push(wj * self.weights[p]);
            }
        }
        Ok(PointCloud {
            system: self.system,
            generation: self.generation + 1,
            max_points: self.max_points,
            coords,
            codes,
            weights,
        })
    }

    /// True if two points coincide within `tol` per coordinate, which
    /// means two distinct codes address the same point and separation fails.
    pub fn has_coincident_points(&self, tol: f64) -> bool {
        let n = self.dim();
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_unstable_by(|&a, &b| self.coords(a)[0].total_cmp(&self.coords(b)[0]));
        for (idx, &a) in order.iter().enumerate() {
            for &b in &order[idx + 1..] {
                if self.coords(b)[0] - self.coords(a)[0] > tol {
                    break;
                }
                if (1..n).all(|c| libm::fabs(self.coords(a)[c] - self.coords(b)[c]) <= tol) {
                    return true;
                }
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Similitude;
    use alloc::vec;

    fn cantor() -> IfsSystem {
        IfsSystem::new(vec![
            Similitude::homothety(1.0 / 3.0, vec![0.0]).unwrap(),
            Similitude::homothety(1.0 / 3.0, vec![2.0 / 3.0]).unwrap(),
        ])
        .unwrap()
    }

    fn xs(c: &PointCloud<'_>) -> Vec<f64> {
        (0..c.len()).map(|i| c.coords(i)[0]).collect()
    }

    #[test]
    fn initial_cantor_cloud() {
        let sys = cantor();
        let c = PointCloud::initial(&sys);
        assert_eq!(c.generation(), 0);
        assert!(xs(&c).iter().zip([0.0, 1.0]).all(|(x, e)| (x - e).abs() < 1e-15));
        assert_eq!(c.code(1), &[1]);
        for w in c.weights() {
            assert!((w - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn refined_cantor_cloud() {
        let sys = cantor();
        let c = PointCloud::initial(&sys).refine().unwrap();
        let expected = [0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0];
        for (x, e) in xs(&c).iter().zip(expected) {
            assert!((x - e).abs() < 1e-15);
        }
        assert_eq!(c.code(1), &[0, 1]);
        assert!(c.weights().iter().all(|w| (w - 0.25).abs() < 1e-15));
        let c2 = c.refine().unwrap();
        assert_eq!(c2.len(), 8);
        for x in xs(&c) {
            assert!(xs(&c2).iter().any(|y| (x - y).abs() < 1e-12));
        }
    }

    #[test]
    fn budget_is_enforced() {
        let sys = cantor();
        let c = PointCloud::initial_with_budget(&sys, 4).refine().unwrap();
        match c.refine() {
            Err(Error::BudgetExceeded { limit, requested }) => {
                assert_eq!((limit, requested), (4, 8));
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn find_by_code() {
        let sys = cantor();
        let c = PointCloud::generation_of(&sys, 3, 100).unwrap();
        for i in 0..c.len() {
            assert_eq!(c.find(c.code(i)), Some(i));
        }
        assert_eq!(c.find(&[0, 1]), None);
    }

    #[test]
    fn gap_is_power_of_ratio() {
        let sys = cantor();
        let geom = crate::estimate_geometry(&sys, 6).unwrap();
        let c = PointCloud::initial(&sys);
        assert!((c.gap(&geom) - 1.0 / 3.0).abs() < 1e-12);
        let c3 = PointCloud::generation_of(&sys, 3, 100).unwrap();
        assert!((c3.gap(&geom) - libm::pow(1.0 / 3.0, 4.0)).abs() < 1e-12);
    }

    #[test]
    fn coincident_points_detected() {
        let touching = IfsSystem::new(vec![
            Similitude::homothety(0.5, vec![0.0]).unwrap(),
            Similitude::homothety(0.5, vec![0.5]).unwrap(),
        ])
        .unwrap();
        let c = PointCloud::generation_of(&touching, 2, 100).unwrap();
        assert!(c.has_coincident_points(1e-12));
        let sys = cantor();
        let c = PointCloud::generation_of(&sys, 4, 100).unwrap();
        assert!(!c.has_coincident_points(1e-12));
    }
}
