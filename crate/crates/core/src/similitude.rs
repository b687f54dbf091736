//! Contracting similitudes `f(x) = r Q x + b`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::linalg;
use crate::Error;

/// Accepted entrywise defect of `QᵀQ - I` for the orthogonal part.
pub const ORTHOGONALITY_TOL: f64 = 1e-12;

/// A contracting similitude `f(x) = ratio * Q x + translation` on `R^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Similitude {
    ratio: f64,
    orthogonal: Vec<f64>,
    translation: Vec<f64>,
    // ratio * orthogonal, row-major
    linear: Vec<f64>,
}

impl Similitude {
    /// Builds a similitude from its ratio, a row-major `n x n` orthogonal
    /// matrix and a translation in `R^n`.
    ///
    /// The orthogonal part is accepted up to [`ORTHOGONALITY_TOL`] and then
    /// re-orthonormalized.
    pub fn new(ratio: f64, orthogonal: Vec<f64>, translation: Vec<f64>) -> Result<Self, Error> {
        let n = translation.len();
        if n == 0 {
            return Err(Error::DimensionMismatch { context: "translation".into(), expected: 1, found: 0 });
        }
        if orthogonal.len() != n * n {
            return Err(Error::DimensionMismatch {
                context: "orthogonal".into(),
                expected: n * n,
                found: orthogonal.len(),
            });
        }
        if !ratio.is_finite() {
            return Err(Error::NonFinite { context: "ratio".into() });
        }
        if orthogonal.iter().chain(&translation).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { context: "orthogonal/translation".into() });
        }
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::RatioOutOfRange { map: 0, ratio });
        }
        let defect = linalg::orthogonality_defect(&orthogonal, n);
        if defect > ORTHOGONALITY_TOL {
            return Err(Error::NotOrthogonal { map: 0, defect });
        }
        let mut q = orthogonal;
        if defect > 0.0 {
            for _ in 0..2 {
                q = linalg::polar_step(&q, n);
            }
        }
        let linear = q.iter().map(|v| ratio * v).collect();
        Ok(Self { ratio, orthogonal: q, translation, linear })
    }

    /// `f(x) = ratio * x + translation`.
    pub fn homothety(ratio: f64, translation: Vec<f64>) -> Result<Self, Error> {
        let n = translation.len();
        Self::new(ratio, linalg::identity(n), translation)
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    pub fn orthogonal(&self) -> &[f64] {
        &self.orthogonal
    }

    pub fn translation(&self) -> &[f64] {
        &self.translation
    }

    pub fn dimension(&self) -> usize {
        self.translation.len()
    }

    /// Writes `f(x)` into `out`.
    #[inline]
    pub fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        linalg::mat_vec(&self.linear, x, out);
        for (o, b) in out.iter_mut().zip(&self.translation) {
            *o += b;
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; x.len()];
        self.apply_into(x, &mut out);
        out
    }

    /// The unique fixed point, from `(I - rQ) x = b`.
    pub fn fixed_point(&self) -> Vec<f64> {
        let n = self.dimension();
        let mut a = linalg::identity(n);
        for (a, l) in a.iter_mut().zip(&self.linear) {
            *a -= l;
        }
        // ratio < 1 keeps I - rQ well conditioned (singular values >= 1 - r)
        let mut x = linalg::solve(&a, &self.translation).expect("I - rQ is invertible");
        // one step of iterative refinement
        let fx = self.apply(&x);
        let residual: Vec<f64> = fx.iter().zip(&x).map(|(f, v)| f - v).collect();
        if let Some(dx) = linalg::solve(&a, &residual) {
            for (v, d) in x.iter_mut().zip(dx) {
                *v += d;
            }
        }
        x
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Similitude) -> Similitude {
        let n = self.dimension();
        let q = linalg::mat_mul(&self.orthogonal, &other.orthogonal, n);
        let mut b = vec![0.0; n];
        self.apply_into(&other.translation, &mut b);
        let ratio = self.ratio * other.ratio;
        let linear = q.iter().map(|v| ratio * v).collect();
        Similitude { ratio, orthogonal: q, translation: b, linear }
    }

    /// Conjugates by the isometry `T(x) = U x + t`, giving `T ∘ f ∘ T⁻¹`.
    /// The attractor of the conjugated system is `T(E)`.
    pub fn conjugate(&self, rotation: &[f64], shift: &[f64]) -> Result<Similitude, Error> {
        let n = self.dimension();
        if rotation.len() != n * n || shift.len() != n {
            return Err(Error::DimensionMismatch {
                context: format!("isometry for a {n}-dimensional map"),
                expected: n,
                found: shift.len(),
            });
        }
        let ut = linalg::transpose(rotation, n);
        let q = linalg::mat_mul(&linalg::mat_mul(rotation, &self.orthogonal, n), &ut, n);
        // b' = U b + t - r (U Q Uᵀ) t
        let mut ub = vec![0.0; n];
        linalg::mat_vec(rotation, &self.translation, &mut ub);
        let mut qt = vec![0.0; n];
        linalg::mat_vec(&q, shift, &mut qt);
        let b: Vec<f64> = (0..n).map(|i| ub[i] + shift[i] - self.ratio * qt[i]).collect();
        Similitude::new(self.ratio, q, b)
    }

    /// Same map with the translation multiplied by `factor`; the attractor
    /// scales by `factor` about the origin.
    pub fn with_scaled_translation(&self, factor: f64) -> Similitude {
        let mut s = self.clone();
        for b in &mut s.translation {
            *b *= factor;
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rotation(theta: f64) -> Vec<f64> {
        let (s, c) = libm::sincos(theta);
        vec![c, -s, s, c]
    }

    #[test]
    fn fixed_points_of_simple_maps() {
        let f = Similitude::homothety(1.0 / 3.0, vec![0.0]).unwrap();
        assert_eq!(f.fixed_point(), vec![0.0]);
        let f = Similitude::homothety(1.0 / 3.0, vec![2.0 / 3.0]).unwrap();
        assert!((f.fixed_point()[0] - 1.0).abs() < 1e-15);
        let r = 0.2;
        let h = 3f64.sqrt() / 2.0;
        let f = Similitude::homothety(r, vec![(1.0 - r) / 2.0, (1.0 - r) * h]).unwrap();
        let x = f.fixed_point();
        assert!((x[0] - 0.5).abs() < 1e-15 && (x[1] - h).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_ratio() {
        for r in [0.0, 1.0, -0.5, 1.5] {
            assert!(matches!(Similitude::homothety(r, vec![0.0]), Err(Error::RatioOutOfRange { .. })));
        }
        assert!(matches!(Similitude::homothety(f64::NAN, vec![0.0]), Err(Error::NonFinite { .. })));
    }

    #[test]
    fn rejects_non_orthogonal() {
        let err = Similitude::new(0.5, vec![1.0, 0.1, 0.0, 1.0], vec![0.0, 0.0]).unwrap_err();
        assert!(matches!(err, Error::NotOrthogonal { .. }));
        let err = Similitude::new(0.5, vec![1.0, 0.0, 0.0], vec![0.0, 0.0]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn rounded_rotation_is_cleaned_up() {
        let mut q = rotation(1.0);
        q[0] += 4e-13;
        let f = Similitude::new(0.5, q, vec![0.0, 0.0]).unwrap();
        assert!(linalg::orthogonality_defect(f.orthogonal(), 2) < 1e-15);
    }

    #[test]
    fn compose_matches_sequential_application() {
        let f = Similitude::new(0.5, rotation(0.7), vec![0.1, -0.3]).unwrap();
        let g = Similitude::new(0.25, rotation(-1.1), vec![0.4, 0.2]).unwrap();
        let x = [0.3, 0.9];
        let a = f.compose(&g).apply(&x);
        let b = f.apply(&g.apply(&x));
        assert!(linalg::dist(&a, &b) < 1e-15);
    }

    proptest! {
        #[test]
        fn contracts_distances_by_ratio(
            r in 0.01f64..0.99, theta in -3.2f64..3.2, bx in -2.0f64..2.0, by in -2.0f64..2.0,
            x in proptest::array::uniform2(-5.0f64..5.0), y in proptest::array::uniform2(-5.0f64..5.0),
        ) {
            let f = Similitude::new(r, rotation(theta), vec![bx, by]).unwrap();
            let d = linalg::dist(&x, &y);
            let fd = linalg::dist(&f.apply(&x), &f.apply(&y));
            prop_assert!((fd - r * d).abs() <= 1e-12 * (1.0 + r * d));
        }

        #[test]
        fn fixed_point_is_fixed(
            r in 0.01f64..0.99, theta in -3.2f64..3.2, bx in -2.0f64..2.0, by in -2.0f64..2.0,
        ) {
            let f = Similitude::new(r, rotation(theta), vec![bx, by]).unwrap();
            let x = f.fixed_point();
            let fx = f.apply(&x);
            prop_assert!(linalg::dist(&fx, &x) <= 1e-12 * (1.0 + linalg::norm(&x)));
        }
    }
}
