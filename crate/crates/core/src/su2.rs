//! SU(2) elements as unit quaternions.
//!
//! An element is stored as `(a0, a)` and stands for the 2×2 matrix
//!
//! ```text
//! U = a0·I − i (a·σ)
//! ```
//!
//! so that `exp(−i t ĝ·σ)` is `(cos t, sin t · ĝ)`, the trace is `2·a0`
//! (always real) and `(i/2) Tr[U σ] = a`. Products of these elements are
//! the discretised path ordering used by the holonomy integrators.

use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{AcError, Result};

/// Norm drift above which [`Su2::compose`] renormalises its result.
pub const RENORM_DRIFT: f64 = 1e-14;

/// Real 3-vector helper used for quaternion vector parts and axes.
pub type Vec3 = [f64; 3];

#[inline]
pub(crate) fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub(crate) fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub(crate) fn norm(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

/// A traceless Hermitian generator `g·σ`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Generator3(pub Vec3);

impl Generator3 {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Generator3([x, y, z])
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Generator3([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }

    /// `self + s·other`
    pub fn add_scaled(&self, other: &Generator3, s: f64) -> Self {
        Generator3([
            self.0[0] + s * other.0[0],
            self.0[1] + s * other.0[1],
            self.0[2] + s * other.0[2],
        ])
    }
}

/// Special-unitary 2×2 matrix `a0·I − i (a·σ)` with `a0² + |a|² = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Su2 {
    pub a0: f64,
    pub a: Vec3,
}

impl Default for Su2 {
    fn default() -> Self {
        Su2::identity()
    }
}

impl Su2 {
    pub const fn identity() -> Self {
        Su2 {
            a0: 1.0,
            a: [0.0; 3],
        }
    }

    /// Builds an element from raw components, normalising them.
    pub fn from_components(a0: f64, a: Vec3) -> Result<Self> {
        let n = (a0 * a0 + dot(&a, &a)).sqrt();
        if !n.is_finite() || n == 0.0 {
            return Err(AcError::NonFinite("quaternion components"));
        }
        Ok(Su2 {
            a0: a0 / n,
            a: [a[0] / n, a[1] / n, a[2] / n],
        })
    }

    /// `exp(−i·angle_scale·(g·σ))`.
    pub fn exp(gen: &Generator3, angle_scale: f64) -> Result<Self> {
        if !gen.is_finite() || !angle_scale.is_finite() {
            return Err(AcError::NonFinite("generator"));
        }
        Ok(Self::exp_unchecked(gen, angle_scale))
    }

    #[inline]
    pub(crate) fn exp_unchecked(gen: &Generator3, angle_scale: f64) -> Self {
        let g = gen.norm();
        if g == 0.0 {
            return Su2::identity();
        }
        let t = angle_scale * g;
        let (s, c) = t.sin_cos();
        let k = s / g;
        Su2 {
            a0: c,
            a: [k * gen.0[0], k * gen.0[1], k * gen.0[2]],
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.a0 * self.a0 + dot(&self.a, &self.a)
    }

    /// |a0² + |a|² − 1|
    pub fn norm_deviation(&self) -> f64 {
        (self.norm_sqr() - 1.0).abs()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm_sqr().sqrt();
        Su2 {
            a0: self.a0 / n,
            a: [self.a[0] / n, self.a[1] / n, self.a[2] / n],
        }
    }

    /// Matrix product `self · other`, renormalised once the norm drifts
    /// beyond [`RENORM_DRIFT`].
    #[inline]
    pub fn compose(&self, other: &Su2) -> Su2 {
        let p = self.compose_raw(other);
        if p.norm_deviation() > RENORM_DRIFT {
            p.normalized()
        } else {
            p
        }
    }

    // (a0 − i a·σ)(b0 − i b·σ) = a0b0 − a·b − i (a0 b + b0 a + a×b)·σ
    #[inline]
    pub(crate) fn compose_raw(&self, other: &Su2) -> Su2 {
        let (a0, a) = (self.a0, &self.a);
        let (b0, b) = (other.a0, &other.a);
        let c = cross(a, b);
        Su2 {
            a0: a0 * b0 - dot(a, b),
            a: [
                a0 * b[0] + b0 * a[0] + c[0],
                a0 * b[1] + b0 * a[1] + c[1],
                a0 * b[2] + b0 * a[2] + c[2],
            ],
        }
    }

    /// Inverse (= Hermitian conjugate).
    pub fn inverse(&self) -> Su2 {
        Su2 {
            a0: self.a0,
            a: [-self.a[0], -self.a[1], -self.a[2]],
        }
    }

    /// Real trace `2·a0`. The imaginary part vanishes identically.
    pub fn trace_real(&self) -> f64 {
        2.0 * self.a0
    }

    /// `(½ Tr U, (i/2) Tr[U σ]) = (cos φ, sin φ · b̂)`.
    pub fn axis_decompose(&self) -> (f64, Vec3) {
        (self.a0, self.a)
    }

    /// Explicit matrix `[[u00, u01], [u10, u11]]`.
    pub fn to_matrix(&self) -> [[Complex64; 2]; 2] {
        let (a0, [x, y, z]) = (self.a0, self.a);
        // −i(xσx + yσy + zσz) = [[−iz, −ix − y], [−ix + y, iz]]
        [
            [Complex64::new(a0, -z), Complex64::new(-y, -x)],
            [Complex64::new(y, -x), Complex64::new(a0, z)],
        ]
    }

    /// Frobenius distance between the matrix views, `2·|q − p|`.
    pub fn frobenius_distance(&self, other: &Su2) -> f64 {
        let d0 = self.a0 - other.a0;
        let d = [
            self.a[0] - other.a[0],
            self.a[1] - other.a[1],
            self.a[2] - other.a[2],
        ];
        (2.0 * (d0 * d0 + dot(&d, &d))).sqrt()
    }
}

impl Mul for Su2 {
    type Output = Su2;

    fn mul(self, rhs: Su2) -> Su2 {
        self.compose(&rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    type M2 = [[Complex64; 2]; 2];

    fn matmul(a: &M2, b: &M2) -> M2 {
        let mut c = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    c[i][j] += a[i][k] * b[k][j];
                }
            }
        }
        c
    }

    fn frob(a: &M2, b: &M2) -> f64 {
        let mut s = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                s += (a[i][j] - b[i][j]).norm_sqr();
            }
        }
        s.sqrt()
    }

    fn dagger(a: &M2) -> M2 {
        [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
    }

    const ID: M2 = [
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
    ];

    fn z() -> Generator3 {
        Generator3::new(0.0, 0.0, 1.0)
    }

    fn close(u: &Su2, v: &Su2, tol: f64) -> bool {
        u.frobenius_distance(v) <= tol
    }

    #[test]
    fn identity_components_and_trace() {
        let id = Su2::identity();
        assert_eq!(id.a0, 1.0);
        assert_eq!(id.a, [0.0; 3]);
        assert_eq!(id.trace_real(), 2.0);
    }

    #[test]
    fn exp_half_and_quarter_turns() {
        let u = Su2::exp(&z(), PI).unwrap();
        assert_abs_diff_eq!(u.a0, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(norm(&u.a), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(u.trace_real(), -2.0, epsilon = 1e-15);

        let q = Su2::exp(&z(), PI / 2.0).unwrap();
        assert_abs_diff_eq!(q.a0, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q.a[2], 1.0, epsilon = 1e-15);
        // −iσz
        let m = q.to_matrix();
        assert_abs_diff_eq!(m[0][0].im, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m[1][1].im, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn exp_of_zero_generator_is_identity() {
        for s in [0.0, 1.0, -3.5, 1e6] {
            assert_eq!(Su2::exp(&Generator3::default(), s).unwrap(), Su2::identity());
        }
    }

    #[test]
    fn exp_rejects_non_finite() {
        assert!(Su2::exp(&Generator3::new(f64::NAN, 0.0, 0.0), 1.0).is_err());
        assert!(Su2::exp(&z(), f64::INFINITY).is_err());
    }

    #[test]
    fn same_axis_is_additive() {
        let u = Su2::exp(&z(), 0.3).unwrap() * Su2::exp(&z(), 1.1).unwrap();
        assert!(close(&u, &Su2::exp(&z(), 1.4).unwrap(), 1e-15));
    }

    #[test]
    fn distinct_axes_do_not_commute() {
        let x = Su2::exp(&Generator3::new(1.0, 0.0, 0.0), PI / 2.0).unwrap();
        let y = Su2::exp(&Generator3::new(0.0, 1.0, 0.0), PI / 2.0).unwrap();
        assert!(!close(&(x * y), &(y * x), 1e-3));
    }

    #[test]
    fn trace_is_axis_independent() {
        for b in [[1.0, 0.0, 0.0], [0.0, 0.6, 0.8], [0.5, -0.5, 0.5f64.sqrt()]] {
            let u = Su2::exp(&Generator3(b), 0.77).unwrap();
            assert_abs_diff_eq!(u.trace_real(), 2.0 * 0.77f64.cos(), epsilon = 1e-15);
        }
    }

    #[test]
    fn axis_decompose_cases() {
        let (c, s) = Su2::exp(&z(), PI / 3.0).unwrap().axis_decompose();
        assert_abs_diff_eq!(c, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(s[2], (PI / 3.0).sin(), epsilon = 1e-15);
        let (c, s) = Su2::identity().axis_decompose();
        assert_eq!((c, norm(&s)), (1.0, 0.0));
    }

    #[test]
    fn matrix_view_matches_half_trace_formulas() {
        let u = Su2::from_components(0.3, [0.1, -0.7, 0.4]).unwrap();
        let m = u.to_matrix();
        let tr = m[0][0] + m[1][1];
        assert_abs_diff_eq!(tr.re / 2.0, u.a0, epsilon = 1e-15);
        assert_eq!(tr.im, 0.0);
        // (i/2) Tr[U σx] = (i/2)(u01 + u10)
        let sx = (m[0][1] + m[1][0]) * Complex64::new(0.0, 0.5);
        let sy = (m[0][1] * Complex64::new(0.0, 1.0) - m[1][0] * Complex64::new(0.0, 1.0))
            * Complex64::new(0.0, 0.5);
        let sz = (m[0][0] - m[1][1]) * Complex64::new(0.0, 0.5);
        assert_abs_diff_eq!(sx.re, u.a[0], epsilon = 1e-15);
        assert_abs_diff_eq!(sy.re, u.a[1], epsilon = 1e-15);
        assert_abs_diff_eq!(sz.re, u.a[2], epsilon = 1e-15);
    }

    fn arb_su2() -> impl Strategy<Value = Su2> {
        (
            -1.0..1.0f64,
            -1.0..1.0f64,
            -1.0..1.0f64,
            -1.0..1.0f64,
        )
            .prop_filter("non-degenerate", |(a, b, c, d)| a * a + b * b + c * c + d * d > 1e-3)
            .prop_map(|(a, b, c, d)| Su2::from_components(a, [b, c, d]).unwrap())
    }

    fn arb_gen() -> impl Strategy<Value = Generator3> {
        (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64).prop_map(|(x, y, z)| Generator3::new(x, y, z))
    }

    proptest! {
        #[test]
        fn compose_matches_matrix_product(u in arb_su2(), v in arb_su2()) {
            let w = u.compose(&v);
            prop_assert!(w.norm_deviation() <= 1e-12);
            let m = matmul(&u.to_matrix(), &v.to_matrix());
            prop_assert!(frob(&m, &w.to_matrix()) <= 1e-12);
        }

        #[test]
        fn compose_is_associative(u in arb_su2(), v in arb_su2(), w in arb_su2()) {
            prop_assert!(close(&((u * v) * w), &(u * (v * w)), 1e-12));
        }

        #[test]
        fn identity_is_neutral(u in arb_su2()) {
            prop_assert!(close(&(Su2::identity() * u), &u, 1e-15));
            prop_assert!(close(&(u * Su2::identity()), &u, 1e-15));
        }

        #[test]
        fn exp_one_parameter_subgroup(g in arb_gen(), s in -2.0..2.0f64, t in -2.0..2.0f64) {
            let lhs = Su2::exp(&g, s).unwrap() * Su2::exp(&g, t).unwrap();
            let rhs = Su2::exp(&g, s + t).unwrap();
            prop_assert!(lhs.norm_deviation() <= 1e-12);
            prop_assert!(close(&lhs, &rhs, 1e-12));
        }

        #[test]
        fn trace_is_cyclic(u in arb_su2(), v in arb_su2()) {
            prop_assert!(((u * v).trace_real() - (v * u).trace_real()).abs() <= 1e-12);
        }

        #[test]
        fn matrix_view_is_special_unitary(g in arb_gen(), s in -5.0..5.0f64) {
            let u = Su2::exp(&g, s).unwrap();
            let m = u.to_matrix();
            prop_assert!(frob(&matmul(&dagger(&m), &m), &ID) <= 1e-12);
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            prop_assert!((det - Complex64::new(1.0, 0.0)).norm() <= 1e-12);
        }

        #[test]
        fn axis_decompose_round_trip(u in arb_su2()) {
            let (c, sb) = u.axis_decompose();
            let s = norm(&sb);
            let phi = s.atan2(c);
            let back = if s > 0.0 {
                Su2::exp(&Generator3([sb[0] / s, sb[1] / s, sb[2] / s]), phi).unwrap()
            } else {
                Su2::exp(&Generator3::new(0.0, 0.0, 1.0), phi).unwrap()
            };
            prop_assert!(close(&back, &u, 1e-12));
        }

        #[test]
        fn inverse_cancels(u in arb_su2()) {
            prop_assert!(close(&(u * u.inverse()), &Su2::identity(), 1e-12));
        }
    }
}
