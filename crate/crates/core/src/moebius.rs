//! Lifts of projective circle actions of `SL(2, R)` matrices to the line.
//!
//! The boundary circle is parametrized by `t` in `R/Z` via the direction
//! `[cos(pi t) : sin(pi t)]` in `RP^1`. A matrix acts projectively; its
//! canonical lift `F_0` is the unique continuous lift with `F_0(0)` in
//! `[0, 1)`, and a `MoebiusLift` is `F_0 + deck` for an integer deck offset.
//! Such lifts commute with `T_1` exactly.

use alloc::vec::Vec;

use crate::fixed_points::FixedPointKind;
use crate::plz::{Orientation, PlMap};
use crate::rat;
use crate::real;

/// Determinant and residual tolerance for certified quantities.
pub const CERT_TOL: f64 = 1e-12;
/// Trace window around 2 treated as parabolic.
const PARABOLIC_TOL: f64 = 1e-9;

pub type Mat2 = [[f64; 2]; 2];

#[derive(Clone, Copy, Debug)]
pub struct MoebiusLift {
    m: Mat2,
    deck: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MoebiusError {
    NonUnitDeterminant,
}

impl core::fmt::Display for MoebiusError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            MoebiusError::NonUnitDeterminant => {
                write!(f, "matrix determinant must be +1 within tolerance")
            }
        }
    }
}

impl core::error::Error for MoebiusError {}

fn det(m: &Mat2) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

/// Circle-map value in `[0, 1)` of the projective action at angle `t0`.
fn circle_image(m: &Mat2, t0: f64) -> f64 {
    let (s, c) = (real::sin(core::f64::consts::PI * t0), real::cos(core::f64::consts::PI * t0));
    let u = m[0][0] * c + m[0][1] * s;
    let v = m[1][0] * c + m[1][1] * s;
    let w = real::atan2(v, u) / core::f64::consts::PI;
    let r = w - real::floor(w);
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Canonical lift: continuous, `F_0(0)` in `[0, 1)`.
fn canonical_lift(m: &Mat2, t: f64) -> f64 {
    let n = real::floor(t);
    let t0 = t - n;
    let g0 = circle_image(m, 0.0);
    let g = circle_image(m, t0);
    let in_period = if g >= g0 { g } else { g + 1.0 };
    in_period + n
}

impl MoebiusLift {
    /// Normalizes the determinant to 1 (rejecting orientation-reversing
    /// matrices) and wraps the canonical lift shifted by `deck`.
    pub fn new(m: Mat2, deck: i64) -> Result<Self, MoebiusError> {
        let d = det(&m);
        if d <= 0.0 {
            return Err(MoebiusError::NonUnitDeterminant);
        }
        let s = real::sqrt(d);
        let m = [[m[0][0] / s, m[0][1] / s], [m[1][0] / s, m[1][1] / s]];
        if real::abs(det(&m) - 1.0) > 1e-9 {
            return Err(MoebiusError::NonUnitDeterminant);
        }
        Ok(MoebiusLift { m, deck })
    }

    pub fn identity() -> Self {
        MoebiusLift {
            m: [[1.0, 0.0], [0.0, 1.0]],
            deck: 0,
        }
    }

    /// The lift of a hyperbolic matrix whose deck offset makes it fix its
    /// axis endpoints (hence hyperbolic-like).
    pub fn axis_normalized(m: Mat2) -> Result<Self, MoebiusError> {
        let base = MoebiusLift::new(m, 0)?;
        let tr = real::abs(base.m[0][0] + base.m[1][1]);
        if tr <= 2.0 + PARABOLIC_TOL {
            return Err(MoebiusError::NonUnitDeterminant);
        }
        let mm = if base.m[0][0] + base.m[1][1] < 0.0 {
            [
                [-base.m[0][0], -base.m[0][1]],
                [-base.m[1][0], -base.m[1][1]],
            ]
        } else {
            base.m
        };
        let lambda = (tr + real::sqrt(tr * tr - 4.0)) / 2.0;
        let t_att = eigen_angle(&mm, lambda);
        let delta = base.eval(t_att) - t_att;
        let deck = -real::round(delta) as i64;
        Ok(MoebiusLift { m: base.m, deck })
    }

    pub fn translation(k: i64) -> Self {
        MoebiusLift {
            m: [[1.0, 0.0], [0.0, 1.0]],
            deck: k,
        }
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.m
    }

    pub fn deck(&self) -> i64 {
        self.deck
    }

    pub fn eval(&self, t: f64) -> f64 {
        canonical_lift(&self.m, t) + self.deck as f64
    }

    /// Derivative of the circle map at angle `t`: `1 / |M v(t)|^2` for the
    /// unit direction `v(t)` (determinant 1).
    pub fn derivative(&self, t: f64) -> f64 {
        let (s, c) = (real::sin(core::f64::consts::PI * t), real::cos(core::f64::consts::PI * t));
        let u = self.m[0][0] * c + self.m[0][1] * s;
        let v = self.m[1][0] * c + self.m[1][1] * s;
        1.0 / (u * u + v * v)
    }

    /// `self(other(x))`. The result deck is fixed pointwise against the
    /// stored product matrix: the canonical lift of a product computed in
    /// floating point may be the `+1` branch near the identity, and the deck
    /// must absorb whichever branch it lands on. The defect is an integer in
    /// exact arithmetic; it is measured at several anchors and the cleanest
    /// rounding wins, which keeps ill-conditioned products sane.
    pub fn compose(&self, other: &MoebiusLift) -> MoebiusLift {
        let m = mat_mul(&self.m, &other.m);
        let d = det(&m);
        let s = real::sqrt(d);
        let m = [[m[0][0] / s, m[0][1] / s], [m[1][0] / s, m[1][1] / s]];
        let deck = best_integer_delta(|t| self.eval(other.eval(t)) - canonical_lift(&m, t));
        MoebiusLift { m, deck }
    }

    pub fn invert(&self) -> MoebiusLift {
        let inv = [
            [self.m[1][1], -self.m[0][1]],
            [-self.m[1][0], self.m[0][0]],
        ];
        // The inverse map sends self.eval(t) back to t.
        let deck = best_integer_delta(|t| canonical_lift(&inv, self.eval(t)) - t);
        MoebiusLift {
            m: inv,
            deck: -deck,
        }
    }

    pub fn approx_eq(&self, other: &MoebiusLift, tol: f64) -> bool {
        if self.deck != other.deck {
            return false;
        }
        let close = |sign: f64| {
            (0..2).all(|i| {
                (0..2).all(|j| real::abs(self.m[i][j] - sign * other.m[i][j]) <= tol)
            })
        };
        close(1.0) || close(-1.0)
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.approx_eq(&MoebiusLift::identity(), tol)
    }

    /// Fixed points in `[0, 1)` with kind, certified radius, and circle-map
    /// derivative. Closed-form from the eigendirections; the kind comes from
    /// the eigenvalues alone.
    pub fn fixed_points(&self) -> Vec<(f64, FixedPointKind, f64, f64)> {
        let mut m = self.m;
        let tr = m[0][0] + m[1][1];
        if tr < 0.0 {
            for row in &mut m {
                for e in row.iter_mut() {
                    *e = -*e;
                }
            }
        }
        let tr = real::abs(tr);
        if tr < 2.0 - PARABOLIC_TOL {
            return Vec::new();
        }
        let this = MoebiusLift { m, deck: self.deck };
        if tr <= 2.0 + PARABOLIC_TOL {
            // Parabolic: one degenerate direction per period.
            let t = eigen_angle(&m, 1.0);
            let delta = this.eval(t) - t;
            if real::abs(delta) < 0.25 {
                return alloc::vec![(wrap_unit(t), FixedPointKind::Degenerate, 1e-9, 1.0)];
            }
            return Vec::new();
        }
        let lambda = (tr + real::sqrt(tr * tr - 4.0)) / 2.0;
        let t_att = eigen_angle(&m, lambda);
        let t_rep = eigen_angle(&m, 1.0 / lambda);
        // The lift fixes the eigendirections iff its integer displacement
        // there vanishes.
        let delta = this.eval(t_att) - t_att;
        let offset = real::round(delta);
        debug_assert!(real::abs(delta - offset) < 1e-6);
        if offset as i64 != 0 {
            return Vec::new();
        }
        let d_att = 1.0 / (lambda * lambda);
        let d_rep = lambda * lambda;
        let radius = |t: f64, deriv: f64| -> f64 {
            let resid = real::abs(this.eval(t) - t);
            real::max(1e-15, 2.0 * resid / real::abs(1.0 - deriv))
        };
        let mut out = alloc::vec![
            (
                wrap_unit(t_att),
                FixedPointKind::Attracting,
                radius(t_att, d_att),
                d_att
            ),
            (
                wrap_unit(t_rep),
                FixedPointKind::Repelling,
                radius(t_rep, d_rep),
                d_rep
            ),
        ];
        out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        out
    }

    /// Interval certified to contain the translation number, from `n`
    /// iterations at 0.
    pub fn translation_interval(&self, n: u32) -> (f64, f64) {
        let n = n.max(1);
        let mut x = 0.0;
        for _ in 0..n {
            x = self.eval(x);
        }
        let slop = n as f64 * CERT_TOL;
        (
            (x - 1.0 - slop) / n as f64,
            (x + 1.0 + slop) / n as f64,
        )
    }

    /// Samples the lift on a uniform grid and interpolates. Returns the map
    /// and a declared agreement tolerance (measured at cell midpoints).
    pub fn pl_approximation(&self, grid: usize) -> (PlMap, f64) {
        assert!(grid >= 2);
        let mut pts = Vec::with_capacity(grid);
        for i in 0..grid {
            let t = i as f64 / grid as f64;
            let y = self.eval(t);
            pts.push((
                rat::rat(i as i64, grid as i64),
                rat::from_f64(y).expect("finite sample"),
            ));
        }
        let pl = PlMap::new(pts, Orientation::Preserving)
            .expect("samples of a strictly increasing lift form a valid PL map");
        let mut worst: f64 = 0.0;
        for i in 0..grid {
            let t = (i as f64 + 0.5) / grid as f64;
            let exact = self.eval(t);
            let approx = rat::to_f64(&pl.eval(&rat::from_f64(t).unwrap()));
            worst = real::max(worst, real::abs(exact - approx));
        }
        (pl, 2.0 * worst + CERT_TOL)
    }
}

/// Evaluates an integer-valued quantity at several anchors and returns the
/// rounding with the smallest defect.
fn best_integer_delta<F: Fn(f64) -> f64>(f: F) -> i64 {
    let mut best = (f64::INFINITY, 0i64);
    for t in [0.0, 0.37, 0.613, 0.841] {
        let delta = f(t);
        let r = real::round(delta);
        let defect = real::abs(delta - r);
        if defect < best.0 {
            best = (defect, r as i64);
        }
    }
    best.1
}

fn wrap_unit(t: f64) -> f64 {
    let r = t - real::floor(t);
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Angle in `[0, 1)` of the eigendirection for eigenvalue `lambda`.
fn eigen_angle(m: &Mat2, lambda: f64) -> f64 {
    // (A - lambda) v = 0; take the better-conditioned of the two rows.
    let v1 = (m[0][1], lambda - m[0][0]);
    let v2 = (lambda - m[1][1], m[1][0]);
    let n1 = v1.0 * v1.0 + v1.1 * v1.1;
    let n2 = v2.0 * v2.0 + v2.1 * v2.1;
    let (x, y) = if n1 >= n2 { v1 } else { v2 };
    let t = real::atan2(y, x) / core::f64::consts::PI;
    wrap_unit(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag_2() -> MoebiusLift {
        MoebiusLift::new([[2.0, 0.0], [0.0, 0.5]], 0).unwrap()
    }

    #[test]
    fn diag_fixed_points_golden() {
        // Eigendirections e1 (angle 0) attracting and e2 (angle 1/2)
        // repelling; circle-map derivative 1/4 at the attractor.
        let f = diag_2();
        let fps = f.fixed_points();
        assert_eq!(fps.len(), 2);
        assert!(fps[0].0.abs() < 1e-12);
        assert_eq!(fps[0].1, FixedPointKind::Attracting);
        assert!((fps[0].3 - 0.25).abs() < 1e-12);
        assert!((fps[1].0 - 0.5).abs() < 1e-12);
        assert_eq!(fps[1].1, FixedPointKind::Repelling);
        assert!((fps[1].3 - 4.0).abs() < 1e-12);
    }

    #[test]
    fn shifted_lift_is_fixed_point_free() {
        let f = MoebiusLift::new([[2.0, 0.0], [0.0, 0.5]], 1).unwrap();
        assert!(f.fixed_points().is_empty());
    }

    #[test]
    fn translation_eval() {
        let t = MoebiusLift::translation(2);
        assert!((t.eval(0.3) - 2.3).abs() < 1e-12);
    }

    #[test]
    fn commutes_with_integer_translation() {
        let f = MoebiusLift::new([[1.3, 0.4], [0.7, (1.0 + 0.4 * 0.7) / 1.3]], 0).unwrap();
        for i in 0..20 {
            let t = -1.7 + 0.19 * i as f64;
            assert!((f.eval(t + 1.0) - (f.eval(t) + 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn compose_matches_pointwise() {
        let a = diag_2();
        let rot = {
            let th: f64 = 0.7;
            MoebiusLift::new(
                [[real::cos(th), -real::sin(th)], [real::sin(th), real::cos(th)]],
                0,
            )
            .unwrap()
        };
        let c = a.compose(&rot);
        for i in 0..50 {
            let t = -2.0 + 0.13 * i as f64;
            assert!((c.eval(t) - a.eval(rot.eval(t))).abs() < 1e-9);
        }
    }

    #[test]
    fn invert_roundtrip() {
        let a = diag_2();
        let id = a.compose(&a.invert());
        assert!(id.is_identity(1e-9));
        for i in 0..10 {
            let t = 0.05 + 0.1 * i as f64;
            assert!((id.eval(t) - t).abs() < 1e-9);
        }
    }

    #[test]
    fn monotone_lift() {
        let f = diag_2();
        let mut prev = f.eval(0.0);
        for i in 1..=64 {
            let t = i as f64 / 64.0;
            let y = f.eval(t);
            assert!(y > prev);
            prev = y;
        }
        assert!((f.eval(1.0) - (f.eval(0.0) + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn pl_approximation_agrees_on_grid() {
        let f = diag_2();
        let (pl, tol) = f.pl_approximation(1024);
        assert!(tol < 1e-4);
        for i in 0..1024 {
            let t = (i as f64 + 0.5) / 1024.0;
            let exact = f.eval(t);
            let approx = rat::to_f64(&pl.eval(&rat::from_f64(t).unwrap()));
            assert!((exact - approx).abs() <= tol);
        }
    }

    #[test]
    fn inverse_of_rotated_translation_is_pointwise_inverse() {
        // The product of a lift and its inverse lands on a noisy identity
        // matrix; the deck bookkeeping must absorb the lift branch.
        let th = core::f64::consts::PI / 4.0;
        let r = [[real::cos(th / 2.0), real::sin(th / 2.0)], [-real::sin(th / 2.0), real::cos(th / 2.0)]];
        let l = 2.0 * 1.5286747939916808f64; // 2*acosh(1+sqrt(2))
        let tr = [[real::cosh(l / 2.0), real::sinh(l / 2.0)], [real::sinh(l / 2.0), real::cosh(l / 2.0)]];
        let ri = [[r[1][1], -r[0][1]], [-r[1][0], r[0][0]]];
        let m = MoebiusLift::new(
            [
                [
                    r[0][0] * tr[0][0] + r[0][1] * tr[1][0],
                    r[0][0] * tr[0][1] + r[0][1] * tr[1][1],
                ],
                [
                    r[1][0] * tr[0][0] + r[1][1] * tr[1][0],
                    r[1][0] * tr[0][1] + r[1][1] * tr[1][1],
                ],
            ],
            0,
        )
        .unwrap();
        let m = m.compose(&MoebiusLift::new(ri, 0).unwrap());
        let id = m.invert().compose(&m);
        for i in 0..40 {
            let t = -1.9 + 0.17 * i as f64;
            assert!((id.eval(t) - t).abs() < 1e-9, "residual {}", id.eval(t) - t);
        }
        let id2 = m.compose(&m.invert());
        for i in 0..40 {
            let t = -1.9 + 0.17 * i as f64;
            assert!((id2.eval(t) - t).abs() < 1e-9);
        }
    }

    #[test]
    fn elliptic_has_no_fixed_points() {
        let th: f64 = 0.4;
        let rot =
            MoebiusLift::new([[real::cos(th), -real::sin(th)], [real::sin(th), real::cos(th)]], 0)
                .unwrap();
        assert!(rot.fixed_points().is_empty());
    }
}
