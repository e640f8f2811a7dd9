//! Exact piecewise-linear homeomorphisms of the line that commute
//! (orientation-preserving) or anti-commute (orientation-reversing) with the
//! integer translation `T_1`.
//!
//! A map is stored as its graph over one period: breakpoints `(x_i, y_i)`
//! with `x_i` strictly increasing in `[0, 1)`. Periodicity supplies the rest:
//! `f(x + 1) = f(x) + 1` for preserving maps, `f(x + 1) = f(x) - 1` for
//! reversing ones. All arithmetic is exact rational.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::fixed_points::FixedPointKind;
use crate::rat::{self, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Preserving,
    Reversing,
}

impl Orientation {
    pub fn compose(self, other: Orientation) -> Orientation {
        if self == other {
            Orientation::Preserving
        } else {
            Orientation::Reversing
        }
    }

    /// `+1` added per period for preserving maps, `-1` for reversing.
    fn period_step(self) -> Rat {
        match self {
            Orientation::Preserving => rat::one(),
            Orientation::Reversing => -rat::one(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlMapError {
    Empty,
    BreakpointOutOfRange,
    NotSorted,
    NotMonotone,
}

impl core::fmt::Display for PlMapError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            PlMapError::Empty => write!(f, "a PL map needs at least one breakpoint"),
            PlMapError::BreakpointOutOfRange => {
                write!(f, "breakpoint abscissae must lie in [0, 1)")
            }
            PlMapError::NotSorted => write!(f, "breakpoint abscissae must be strictly increasing"),
            PlMapError::NotMonotone => {
                write!(f, "breakpoint values violate strict monotonicity for the orientation")
            }
        }
    }
}

impl core::error::Error for PlMapError {}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlMap {
    breakpoints: Vec<(Rat, Rat)>,
    orientation: Orientation,
}

impl PlMap {
    /// Builds and validates a map from its graph over one period.
    /// Collinear breakpoints are removed, so equal maps compare equal.
    pub fn new(breakpoints: Vec<(Rat, Rat)>, orientation: Orientation) -> Result<Self, PlMapError> {
        if breakpoints.is_empty() {
            return Err(PlMapError::Empty);
        }
        for (x, _) in &breakpoints {
            if x < &rat::zero() || x >= &rat::one() {
                return Err(PlMapError::BreakpointOutOfRange);
            }
        }
        for w in breakpoints.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(PlMapError::NotSorted);
            }
        }
        let k = breakpoints.len();
        let closure = &breakpoints[0].1 + orientation.period_step();
        match orientation {
            Orientation::Preserving => {
                for w in breakpoints.windows(2) {
                    if w[0].1 >= w[1].1 {
                        return Err(PlMapError::NotMonotone);
                    }
                }
                if breakpoints[k - 1].1 >= closure {
                    return Err(PlMapError::NotMonotone);
                }
            }
            Orientation::Reversing => {
                for w in breakpoints.windows(2) {
                    if w[0].1 <= w[1].1 {
                        return Err(PlMapError::NotMonotone);
                    }
                }
                if breakpoints[k - 1].1 <= closure {
                    return Err(PlMapError::NotMonotone);
                }
            }
        }
        Ok(PlMap {
            breakpoints: simplify(breakpoints, orientation),
            orientation,
        })
    }

    pub fn identity() -> Self {
        PlMap::translation(rat::zero())
    }

    /// `x -> x + t`.
    pub fn translation(t: Rat) -> Self {
        PlMap {
            breakpoints: vec![(rat::zero(), t)],
            orientation: Orientation::Preserving,
        }
    }

    /// `x -> c - x`, the basic orientation-reversing element.
    pub fn reflection(c: Rat) -> Self {
        PlMap {
            breakpoints: vec![(rat::zero(), c)],
            orientation: Orientation::Reversing,
        }
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn breakpoints(&self) -> &[(Rat, Rat)] {
        &self.breakpoints
    }

    pub fn is_identity(&self) -> bool {
        self.orientation == Orientation::Preserving
            && self.breakpoints.len() == 1
            && self.breakpoints[0].0 == self.breakpoints[0].1
            && self.breakpoints[0].0.is_zero()
    }

    /// Is this map `x -> x + t` for some `t`? Returns `t`.
    pub fn as_translation(&self) -> Option<Rat> {
        if self.orientation == Orientation::Preserving && self.breakpoints.len() == 1 {
            Some(&self.breakpoints[0].1 - &self.breakpoints[0].0)
        } else {
            None
        }
    }

    /// Exact evaluation.
    pub fn eval(&self, x: &Rat) -> Rat {
        let n = x.floor();
        let x0 = x - &n;
        let y0 = self.eval_in_period(&x0);
        match self.orientation {
            Orientation::Preserving => y0 + n,
            Orientation::Reversing => y0 - n,
        }
    }

    /// Evaluation for `x0` in `[0, 1)`.
    fn eval_in_period(&self, x0: &Rat) -> Rat {
        let pts = &self.breakpoints;
        let k = pts.len();
        let step = self.orientation.period_step();
        // Locate the segment containing x0.
        let (left, right);
        if x0 < &pts[0].0 {
            left = (&pts[k - 1].0 - rat::one(), &pts[k - 1].1 - &step);
            right = (pts[0].0.clone(), pts[0].1.clone());
        } else {
            let mut lo = 0usize;
            let mut hi = k;
            while hi - lo > 1 {
                let mid = (lo + hi) / 2;
                if &pts[mid].0 <= x0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            if &pts[lo].0 == x0 {
                return pts[lo].1.clone();
            }
            left = (pts[lo].0.clone(), pts[lo].1.clone());
            right = if lo + 1 < k {
                (pts[lo + 1].0.clone(), pts[lo + 1].1.clone())
            } else {
                (&pts[0].0 + rat::one(), &pts[0].1 + &step)
            };
        }
        let (xl, yl) = left;
        let (xr, yr) = right;
        &yl + (&yr - &yl) * (x0 - &xl) / (&xr - &xl)
    }

    /// Graph over one closed period `[x_0, x_0 + 1]`: the breakpoints plus
    /// the periodic image of the first.
    fn extended_points(&self) -> Vec<(Rat, Rat)> {
        let mut pts = self.breakpoints.clone();
        let step = self.orientation.period_step();
        pts.push((&self.breakpoints[0].0 + rat::one(), &self.breakpoints[0].1 + step));
        pts
    }

    /// Slopes of the segments over one period.
    fn slopes(&self) -> Vec<Rat> {
        let pts = self.extended_points();
        pts.windows(2)
            .map(|w| (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0))
            .collect()
    }

    /// Exact composition `self(other(x))` via breakpoint merge.
    pub fn compose(&self, other: &PlMap) -> PlMap {
        let orientation = self.orientation.compose(other.orientation);
        let other_inv = other.invert();
        let mut xs: Vec<Rat> = other.breakpoints.iter().map(|(x, _)| x.clone()).collect();
        for (bx, _) in &self.breakpoints {
            xs.push(rat::frac(&other_inv.eval(bx)));
        }
        xs.sort();
        xs.dedup();
        let breakpoints: Vec<(Rat, Rat)> = xs
            .into_iter()
            .map(|x| {
                let y = self.eval(&other.eval(&x));
                (x, y)
            })
            .collect();
        PlMap::new(breakpoints, orientation).expect("composite of valid PL maps is valid")
    }

    /// Exact inverse.
    pub fn invert(&self) -> PlMap {
        let mut pts: Vec<(Rat, Rat)> = Vec::with_capacity(self.breakpoints.len());
        for (x, y) in &self.breakpoints {
            let m = y.floor();
            match self.orientation {
                Orientation::Preserving => pts.push((y - &m, x - &m)),
                Orientation::Reversing => pts.push((y - &m, x + &m)),
            }
        }
        pts.sort_by(|a, b| a.0.cmp(&b.0));
        PlMap::new(pts, self.orientation).expect("inverse of a valid PL map is valid")
    }

    /// Fixed points in `[0, 1)` with kinds, solved exactly. For reversing
    /// maps the unique fixed point is reported reduced mod 1.
    pub fn fixed_points(&self) -> Vec<(Rat, FixedPointKind)> {
        match self.orientation {
            Orientation::Preserving => self.fixed_points_preserving(),
            Orientation::Reversing => {
                let (x, kind) = self.unique_fixed_point_reversing();
                vec![(rat::frac(&x), kind)]
            }
        }
    }

    fn fixed_points_preserving(&self) -> Vec<(Rat, FixedPointKind)> {
        let pts = self.extended_points();
        let slopes = self.slopes();
        let k = self.breakpoints.len();
        let one = rat::one();
        let mut found: Vec<(Rat, FixedPointKind)> = Vec::new();
        let mut push = |loc: Rat, kind: FixedPointKind| {
            let r = rat::frac(&loc);
            match found.iter_mut().find(|(l, _)| l == &r) {
                Some((_, existing)) => {
                    if kind == FixedPointKind::Degenerate {
                        *existing = FixedPointKind::Degenerate;
                    }
                }
                None => found.push((r, kind)),
            }
        };
        for i in 0..k {
            let (xl, yl) = &pts[i];
            let (xr, _) = &pts[i + 1];
            let s = &slopes[i];
            if s == &one {
                if yl == xl {
                    // A slope-1 segment on the diagonal: an interval of
                    // fixed points, reported by its endpoints.
                    push(xl.clone(), FixedPointKind::Degenerate);
                    push(xr.clone(), FixedPointKind::Degenerate);
                }
                continue;
            }
            let root = (yl - s * xl) / (&one - s);
            if &root < xl || &root >= xr {
                continue;
            }
            let left_slope = if &root == xl {
                &slopes[(i + k - 1) % k]
            } else {
                s
            };
            let kind = if left_slope < &one && s < &one {
                FixedPointKind::Attracting
            } else if left_slope > &one && s > &one {
                FixedPointKind::Repelling
            } else {
                FixedPointKind::Degenerate
            };
            push(root, kind);
        }
        found.sort_by(|a, b| a.0.cmp(&b.0));
        found
    }

    /// A reversing map has exactly one fixed point on all of R; returns its
    /// absolute location and kind.
    pub fn unique_fixed_point_reversing(&self) -> (Rat, FixedPointKind) {
        assert_eq!(self.orientation, Orientation::Reversing);
        // d(x) = f(x) - x is strictly decreasing with d(x+1) = d(x) - 2, so
        // the window [n, n+1] with n = floor(d(0)/2) brackets the zero.
        let d0 = self.eval(&rat::zero());
        let n = (&d0 / rat::rat_int(2)).floor();
        let base = Rat::from_integer(n.to_integer());
        let mut grid: Vec<Rat> = self
            .breakpoints
            .iter()
            .map(|(x, _)| x + &base)
            .collect();
        grid.push(&base + rat::one());
        grid.insert(0, base.clone());
        grid.sort();
        grid.dedup();
        let one = rat::one();
        for w in grid.windows(2) {
            let (xl, xr) = (&w[0], &w[1]);
            let dl = self.eval(xl) - xl;
            let dr = self.eval(xr) - xr;
            if dl >= rat::zero() && dr <= rat::zero() {
                let yl = self.eval(xl);
                let yr = self.eval(xr);
                let s = (&yr - &yl) / (xr - xl);
                let root = if dl.is_zero() {
                    xl.clone()
                } else {
                    (&yl - &s * xl) / (&one - &s)
                };
                let (ls, rs) = self.one_sided_slopes(&root);
                let kind = if ls.abs() < one && rs.abs() < one {
                    FixedPointKind::Attracting
                } else if ls.abs() > one && rs.abs() > one {
                    FixedPointKind::Repelling
                } else {
                    FixedPointKind::Degenerate
                };
                return (root, kind);
            }
        }
        unreachable!("a reversing map always has a fixed point in the bracketing window")
    }

    /// Slopes immediately left and right of `x`.
    fn one_sided_slopes(&self, x: &Rat) -> (Rat, Rat) {
        let x0 = rat::frac(x);
        let slopes = self.slopes();
        let k = self.breakpoints.len();
        // Segment index i covers [x_i, x_{i+1}); abscissae below x_0 fall in
        // the wrapped copy of the last segment.
        let mut idx = k - 1;
        for i in 0..k {
            let next = if i + 1 < k {
                self.breakpoints[i + 1].0.clone()
            } else {
                &self.breakpoints[0].0 + rat::one()
            };
            if x0 >= self.breakpoints[i].0 && x0 < next {
                idx = i;
                break;
            }
        }
        if x0 == self.breakpoints[idx].0 {
            (slopes[(idx + k - 1) % k].clone(), slopes[idx].clone())
        } else {
            (slopes[idx].clone(), slopes[idx].clone())
        }
    }

    /// Range of the displacement `f(x) - x` over one period
    /// (orientation-preserving maps only; the extrema sit at breakpoints).
    pub fn displacement_range(&self) -> (Rat, Rat) {
        assert_eq!(self.orientation, Orientation::Preserving);
        let mut lo: Option<Rat> = None;
        let mut hi: Option<Rat> = None;
        for (x, y) in &self.breakpoints {
            let d = y - x;
            if lo.as_ref().map_or(true, |v| &d < v) {
                lo = Some(d.clone());
            }
            if hi.as_ref().map_or(true, |v| &d > v) {
                hi = Some(d);
            }
        }
        (lo.unwrap(), hi.unwrap())
    }

    /// Largest absolute segment slope.
    pub fn max_abs_slope(&self) -> Rat {
        self.slopes()
            .into_iter()
            .map(|s| s.abs())
            .max()
            .expect("a PL map has at least one segment")
    }
}

/// Removes breakpoints that are collinear with their cyclic neighbours; a
/// cornerless map canonicalizes to the single breakpoint at 0.
fn simplify(mut pts: Vec<(Rat, Rat)>, orientation: Orientation) -> Vec<(Rat, Rat)> {
    let step = match orientation {
        Orientation::Preserving => rat::one(),
        Orientation::Reversing => -rat::one(),
    };
    loop {
        let k = pts.len();
        if k == 1 {
            return pts;
        }
        let mut removed = false;
        let mut i = 0;
        while i < pts.len() && pts.len() > 1 {
            let k = pts.len();
            let prev = if i == 0 {
                (&pts[k - 1].0 - rat::one(), &pts[k - 1].1 - &step)
            } else {
                pts[i - 1].clone()
            };
            let next = if i + 1 == k {
                (&pts[0].0 + rat::one(), &pts[0].1 + &step)
            } else {
                pts[i + 1].clone()
            };
            let cur = &pts[i];
            let lhs = (&cur.1 - &prev.1) * (&next.0 - &cur.0);
            let rhs = (&next.1 - &cur.1) * (&cur.0 - &prev.0);
            if lhs == rhs {
                pts.remove(i);
                removed = true;
            } else {
                i += 1;
            }
        }
        if !removed {
            return pts;
        }
        if pts.len() == 1 {
            // Cornerless: pin the representative breakpoint at 0.
            let (x, y) = pts.pop().unwrap();
            let value_at_zero = match orientation {
                Orientation::Preserving => &y - &x,
                Orientation::Reversing => &y + &x,
            };
            return vec![(rat::zero(), value_at_zero)];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn spec_example_map() -> PlMap {
        // Breakpoints (0,0), (1/4,3/8), (1/2,1/2), (3/4,5/8).
        PlMap::new(
            vec![
                (rat(0, 1), rat(0, 1)),
                (rat(1, 4), rat(3, 8)),
                (rat(1, 2), rat(1, 2)),
                (rat(3, 4), rat(5, 8)),
            ],
            Orientation::Preserving,
        )
        .unwrap()
    }

    #[test]
    fn identity_eval() {
        let id = PlMap::identity();
        assert_eq!(id.eval(&rat(3, 10)), rat(3, 10));
        assert!(id.is_identity());
    }

    #[test]
    fn translation_eval() {
        let t = PlMap::translation(rat(1, 2));
        assert_eq!(t.eval(&rat(3, 4)), rat(5, 4));
    }

    #[test]
    fn breakpoint_readoff() {
        let f = spec_example_map();
        assert_eq!(f.eval(&rat(1, 4)), rat(3, 8));
    }

    #[test]
    fn periodicity_exact() {
        let f = spec_example_map();
        let x = rat(13, 100);
        assert_eq!(f.eval(&(&x + rat(1, 1))), f.eval(&x) + rat(1, 1));
        assert_eq!(f.eval(&(&x - rat(3, 1))), f.eval(&x) - rat(3, 1));
    }

    #[test]
    fn reversing_anticommutes() {
        let r = PlMap::reflection(rat(1, 3));
        let x = rat(2, 7);
        assert_eq!(r.eval(&(&x + rat(1, 1))), r.eval(&x) - rat(1, 1));
        assert_eq!(r.eval(&x), rat(1, 3) - &x);
    }

    #[test]
    fn compose_translations() {
        let t = PlMap::translation(rat(1, 2));
        let c = t.compose(&t);
        assert_eq!(c.as_translation(), Some(rat(1, 1)));
    }

    #[test]
    fn compose_exactness() {
        let f = spec_example_map();
        let g = PlMap::translation(rat(1, 3));
        let c = f.compose(&g);
        for i in 0..40 {
            let x = rat(i, 17) - rat(1, 1);
            assert_eq!(c.eval(&x), f.eval(&g.eval(&x)));
        }
    }

    #[test]
    fn invert_roundtrip_is_identity() {
        let f = spec_example_map();
        assert!(f.compose(&f.invert()).is_identity());
        assert!(f.invert().compose(&f).is_identity());
        let t = PlMap::translation(rat(1, 3));
        assert_eq!(t.invert().as_translation(), Some(rat(-1, 3)));
    }

    #[test]
    fn reversing_times_reversing_preserves() {
        let r1 = PlMap::reflection(rat(0, 1));
        let r2 = PlMap::reflection(rat(1, 4));
        let c = r2.compose(&r1);
        assert_eq!(c.orientation(), Orientation::Preserving);
        assert_eq!(c.as_translation(), Some(rat(1, 4)));
    }

    #[test]
    fn fixed_points_of_spec_map() {
        // Slopes 3/2 and 1/2 at the diagonal crossings force the kinds.
        let f = spec_example_map();
        let fps = f.fixed_points();
        assert_eq!(fps.len(), 2);
        assert_eq!(fps[0], (rat(0, 1), FixedPointKind::Repelling));
        assert_eq!(fps[1], (rat(1, 2), FixedPointKind::Attracting));
    }

    #[test]
    fn translation_has_no_fixed_points() {
        let t = PlMap::translation(rat(1, 2));
        assert!(t.fixed_points().is_empty());
    }

    #[test]
    fn degenerate_interval_is_reported() {
        // Slope-1 segment on the diagonal over [0, 1/4].
        let f = PlMap::new(
            vec![
                (rat(0, 1), rat(0, 1)),
                (rat(1, 4), rat(1, 4)),
                (rat(1, 2), rat(3, 8)),
            ],
            Orientation::Preserving,
        )
        .unwrap();
        let fps = f.fixed_points();
        assert!(fps.iter().any(|(_, k)| *k == FixedPointKind::Degenerate));
    }

    #[test]
    fn reversing_unique_fixed_point() {
        let r = PlMap::reflection(rat(1, 3));
        let (x, kind) = r.unique_fixed_point_reversing();
        assert_eq!(x, rat(1, 6));
        assert_eq!(kind, FixedPointKind::Degenerate); // |slope| = 1
        let fps = r.fixed_points();
        assert_eq!(fps.len(), 1);
    }

    #[test]
    fn simplify_collinear() {
        let f = PlMap::new(
            vec![
                (rat(0, 1), rat(1, 8)),
                (rat(1, 4), rat(3, 8)),
                (rat(1, 2), rat(5, 8)),
            ],
            Orientation::Preserving,
        )
        .unwrap();
        // (1/4, 3/8) lies on the line through its neighbours.
        assert_eq!(f.as_translation(), Some(rat(1, 8)));
    }

    #[test]
    fn rejects_non_monotone() {
        let bad = PlMap::new(
            vec![(rat(0, 1), rat(1, 2)), (rat(1, 2), rat(1, 4))],
            Orientation::Preserving,
        );
        assert_eq!(bad.unwrap_err(), PlMapError::NotMonotone);
    }

    #[test]
    fn displacement_range_signs() {
        let f = spec_example_map();
        let (lo, hi) = f.displacement_range();
        assert!(lo < rat(0, 1) || lo == rat(0, 1));
        assert!(hi >= rat(0, 1));
        let t = PlMap::translation(rat(1, 2));
        assert_eq!(t.displacement_range(), (rat(1, 2), rat(1, 2)));
    }
}
