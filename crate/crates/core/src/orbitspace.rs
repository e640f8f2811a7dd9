//! Exact geometry of the skew orbit-space strip `{ (x, y) : |x - y| < 1 }`
//! with stable leaves horizontal and unstable leaves vertical: the half-step
//! and one-step maps, lozenges, strings of lozenges, and leaf saturations.

use alloc::vec::Vec;

use crate::rat::{self, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrbitPoint {
    /// Unstable coordinate (vertical leaf through the point is `u = x`).
    pub x: Rat,
    /// Stable coordinate (horizontal leaf through the point is `v = y`).
    pub y: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitSpaceError {
    OutsideStrip,
}

impl core::fmt::Display for OrbitSpaceError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            OrbitSpaceError::OutsideStrip => write!(f, "point lies outside the strip |x - y| < 1"),
        }
    }
}

impl core::error::Error for OrbitSpaceError {}

impl OrbitPoint {
    pub fn new(x: Rat, y: Rat) -> Result<Self, OrbitSpaceError> {
        if rat::abs(&(&x - &y)) >= rat::one() {
            return Err(OrbitSpaceError::OutsideStrip);
        }
        Ok(OrbitPoint { x, y })
    }

    pub fn from_ints(x: i64, y: i64) -> Result<Self, OrbitSpaceError> {
        OrbitPoint::new(rat::rat_int(x), rat::rat_int(y))
    }
}

/// Half-step-up map: the intersection of the stable leaf through the upper
/// boundary point of `o` with the unstable leaf through the lower one.
/// Fixed-point free; exchanges the leaf directions.
pub fn eta(o: &OrbitPoint) -> OrbitPoint {
    OrbitPoint {
        x: &o.y + rat::one(),
        y: &o.x + rat::one(),
    }
}

pub fn eta_inverse(o: &OrbitPoint) -> OrbitPoint {
    OrbitPoint {
        x: &o.y - rat::one(),
        y: &o.x - rat::one(),
    }
}

pub fn eta_pow(o: &OrbitPoint, k: i64) -> OrbitPoint {
    let mut p = o.clone();
    for _ in 0..k.unsigned_abs() {
        p = if k > 0 { eta(&p) } else { eta_inverse(&p) };
    }
    p
}

/// One-step-up map `tau = eta . eta`; acts as `+2` on both strip coordinates.
pub fn tau(o: &OrbitPoint) -> OrbitPoint {
    eta(&eta(o))
}

/// Stable coordinate of the leaf through `o`.
pub fn project_s(o: &OrbitPoint) -> Rat {
    o.y.clone()
}

/// Unstable coordinate of the leaf through `o`.
pub fn project_u(o: &OrbitPoint) -> Rat {
    o.x.clone()
}

/// Normalized stable chart: rescales so that `tau` acts as `T_1`.
pub fn stable_chart(o: &OrbitPoint) -> Rat {
    project_s(o) / rat::rat_int(2)
}

/// The ideal quadrilateral with corners `o` and `eta(o)`; the corners belong
/// to the lozenge, the sides do not. As a set it is the open axis-aligned
/// rectangle `(x, y+1) x (y, x+1)` plus the two corner points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lozenge {
    corner: OrbitPoint,
}

impl Lozenge {
    pub fn new(corner: OrbitPoint) -> Self {
        Lozenge { corner }
    }

    pub fn corner(&self) -> &OrbitPoint {
        &self.corner
    }

    pub fn opposite_corner(&self) -> OrbitPoint {
        eta(&self.corner)
    }

    /// Exact membership: corners in, sides out.
    pub fn contains(&self, p: &OrbitPoint) -> bool {
        let c = &self.corner;
        let d = self.opposite_corner();
        if p == c || p == &d {
            return true;
        }
        p.x > c.x && p.x < d.x && p.y > c.y && p.y < d.y
    }

    /// Stable-coordinate range `[y, x+1]` swept by leaves meeting the lozenge.
    fn stable_band(&self) -> (Rat, Rat) {
        (self.corner.y.clone(), &self.corner.x + rat::one())
    }

    /// Unstable-coordinate range `[x, y+1]`.
    fn unstable_band(&self) -> (Rat, Rat) {
        (self.corner.x.clone(), &self.corner.y + rat::one())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SaturationDirection {
    Stable,
    Unstable,
    Union,
}

/// Saturation of a lozenge by stable and/or unstable leaves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaturationRegion {
    pub base: Lozenge,
    pub direction: SaturationDirection,
}

/// Is `p` in the saturation? A point is in the stable saturation iff the
/// horizontal line through it meets the lozenge, i.e. its stable coordinate
/// lies in the closed band `[y, x+1]`; dually for unstable.
pub fn saturation_contains(region: &SaturationRegion, p: &OrbitPoint) -> bool {
    let stable = {
        let (lo, hi) = region.base.stable_band();
        p.y >= lo && p.y <= hi
    };
    let unstable = {
        let (lo, hi) = region.base.unstable_band();
        p.x >= lo && p.x <= hi
    };
    match region.direction {
        SaturationDirection::Stable => stable,
        SaturationDirection::Unstable => unstable,
        SaturationDirection::Union => stable || unstable,
    }
}

/// Whole-lozenge containment in a saturation, decided from corner bands.
pub fn lozenge_in_saturation(
    inner: &Lozenge,
    outer: &Lozenge,
    direction: SaturationDirection,
) -> bool {
    match direction {
        SaturationDirection::Stable => {
            let (lo, hi) = outer.stable_band();
            let (ilo, ihi) = inner.stable_band();
            ilo >= lo && ihi <= hi
        }
        SaturationDirection::Unstable => {
            let (lo, hi) = outer.unstable_band();
            let (ilo, ihi) = inner.unstable_band();
            ilo >= lo && ihi <= hi
        }
        SaturationDirection::Union => {
            lozenge_in_saturation(inner, outer, SaturationDirection::Stable)
                || lozenge_in_saturation(inner, outer, SaturationDirection::Unstable)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConsecutivePosition {
    StableContained,
    UnstableContained,
    Neither,
}

/// Relative position of `next` with respect to `prev` per the allowed
/// dichotomy; when both containments hold (identical lozenges) the stable
/// report takes precedence.
pub fn consecutive_lozenge_check(prev: &Lozenge, next: &Lozenge) -> ConsecutivePosition {
    if lozenge_in_saturation(next, prev, SaturationDirection::Stable) {
        ConsecutivePosition::StableContained
    } else if lozenge_in_saturation(next, prev, SaturationDirection::Unstable) {
        ConsecutivePosition::UnstableContained
    } else {
        ConsecutivePosition::Neither
    }
}

/// Lozenges with corners `eta^k(o)` for `k` in `[-n_range, n_range]`;
/// consecutive entries share exactly one corner.
pub fn string_of_lozenges(o: &OrbitPoint, n_range: u32) -> Vec<Lozenge> {
    let n = n_range as i64;
    let mut out = Vec::with_capacity(2 * n_range as usize + 1);
    let mut p = eta_pow(o, -n);
    for k in -n..=n {
        out.push(Lozenge::new(p.clone()));
        if k < n {
            p = eta(&p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn pt(x: Rat, y: Rat) -> OrbitPoint {
        OrbitPoint::new(x, y).unwrap()
    }

    #[test]
    fn eta_on_diagonal() {
        let o = pt(rat(0, 1), rat(0, 1));
        assert_eq!(eta(&o), pt(rat(1, 1), rat(1, 1)));
        let o = pt(rat(3, 2), rat(3, 2));
        assert_eq!(eta(&o), pt(rat(5, 2), rat(5, 2)));
    }

    #[test]
    fn eta_squared_is_tau() {
        let o = pt(rat(1, 3), rat(-1, 4));
        let t = tau(&o);
        assert_eq!(t.x, &o.x + rat(2, 1));
        assert_eq!(t.y, &o.y + rat(2, 1));
        assert_eq!(eta(&eta(&o)), t);
    }

    #[test]
    fn eta_is_fixed_point_free_with_positive_displacement() {
        for i in -3..4 {
            for j in -3..4 {
                let x = rat(i, 4);
                let y = &x + rat(j, 8);
                if rat::abs(&(&y - &x)) >= rat(1, 1) {
                    continue;
                }
                let o = pt(x.clone(), y.clone());
                let im = eta(&o);
                assert_ne!(im, o);
                assert!(im.x > o.x);
                assert!(im.y > o.y);
            }
        }
    }

    #[test]
    fn projections() {
        let o = pt(rat(3, 10), rat(1, 10));
        assert_eq!(project_s(&o), rat(1, 10));
        assert_eq!(project_u(&o), rat(3, 10));
        assert_eq!(project_s(&eta(&o)), project_u(&o) + rat(1, 1));
        assert_eq!(project_s(&tau(&o)), project_s(&o) + rat(2, 1));
        assert_eq!(stable_chart(&tau(&o)), stable_chart(&o) + rat(1, 1));
    }

    #[test]
    fn eta_inverse_roundtrip() {
        let o = pt(rat(5, 7), rat(2, 7));
        assert_eq!(eta_inverse(&eta(&o)), o);
        assert_eq!(eta_pow(&o, 3), eta(&eta(&eta(&o))));
    }

    #[test]
    fn string_corners_match_eta_orbit() {
        let o = pt(rat(3, 2), rat(3, 2));
        let string = string_of_lozenges(&o, 1);
        assert_eq!(string.len(), 3);
        assert_eq!(string[0].corner(), &pt(rat(1, 2), rat(1, 2)));
        assert_eq!(string[1].corner(), &pt(rat(3, 2), rat(3, 2)));
        assert_eq!(string[2].corner(), &pt(rat(5, 2), rat(5, 2)));
        // Consecutive lozenges share exactly one corner.
        for w in string.windows(2) {
            assert_eq!(w[0].opposite_corner(), *w[1].corner());
        }
    }

    #[test]
    fn lozenge_membership() {
        let l = Lozenge::new(pt(rat(3, 2), rat(3, 2)));
        assert!(l.contains(l.corner()));
        assert!(l.contains(&l.opposite_corner()));
        assert!(l.contains(&pt(rat(2, 1), rat(2, 1))));
        // Side points are not part of the lozenge.
        assert!(!l.contains(&pt(rat(3, 2), rat(2, 1))));
        assert!(!l.contains(&pt(rat(7, 2), rat(7, 2))));
    }

    #[test]
    fn saturation_membership() {
        let l = Lozenge::new(pt(rat(3, 2), rat(3, 2)));
        let stable = SaturationRegion {
            base: l.clone(),
            direction: SaturationDirection::Stable,
        };
        let unstable = SaturationRegion {
            base: l.clone(),
            direction: SaturationDirection::Unstable,
        };
        let union = SaturationRegion {
            base: l.clone(),
            direction: SaturationDirection::Union,
        };
        // Corners are in both saturations.
        assert!(saturation_contains(&stable, l.corner()));
        assert!(saturation_contains(&unstable, l.corner()));
        // A far stable translate of the opposite corner stays in the stable
        // saturation.
        let far = pt(rat(17, 5), rat(5, 2));
        assert!(saturation_contains(&stable, &far));
        assert!(!saturation_contains(&unstable, &far));
        assert!(saturation_contains(&union, &far));
        // Points with both coordinates outside the bands are in neither.
        let outside = pt(rat(9, 2), rat(4, 1));
        assert!(!saturation_contains(&union, &outside));
    }

    #[test]
    fn consecutive_checks() {
        let l = Lozenge::new(pt(rat(3, 2), rat(4, 5)));
        // Same lozenge: both containments hold, stable takes precedence.
        assert_eq!(
            consecutive_lozenge_check(&l, &l),
            ConsecutivePosition::StableContained
        );
        // Stable band of l is [4/5, 5/2]: a lozenge with y' >= 4/5, x' <= 3/2.
        let inner = Lozenge::new(pt(rat(6, 5), rat(19, 10)));
        assert_eq!(
            consecutive_lozenge_check(&l, &inner),
            ConsecutivePosition::StableContained
        );
        // Far-separated diagonal lozenges: neither.
        let far = Lozenge::new(pt(rat(10, 1), rat(10, 1)));
        assert_eq!(
            consecutive_lozenge_check(&l, &far),
            ConsecutivePosition::Neither
        );
    }

    #[test]
    fn stable_saturation_is_transitive() {
        let l1 = Lozenge::new(pt(rat(0, 1), rat(0, 1)));
        let l2 = Lozenge::new(pt(rat(-1, 4), rat(1, 4)));
        let l3 = Lozenge::new(pt(rat(-1, 2), rat(1, 3)));
        assert!(lozenge_in_saturation(&l2, &l1, SaturationDirection::Stable));
        assert!(lozenge_in_saturation(&l3, &l2, SaturationDirection::Stable));
        assert!(lozenge_in_saturation(&l3, &l1, SaturationDirection::Stable));
    }

    #[test]
    fn strip_invariant_enforced() {
        assert!(OrbitPoint::new(rat(3, 2), rat(14, 5)).is_err());
    }
}
