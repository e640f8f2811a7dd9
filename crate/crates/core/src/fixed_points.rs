//! Fixed points of a line element within one fundamental domain.

use alloc::vec::Vec;

use crate::coord::Coord;
use crate::rat::{self, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FixedPointKind {
    Attracting,
    Repelling,
    /// Slope-1 contact with the diagonal, a semi-stable crossing, or an
    /// interval of fixed points. Excluded from hyperbolic-like.
    Degenerate,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FixedPoint {
    /// Location in `[0, 1)`.
    pub location: Coord,
    pub kind: FixedPointKind,
    /// Certified radius around `location`; `0` for exact (PL) solutions.
    pub radius: f64,
}

/// Fixed points in `[0, 1)`, strictly increasing.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct FixedPointSet {
    pub points: Vec<FixedPoint>,
}

impl FixedPointSet {
    pub fn empty() -> Self {
        FixedPointSet { points: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Exactly one attracting plus one repelling point, nothing degenerate.
    pub fn is_hyperbolic_like(&self) -> bool {
        self.points.len() == 2
            && self
                .points
                .iter()
                .filter(|p| p.kind == FixedPointKind::Attracting)
                .count()
                == 1
            && self
                .points
                .iter()
                .filter(|p| p.kind == FixedPointKind::Repelling)
                .count()
                == 1
    }

    pub fn attracting(&self) -> Option<&FixedPoint> {
        self.points
            .iter()
            .find(|p| p.kind == FixedPointKind::Attracting)
    }

    pub fn repelling(&self) -> Option<&FixedPoint> {
        self.points
            .iter()
            .find(|p| p.kind == FixedPointKind::Repelling)
    }

    pub fn has_degenerate(&self) -> bool {
        self.points
            .iter()
            .any(|p| p.kind == FixedPointKind::Degenerate)
    }

    /// Locations of all points as rationals (floats convert exactly).
    pub fn locations(&self) -> Vec<Rat> {
        self.points.iter().map(|p| p.location.to_rational()).collect()
    }

    /// Smallest gap between consecutive points on the circle `R/Z`.
    pub fn min_gap(&self) -> Option<Rat> {
        if self.points.len() < 2 {
            return None;
        }
        let locs = self.locations();
        let mut best: Option<Rat> = None;
        for i in 0..locs.len() {
            let next = if i + 1 < locs.len() {
                locs[i + 1].clone()
            } else {
                &locs[0] + rat::one()
            };
            let gap = next - &locs[i];
            if best.as_ref().map_or(true, |b| &gap < b) {
                best = Some(gap);
            }
        }
        best
    }
}
