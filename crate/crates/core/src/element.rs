//! A homeomorphism of the line commuting (or anti-commuting) with integer
//! translation, behind one of three backends: exact PL, lifted Moebius, or a
//! formal word awaiting resolution by a representation.

use alloc::vec::Vec;

pub use crate::coord::Coord;
pub use crate::plz::Orientation;

use crate::fixed_points::{FixedPoint, FixedPointSet};
use crate::moebius::{MoebiusLift, CERT_TOL};
use crate::plz::PlMap;
use crate::rat::{self, Rat};
use crate::words::Word;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElementError {
    /// A formal word has no bound representation.
    UnresolvedWord,
    /// The two operands live in different concrete backends.
    IncompatibleBackends,
    /// The operation needs an orientation-preserving element.
    NotOrientationPreserving,
}

impl core::fmt::Display for ElementError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ElementError::UnresolvedWord => {
                write!(f, "formal word is not bound to a representation")
            }
            ElementError::IncompatibleBackends => {
                write!(f, "elements live in incompatible backends")
            }
            ElementError::NotOrientationPreserving => {
                write!(f, "operation requires an orientation-preserving element")
            }
        }
    }
}

impl core::error::Error for ElementError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ElementClass {
    Identity,
    FixedPointFree,
    HyperbolicLike,
    /// Fixed points exist but do not form a single attracting/repelling pair.
    Degenerate,
    OrientationReversing,
}

/// An interval certified to contain the translation number.
#[derive(Clone, Debug, PartialEq)]
pub struct RatInterval {
    pub lo: Coord,
    pub hi: Coord,
}

impl RatInterval {
    pub fn exact_zero() -> Self {
        RatInterval {
            lo: Coord::Rational(rat::zero()),
            hi: Coord::Rational(rat::zero()),
        }
    }

    pub fn contains_zero(&self) -> bool {
        let z = Coord::Rational(rat::zero());
        self.lo <= z && z <= self.hi
    }

    pub fn excludes_zero(&self) -> bool {
        !self.contains_zero()
    }
}

#[derive(Clone, Debug)]
pub enum LineElement {
    Pl(PlMap),
    Moebius(MoebiusLift),
    /// A formal word over named generators; resolved by a `Representation`.
    Formal(Word),
}

impl From<PlMap> for LineElement {
    fn from(m: PlMap) -> Self {
        LineElement::Pl(m)
    }
}

impl From<MoebiusLift> for LineElement {
    fn from(m: MoebiusLift) -> Self {
        LineElement::Moebius(m)
    }
}

impl LineElement {
    pub fn identity_pl() -> Self {
        LineElement::Pl(PlMap::identity())
    }

    /// The identity in the same backend as `self`.
    pub fn identity_like(&self) -> Self {
        match self {
            LineElement::Pl(_) => LineElement::Pl(PlMap::identity()),
            LineElement::Moebius(_) => LineElement::Moebius(MoebiusLift::identity()),
            LineElement::Formal(_) => LineElement::Formal(Word::identity()),
        }
    }

    pub fn orientation(&self) -> Result<Orientation, ElementError> {
        match self {
            LineElement::Pl(m) => Ok(m.orientation()),
            LineElement::Moebius(_) => Ok(Orientation::Preserving),
            LineElement::Formal(_) => Err(ElementError::UnresolvedWord),
        }
    }

    pub fn is_reversing(&self) -> bool {
        matches!(self.orientation(), Ok(Orientation::Reversing))
    }

    /// Strictly monotone evaluation; exact on the PL backend.
    pub fn eval(&self, x: &Coord) -> Result<Coord, ElementError> {
        match self {
            LineElement::Pl(m) => Ok(match x {
                Coord::Rational(r) => Coord::Rational(m.eval(r)),
                Coord::Real(v) => Coord::Real(rat::to_f64(
                    &m.eval(&rat::from_f64(*v).expect("finite coordinate")),
                )),
            }),
            LineElement::Moebius(m) => Ok(Coord::Real(m.eval(x.to_f64()))),
            LineElement::Formal(_) => Err(ElementError::UnresolvedWord),
        }
    }

    pub fn eval_f64(&self, x: f64) -> Result<f64, ElementError> {
        Ok(self.eval(&Coord::Real(x))?.to_f64())
    }

    /// Exact rational evaluation (PL backend only).
    pub fn eval_rat(&self, x: &Rat) -> Result<Rat, ElementError> {
        match self {
            LineElement::Pl(m) => Ok(m.eval(x)),
            LineElement::Moebius(_) => Err(ElementError::IncompatibleBackends),
            LineElement::Formal(_) => Err(ElementError::UnresolvedWord),
        }
    }

    /// `self(other(x))`; stays in the common concrete backend, or
    /// concatenates formal words.
    pub fn compose(&self, other: &LineElement) -> Result<LineElement, ElementError> {
        match (self, other) {
            (LineElement::Pl(a), LineElement::Pl(b)) => Ok(LineElement::Pl(a.compose(b))),
            (LineElement::Moebius(a), LineElement::Moebius(b)) => {
                Ok(LineElement::Moebius(a.compose(b)))
            }
            (LineElement::Formal(a), LineElement::Formal(b)) => {
                Ok(LineElement::Formal(a.concat(b)))
            }
            _ => Err(ElementError::IncompatibleBackends),
        }
    }

    pub fn invert(&self) -> LineElement {
        match self {
            LineElement::Pl(m) => LineElement::Pl(m.invert()),
            LineElement::Moebius(m) => LineElement::Moebius(m.invert()),
            LineElement::Formal(w) => LineElement::Formal(w.inverse()),
        }
    }

    /// Power by repeated squaring.
    pub fn pow(&self, n: i64) -> Result<LineElement, ElementError> {
        if n == 0 {
            return Ok(self.identity_like());
        }
        let mut base = if n > 0 { self.clone() } else { self.invert() };
        let mut k = n.unsigned_abs();
        let mut acc: Option<LineElement> = None;
        loop {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.compose(&base)?,
                });
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            base = base.compose(&base)?;
        }
        Ok(acc.expect("n != 0"))
    }

    pub fn is_identity(&self) -> bool {
        match self {
            LineElement::Pl(m) => m.is_identity(),
            LineElement::Moebius(m) => m.is_identity(1e-9),
            LineElement::Formal(w) => w.is_identity(),
        }
    }

    /// Fixed points in one fundamental domain, exact for PL, certified for
    /// Moebius. Degenerate sets are reported, never dropped.
    pub fn fixed_points(&self) -> Result<FixedPointSet, ElementError> {
        match self {
            LineElement::Pl(m) => {
                let points = m
                    .fixed_points()
                    .into_iter()
                    .map(|(loc, kind)| FixedPoint {
                        location: Coord::Rational(loc),
                        kind,
                        radius: 0.0,
                    })
                    .collect();
                Ok(FixedPointSet { points })
            }
            LineElement::Moebius(m) => {
                let points = m
                    .fixed_points()
                    .into_iter()
                    .map(|(loc, kind, radius, _)| FixedPoint {
                        location: Coord::Real(loc),
                        kind,
                        radius,
                    })
                    .collect();
                Ok(FixedPointSet { points })
            }
            LineElement::Formal(_) => Err(ElementError::UnresolvedWord),
        }
    }

    pub fn classify(&self) -> Result<ElementClass, ElementError> {
        if self.orientation()? == Orientation::Reversing {
            return Ok(ElementClass::OrientationReversing);
        }
        if self.is_identity() {
            return Ok(ElementClass::Identity);
        }
        let fps = self.fixed_points()?;
        if fps.is_empty() {
            Ok(ElementClass::FixedPointFree)
        } else if fps.is_hyperbolic_like() {
            Ok(ElementClass::HyperbolicLike)
        } else {
            Ok(ElementClass::Degenerate)
        }
    }

    /// Interval `[f^n(0) - 1, f^n(0) + 1] / n` guaranteed to contain the
    /// translation number; exact zero when a fixed point exists.
    pub fn translation_number(&self, n_iterations: u32) -> Result<RatInterval, ElementError> {
        if self.orientation()? == Orientation::Reversing {
            return Err(ElementError::NotOrientationPreserving);
        }
        if !self.fixed_points()?.is_empty() {
            return Ok(RatInterval::exact_zero());
        }
        let n = n_iterations.max(1);
        match self {
            LineElement::Pl(m) => {
                let mut x = rat::zero();
                for _ in 0..n {
                    x = m.eval(&x);
                }
                let n = rat::rat_int(n as i64);
                Ok(RatInterval {
                    lo: Coord::Rational((&x - rat::one()) / &n),
                    hi: Coord::Rational((&x + rat::one()) / &n),
                })
            }
            LineElement::Moebius(m) => {
                let (lo, hi) = m.translation_interval(n);
                Ok(RatInterval {
                    lo: Coord::Real(lo),
                    hi: Coord::Real(hi),
                })
            }
            LineElement::Formal(_) => Err(ElementError::UnresolvedWord),
        }
    }

    /// Doubles the iteration count until the interval excludes 0 (or the cap
    /// is reached). For a fixed-point-free PL element this always separates.
    pub fn translation_certificate(&self, max_iterations: u32) -> Result<RatInterval, ElementError> {
        if !self.fixed_points()?.is_empty() {
            return Ok(RatInterval::exact_zero());
        }
        let mut n = 1u32;
        loop {
            let iv = self.translation_number(n)?;
            if iv.excludes_zero() || n >= max_iterations {
                return Ok(iv);
            }
            n = n.saturating_mul(2);
        }
    }

    /// Equality of the underlying homeomorphisms (exact for PL, within the
    /// certification tolerance for Moebius).
    pub fn same_map(&self, other: &LineElement) -> bool {
        match (self, other) {
            (LineElement::Pl(a), LineElement::Pl(b)) => a == b,
            (LineElement::Moebius(a), LineElement::Moebius(b)) => a.approx_eq(b, 1e-9),
            (LineElement::Formal(a), LineElement::Formal(b)) => a == b,
            _ => false,
        }
    }

    /// Largest certified agreement error when comparing against `other` on a
    /// grid (0 for exactly equal PL maps).
    pub fn grid_defect(&self, other: &LineElement, grid: usize) -> Result<f64, ElementError> {
        let mut worst: f64 = 0.0;
        for i in 0..grid {
            let x = Coord::Real(i as f64 / grid as f64);
            let a = self.eval(&x)?.to_f64();
            let b = other.eval(&x)?.to_f64();
            let d = crate::real::abs(a - b);
            if d > worst {
                worst = d;
            }
        }
        Ok(worst)
    }

    /// Attracting fixed point in `[0, 1)`, if hyperbolic-like.
    pub fn attracting_point(&self) -> Result<Option<Coord>, ElementError> {
        let fps = self.fixed_points()?;
        Ok(fps.attracting().map(|p| p.location.clone()))
    }

    pub fn certification_tolerance(&self) -> f64 {
        match self {
            LineElement::Pl(_) => 0.0,
            LineElement::Moebius(_) => CERT_TOL,
            LineElement::Formal(_) => f64::NAN,
        }
    }
}

/// Orbit `{ f^n(x) : |n| <= n_range }` computed by forward and backward
/// iteration.
pub fn orbit(f: &LineElement, x: &Coord, n_range: u32) -> Result<Vec<Coord>, ElementError> {
    let inv = f.invert();
    let mut out = Vec::with_capacity(2 * n_range as usize + 1);
    let mut back = Vec::new();
    let mut y = x.clone();
    for _ in 0..n_range {
        y = inv.eval(&y)?;
        back.push(y.clone());
    }
    out.extend(back.into_iter().rev());
    out.push(x.clone());
    let mut y = x.clone();
    for _ in 0..n_range {
        y = f.eval(&y)?;
        out.push(y.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plz::Orientation;
    use crate::rat::rat;
    use alloc::vec;
    use num_traits::Zero;

    fn hyperbolic_pl() -> LineElement {
        LineElement::Pl(
            PlMap::new(
                vec![
                    (rat(0, 1), rat(0, 1)),
                    (rat(1, 4), rat(3, 8)),
                    (rat(1, 2), rat(1, 2)),
                    (rat(3, 4), rat(5, 8)),
                ],
                Orientation::Preserving,
            )
            .unwrap(),
        )
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            LineElement::identity_pl().classify().unwrap(),
            ElementClass::Identity
        );
        assert_eq!(
            hyperbolic_pl().classify().unwrap(),
            ElementClass::HyperbolicLike
        );
        let t = LineElement::Pl(PlMap::translation(rat(1, 2)));
        assert_eq!(t.classify().unwrap(), ElementClass::FixedPointFree);
        let degenerate = LineElement::Pl(
            PlMap::new(
                vec![
                    (rat(0, 1), rat(0, 1)),
                    (rat(1, 4), rat(1, 4)),
                    (rat(1, 2), rat(3, 8)),
                ],
                Orientation::Preserving,
            )
            .unwrap(),
        );
        assert_eq!(degenerate.classify().unwrap(), ElementClass::Degenerate);
        let r = LineElement::Pl(PlMap::reflection(rat(1, 3)));
        assert_eq!(r.classify().unwrap(), ElementClass::OrientationReversing);
    }

    #[test]
    fn invert_swaps_kinds() {
        let f = hyperbolic_pl();
        let fps = f.fixed_points().unwrap();
        let fps_inv = f.invert().fixed_points().unwrap();
        assert_eq!(fps.len(), 2);
        assert_eq!(fps_inv.len(), 2);
        for (p, q) in fps.points.iter().zip(fps_inv.points.iter()) {
            assert_eq!(p.location, q.location);
            assert_ne!(p.kind, q.kind);
        }
    }

    #[test]
    fn conjugation_moves_fixed_points() {
        // Fix(h f h^-1) = h Fix(f), kinds preserved.
        let f = hyperbolic_pl();
        let h = LineElement::Pl(PlMap::translation(rat(1, 4)));
        let conj = h.compose(&f).unwrap().compose(&h.invert()).unwrap();
        let fps = f.fixed_points().unwrap();
        let fps_conj = conj.fixed_points().unwrap();
        for (p, q) in fps.points.iter().zip(fps_conj.points.iter()) {
            let moved = h.eval(&p.location).unwrap();
            assert_eq!(moved.to_rational(), q.location.to_rational());
            assert_eq!(p.kind, q.kind);
        }
    }

    #[test]
    fn translation_number_of_translation() {
        let t = LineElement::Pl(PlMap::translation(rat(1, 2)));
        let iv = t.translation_number(4).unwrap();
        let half = Coord::Rational(rat(1, 2));
        assert!(iv.lo <= half && half <= iv.hi);
    }

    #[test]
    fn hyperbolic_translation_number_is_zero() {
        let iv = hyperbolic_pl().translation_number(10).unwrap();
        assert_eq!(iv, RatInterval::exact_zero());
    }

    #[test]
    fn shifted_hyperbolic_excludes_zero() {
        let f = hyperbolic_pl();
        let t = LineElement::Pl(PlMap::translation(rat(1, 1)));
        let shifted = f.compose(&t).unwrap();
        let iv = shifted.translation_number(10).unwrap();
        assert!(iv.excludes_zero());
        let cert = shifted.translation_certificate(64).unwrap();
        assert!(cert.excludes_zero());
    }

    #[test]
    fn pow_matches_iterated_compose(){
        let f = hyperbolic_pl();
        let mut it = f.clone();
        for _ in 0..4 {
            it = it.compose(&f).unwrap();
        }
        assert!(f.pow(5).unwrap().same_map(&it));
        assert!(f.pow(-1).unwrap().same_map(&f.invert()));
        assert!(f.pow(0).unwrap().is_identity());
    }

    #[test]
    fn monotone_convergence_to_fixed_points() {
        // Iterates from any non-repelling grid point converge monotonically.
        let f = hyperbolic_pl();
        for i in 1..16 {
            let mut x = rat(i, 16);
            if x == rat(0, 1) {
                continue;
            }
            let mut last_step: Option<Rat> = None;
            for _ in 0..64 {
                let next = match &f {
                    LineElement::Pl(m) => m.eval(&x),
                    _ => unreachable!(),
                };
                let step = &next - &x;
                if let Some(prev) = &last_step {
                    assert!(prev.is_zero() || (prev >= &rat(0, 1)) == (step >= rat(0, 1)));
                }
                last_step = Some(step);
                x = next;
            }
            assert!(crate::rat::circle_dist(&x, &rat(1, 2)) < rat(1, 1000));
        }
    }

    #[test]
    fn mixed_backends_rejected() {
        let f = hyperbolic_pl();
        let m = LineElement::Moebius(MoebiusLift::identity());
        assert_eq!(
            f.compose(&m).unwrap_err(),
            ElementError::IncompatibleBackends
        );
    }

    #[test]
    fn formal_words_concatenate_but_do_not_evaluate() {
        let a = LineElement::Formal(crate::words::parse_word("a").unwrap());
        let b = LineElement::Formal(crate::words::parse_word("a^-1 b").unwrap());
        let c = a.compose(&b).unwrap();
        match &c {
            LineElement::Formal(w) => assert_eq!(w.to_string(), "b"),
            _ => panic!(),
        }
        assert_eq!(
            c.eval(&Coord::Real(0.0)).unwrap_err(),
            ElementError::UnresolvedWord
        );
    }
}
