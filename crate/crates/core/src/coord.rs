//! A coordinate on the line: exact rational or certified float.

use core::cmp::Ordering;

use crate::rat::{self, Rat};
use crate::real;

/// Exact values come from the PL backend, floats from the Moebius backend.
#[derive(Clone, Debug)]
pub enum Coord {
    Rational(Rat),
    Real(f64),
}

impl Coord {
    pub fn to_f64(&self) -> f64 {
        match self {
            Coord::Rational(r) => rat::to_f64(r),
            Coord::Real(x) => *x,
        }
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        match self {
            Coord::Rational(r) => Some(r),
            Coord::Real(_) => None,
        }
    }

    /// Exact rational view; floats convert exactly (they are dyadic).
    pub fn to_rational(&self) -> Rat {
        match self {
            Coord::Rational(r) => r.clone(),
            Coord::Real(x) => rat::from_f64(*x).expect("finite coordinate"),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Coord::Rational(_))
    }

    /// Distance to the nearest integer translate of `other`.
    pub fn circle_dist(&self, other: &Coord) -> Coord {
        match (self, other) {
            (Coord::Rational(a), Coord::Rational(b)) => Coord::Rational(rat::circle_dist(a, b)),
            _ => {
                let d = self.to_f64() - other.to_f64();
                let f = d - real::floor(d);
                Coord::Real(real::min(f, 1.0 - f))
            }
        }
    }
}

impl From<Rat> for Coord {
    fn from(r: Rat) -> Self {
        Coord::Rational(r)
    }
}

impl From<f64> for Coord {
    fn from(x: f64) -> Self {
        Coord::Real(x)
    }
}

impl PartialEq for Coord {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Coord {}

impl PartialOrd for Coord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Coord {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Coord::Rational(a), Coord::Rational(b)) => a.cmp(b),
            _ => self
                .to_f64()
                .partial_cmp(&other.to_f64())
                .expect("coordinates are finite"),
        }
    }
}

impl core::fmt::Display for Coord {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Coord::Rational(r) => write!(f, "{}", crate::rat::display(r)),
            Coord::Real(x) => write!(f, "{x}"),
        }
    }
}
