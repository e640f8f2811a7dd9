//! Float helpers that work on both std and no_std (libm) builds.
//!
//! Inherent `f64` methods like `sin` live in std; routing through
//! `num_traits::Float` picks up libm when std is absent.

use num_traits::Float;

pub(crate) fn abs(x: f64) -> f64 {
    Float::abs(x)
}

pub(crate) fn floor(x: f64) -> f64 {
    Float::floor(x)
}

pub(crate) fn round(x: f64) -> f64 {
    Float::round(x)
}

pub(crate) fn sqrt(x: f64) -> f64 {
    Float::sqrt(x)
}

pub(crate) fn sin(x: f64) -> f64 {
    Float::sin(x)
}

pub(crate) fn cos(x: f64) -> f64 {
    Float::cos(x)
}

pub(crate) fn atan2(y: f64, x: f64) -> f64 {
    Float::atan2(y, x)
}

pub(crate) fn cosh(x: f64) -> f64 {
    Float::cosh(x)
}

pub(crate) fn sinh(x: f64) -> f64 {
    Float::sinh(x)
}

pub(crate) fn ln(x: f64) -> f64 {
    Float::ln(x)
}

pub(crate) fn exp(x: f64) -> f64 {
    Float::exp(x)
}

pub(crate) fn max(a: f64, b: f64) -> f64 {
    Float::max(a, b)
}

pub(crate) fn min(a: f64, b: f64) -> f64 {
    Float::min(a, b)
}
