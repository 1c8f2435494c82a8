//! Order values: witnessed-finite, infinite, or inconclusive at a precision.

use crate::field::Rational;
use std::fmt;

/// Order of a polynomial or series. `Finite(n)` is only reported when a
/// nonzero coefficient (or degree-n term) is witnessed; `Inconclusive(N)`
/// means everything inspected vanishes up to precision N.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OrderValue {
    Finite(u32),
    Infinity,
    Inconclusive(u32),
}

impl fmt::Display for OrderValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderValue::Finite(n) => write!(f, "{n}"),
            OrderValue::Infinity => write!(f, "inf"),
            OrderValue::Inconclusive(n) => write!(f, ">={n}?"),
        }
    }
}

/// Hironaka order of a Rees algebra at a point: an exact rational, or
/// infinity when every generator vanishes identically.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ReesOrder {
    Finite(Rational),
    Infinity,
}

impl fmt::Display for ReesOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReesOrder::Finite(q) => write!(f, "{q}"),
            ReesOrder::Infinity => write!(f, "inf"),
        }
    }
}

/// Order of a Rees algebra along an arc. `Inconclusive` carries the best
/// lower bound certified by the arc's precision.
#[derive(Clone, Copy, PartialEq, Debug)]
pub enum ArcOrder {
    Finite(Rational),
    Inconclusive { bound: Rational },
}

impl fmt::Display for ArcOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArcOrder::Finite(q) => write!(f, "{q}"),
            ArcOrder::Inconclusive { bound } => write!(f, ">={bound}?"),
        }
    }
}
