use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use crate::error::TextError;
use crate::poly::Monomial;

/// Value lattice shared by the univariate and multivariate evaluators.
pub trait Domain {
    type Val: Clone + Eq + Ord + Hash + fmt::Debug;

    fn var(&self, i: usize) -> Self::Val;
    fn zero(&self) -> Self::Val;
    fn dzero(&self) -> Self::Val;
    fn star(&self) -> Self::Val;
    fn is_dzero(&self, v: &Self::Val) -> bool;
    fn mul(&self, a: &Self::Val, b: &Self::Val) -> Self::Val;
    /// Partial order used to compare outcomes.
    fn le(&self, a: &Self::Val, b: &Self::Val) -> bool;
}

/// A univariate value `x^d`, or one of the special values.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum UniVal {
    /// Zeroed by the generalization step; the smallest value.
    Zero,
    /// Definitely zero, after a reset.
    DZero,
    Ord(u32),
    /// Result of havoc, or of exceeding every bound.
    Star,
}

impl UniVal {
    pub fn degree(&self) -> Option<u32> {
        match self {
            UniVal::Ord(d) => Some(*d),
            _ => None,
        }
    }
}

impl fmt::Display for UniVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UniVal::Zero => f.write_str("z"),
            UniVal::DZero => f.write_str("b"),
            UniVal::Ord(d) => write!(f, "{d}"),
            UniVal::Star => f.write_str("h"),
        }
    }
}

impl FromStr for UniVal {
    type Err = TextError;

    /// `z`, `b`, `h`, or a degree.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "z" => Ok(UniVal::Zero),
            "b" => Ok(UniVal::DZero),
            "h" => Ok(UniVal::Star),
            t => t.parse().map(UniVal::Ord).map_err(|_| TextError::new(s, "expected a degree, z, b or h")),
        }
    }
}

/// Univariate domain; degrees are clamped at `limit`, so `Ord(limit)` reads "at least `limit`".
#[derive(Clone, Copy, Debug)]
pub struct UniDomain {
    pub limit: u32,
}

impl Domain for UniDomain {
    type Val = UniVal;

    fn var(&self, _i: usize) -> UniVal {
        UniVal::Ord(1.min(self.limit))
    }

    fn zero(&self) -> UniVal {
        UniVal::Zero
    }

    fn dzero(&self) -> UniVal {
        UniVal::DZero
    }

    fn star(&self) -> UniVal {
        UniVal::Star
    }

    fn is_dzero(&self, v: &UniVal) -> bool {
        *v == UniVal::DZero
    }

    fn mul(&self, a: &UniVal, b: &UniVal) -> UniVal {
        use UniVal::*;
        match (a, b) {
            (DZero, _) | (_, DZero) => DZero,
            (Zero, _) | (_, Zero) => Zero,
            (Star, _) | (_, Star) => Star,
            (Ord(x), Ord(y)) => Ord(x.saturating_add(*y).min(self.limit)),
        }
    }

    fn le(&self, a: &UniVal, b: &UniVal) -> bool {
        use UniVal::*;
        match (a, b) {
            (DZero, DZero) => true,
            (DZero, _) | (_, DZero) => false,
            (Zero, _) | (_, Star) => true,
            (Ord(x), Ord(y)) => x <= y,
            _ => false,
        }
    }
}

/// A multivariate monomial value, or one of the special values.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum MonoVal {
    Zero,
    DZero,
    Mono(Monomial),
    Star,
}

impl MonoVal {
    pub fn monomial(&self) -> Option<&Monomial> {
        match self {
            MonoVal::Mono(m) => Some(m),
            _ => None,
        }
    }
}

impl fmt::Display for MonoVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonoVal::Zero => f.write_str("0"),
            MonoVal::DZero => f.write_str("b"),
            MonoVal::Mono(m) => write!(f, "{m}"),
            MonoVal::Star => f.write_str("inf"),
        }
    }
}

/// Multivariate domain; monomials above total degree `cap` become `Star`.
#[derive(Clone, Copy, Debug)]
pub struct MonoDomain {
    pub cap: u64,
}

impl Domain for MonoDomain {
    type Val = MonoVal;

    fn var(&self, i: usize) -> MonoVal {
        MonoVal::Mono(Monomial::var(i))
    }

    fn zero(&self) -> MonoVal {
        MonoVal::Zero
    }

    fn dzero(&self) -> MonoVal {
        MonoVal::DZero
    }

    fn star(&self) -> MonoVal {
        MonoVal::Star
    }

    fn is_dzero(&self, v: &MonoVal) -> bool {
        *v == MonoVal::DZero
    }

    fn mul(&self, a: &MonoVal, b: &MonoVal) -> MonoVal {
        use MonoVal::*;
        match (a, b) {
            (DZero, _) | (_, DZero) => DZero,
            (Zero, _) | (_, Zero) => Zero,
            (Star, _) | (_, Star) => Star,
            (Mono(x), Mono(y)) => {
                let m = x.mul(y);
                if m.total_degree() > self.cap {
                    Star
                } else {
                    Mono(m)
                }
            }
        }
    }

    fn le(&self, a: &MonoVal, b: &MonoVal) -> bool {
        use MonoVal::*;
        match (a, b) {
            (DZero, DZero) => true,
            (DZero, _) | (_, DZero) => false,
            (Zero, _) | (_, Star) => true,
            (Mono(x), Mono(y)) => x.divides(y),
            _ => false,
        }
    }
}
