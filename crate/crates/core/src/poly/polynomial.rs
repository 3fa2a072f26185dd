use std::cell::Cell;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use super::monomial::Monomial;
use crate::error::TextError;

/// What to do with a monomial whose total degree exceeds the cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CapPolicy {
    /// Replace it by the saturated monomial.
    Saturate,
    /// Drop it and remember that something was dropped.
    Truncate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeCap {
    pub cap: u64,
    pub policy: CapPolicy,
}

impl DegreeCap {
    pub fn saturate(cap: u64) -> Self {
        DegreeCap { cap: cap.max(1), policy: CapPolicy::Saturate }
    }

    pub fn truncate(cap: u64) -> Self {
        DegreeCap { cap: cap.max(1), policy: CapPolicy::Truncate }
    }

    pub fn unbounded() -> Self {
        DegreeCap { cap: u64::MAX, policy: CapPolicy::Saturate }
    }
}

impl Default for DegreeCap {
    fn default() -> Self {
        DegreeCap::unbounded()
    }
}

/// A degree cap together with flags recording whether it ever fired.
#[derive(Debug)]
pub struct Capper {
    pub cap: DegreeCap,
    saturated: Cell<bool>,
    truncated: Cell<bool>,
}

impl Capper {
    pub fn new(cap: DegreeCap) -> Self {
        Capper { cap, saturated: Cell::new(false), truncated: Cell::new(false) }
    }

    pub fn unbounded() -> Self {
        Capper::new(DegreeCap::unbounded())
    }

    pub fn saturated(&self) -> bool {
        self.saturated.get()
    }

    pub fn truncated(&self) -> bool {
        self.truncated.get()
    }

    fn admit(&self, m: Monomial) -> Option<Monomial> {
        if m.is_saturated() || m.total_degree() <= self.cap.cap {
            return Some(m);
        }
        match self.cap.policy {
            CapPolicy::Saturate => {
                self.saturated.set(true);
                Some(Monomial::saturated())
            }
            CapPolicy::Truncate => {
                self.truncated.set(true);
                None
            }
        }
    }
}

/// An abstract polynomial: a set of monomials with implicit coefficient 1.
///
/// The empty set is the zero polynomial. A polynomial containing the saturated
/// monomial is collapsed to that single monomial.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct AbsPoly {
    monomials: BTreeSet<Monomial>,
}

impl AbsPoly {
    pub fn zero() -> Self {
        AbsPoly::default()
    }

    pub fn var(i: usize) -> Self {
        AbsPoly::from_monomial(Monomial::var(i))
    }

    pub fn saturated() -> Self {
        AbsPoly::from_monomial(Monomial::saturated())
    }

    pub fn from_monomial(m: Monomial) -> Self {
        let mut monomials = BTreeSet::new();
        monomials.insert(m);
        AbsPoly { monomials }
    }

    pub fn from_monomials(ms: impl IntoIterator<Item = Monomial>) -> Self {
        let mut p = AbsPoly { monomials: ms.into_iter().collect() };
        p.absorb();
        p
    }

    fn absorb(&mut self) {
        if self.monomials.iter().next_back().is_some_and(Monomial::is_saturated) && self.monomials.len() > 1 {
            self.monomials = BTreeSet::from([Monomial::saturated()]);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn is_saturated(&self) -> bool {
        self.monomials.iter().any(Monomial::is_saturated)
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> impl DoubleEndedIterator<Item = &Monomial> + '_ {
        self.monomials.iter()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.monomials.contains(m)
    }

    pub fn insert(&mut self, m: Monomial) {
        self.monomials.insert(m);
        self.absorb();
    }

    /// Abstract sum: union of monomial sets.
    pub fn add(&self, other: &AbsPoly) -> AbsPoly {
        let mut out = self.clone();
        out.monomials.extend(other.monomials.iter().cloned());
        out.absorb();
        out
    }

    pub fn mul(&self, other: &AbsPoly, capper: &Capper) -> AbsPoly {
        let mut monomials = BTreeSet::new();
        for a in &self.monomials {
            for b in &other.monomials {
                if let Some(m) = capper.admit(a.mul(b)) {
                    monomials.insert(m);
                }
            }
        }
        let mut p = AbsPoly { monomials };
        p.absorb();
        p
    }

    pub fn pow(&self, e: u32, capper: &Capper) -> AbsPoly {
        let mut acc = AbsPoly::from_monomial(Monomial::one());
        for _ in 0..e {
            acc = acc.mul(self, capper);
        }
        acc
    }

    /// Variables occurring in some monomial.
    pub fn support(&self) -> BTreeSet<usize> {
        self.monomials.iter().flat_map(|m| m.support().collect::<Vec<_>>()).collect()
    }

    pub fn depends_on(&self, v: usize) -> bool {
        self.monomials.iter().any(|m| m.contains_var(v))
    }

    pub fn map_monomials(&self, f: impl Fn(&Monomial) -> Monomial) -> AbsPoly {
        AbsPoly::from_monomials(self.monomials.iter().map(f))
    }

    pub fn filter(&self, f: impl Fn(&Monomial) -> bool) -> AbsPoly {
        AbsPoly { monomials: self.monomials.iter().filter(|m| f(m)).cloned().collect() }
    }

    /// Highest total degree of a monomial, ignoring `t`; `None` for zero.
    pub fn max_var_degree(&self) -> Option<u64> {
        self.monomials.iter().map(Monomial::var_degree).max()
    }

    pub fn max_total_degree(&self) -> Option<u64> {
        self.monomials.iter().map(Monomial::total_degree).max()
    }

    /// Substitutes the entries of `q` for the variables (abstract composition).
    pub fn substitute(&self, q: &[AbsPoly], capper: &Capper) -> AbsPoly {
        let mut out = AbsPoly::zero();
        for m in &self.monomials {
            out = out.add(&substitute_monomial(m, q, capper));
        }
        out
    }

    /// Per-monomial inclusion.
    pub fn is_fragment_of(&self, other: &AbsPoly) -> bool {
        self.monomials.is_subset(&other.monomials)
    }

    /// Every monomial of `self` has a multiple in `other`.
    pub fn is_subsumed_by(&self, other: &AbsPoly) -> bool {
        self.monomials.iter().all(|m| other.monomials.iter().any(|o| m.divides(o)))
    }
}

fn substitute_monomial(m: &Monomial, q: &[AbsPoly], capper: &Capper) -> AbsPoly {
    if m.is_saturated() {
        return AbsPoly::saturated();
    }
    let mut acc = AbsPoly::from_monomial(Monomial::one().with_tau(m.tau()));
    for (v, e) in m.vars() {
        acc = acc.mul(&q[v].pow(e, capper), capper);
        if acc.is_zero() {
            break;
        }
    }
    acc
}

impl fmt::Display for AbsPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomials.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.monomials.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(" + "))
    }
}

impl FromStr for AbsPoly {
    type Err = TextError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "0" {
            return Ok(AbsPoly::zero());
        }
        let ms = s.split('+').map(str::parse).collect::<Result<Vec<Monomial>, _>>()?;
        Ok(AbsPoly::from_monomials(ms))
    }
}
