use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use super::monomial::Monomial;
use super::polynomial::{AbsPoly, Capper};
use crate::error::{AnalysisError, TextError};

/// An abstract multi-polynomial: one abstract polynomial per program variable,
/// giving the final value of each variable in terms of the initial values.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Amp {
    entries: Vec<AbsPoly>,
}

impl Amp {
    pub fn new(entries: Vec<AbsPoly>) -> Self {
        Amp { entries }
    }

    pub fn identity(n: usize) -> Self {
        Amp { entries: (0..n).map(AbsPoly::var).collect() }
    }

    /// `x_i := x_j`.
    pub fn copy(n: usize, i: usize, j: usize) -> Self {
        let mut p = Amp::identity(n);
        p.entries[i] = AbsPoly::var(j);
        p
    }

    /// `x_i := x_j + x_k`.
    pub fn sum(n: usize, i: usize, j: usize, k: usize) -> Self {
        let mut p = Amp::identity(n);
        p.entries[i] = AbsPoly::var(j).add(&AbsPoly::var(k));
        p
    }

    /// `x_i := x_j * x_k`.
    pub fn mul(n: usize, i: usize, j: usize, k: usize) -> Self {
        let mut p = Amp::identity(n);
        p.entries[i] = AbsPoly::from_monomial(Monomial::var(j).mul(&Monomial::var(k)));
        p
    }

    /// `x_i := 0`.
    pub fn reset(n: usize, i: usize) -> Self {
        let mut p = Amp::identity(n);
        p.entries[i] = AbsPoly::zero();
        p
    }

    /// `x_i := *`.
    pub fn havoc(n: usize, i: usize) -> Self {
        let mut p = Amp::identity(n);
        p.entries[i] = AbsPoly::saturated();
        p
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[AbsPoly] {
        &self.entries
    }

    pub fn entry(&self, i: usize) -> &AbsPoly {
        &self.entries[i]
    }

    pub fn set_entry(&mut self, i: usize, p: AbsPoly) {
        self.entries[i] = p;
    }

    pub fn is_identity(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, p)| p.len() == 1 && p.contains(&Monomial::var(i)))
    }

    /// `self ∘ q`: run `q` first, then `self`.
    pub fn compose(&self, q: &Amp, capper: &Capper) -> Amp {
        debug_assert_eq!(self.dim(), q.dim());
        Amp { entries: self.entries.iter().map(|p| p.substitute(&q.entries, capper)).collect() }
    }

    pub fn compose_unbounded(&self, q: &Amp) -> Amp {
        self.compose(q, &Capper::unbounded())
    }

    pub fn try_compose(&self, q: &Amp, capper: &Capper) -> Result<Amp, AnalysisError> {
        if self.dim() != q.dim() {
            return Err(AnalysisError::Dimension(self.dim(), q.dim()));
        }
        Ok(self.compose(q, capper))
    }

    pub fn substitute_tau(&self, l: usize) -> Amp {
        Amp { entries: self.entries.iter().map(|p| p.map_monomials(|m| m.substitute_tau(l))).collect() }
    }

    pub fn has_tau(&self) -> bool {
        self.entries.iter().any(|p| p.monomials().any(|m| m.tau() > 0))
    }

    pub fn is_saturated_at(&self, i: usize) -> bool {
        self.entries[i].is_saturated()
    }

    /// Variables whose entry depends on themselves.
    pub fn self_dependent(&self) -> BTreeSet<usize> {
        (0..self.dim()).filter(|&i| self.entries[i].depends_on(i)).collect()
    }

    /// Entries holding a monomial `m * x_i` with `m != 1`.
    pub fn doubling_violations(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.entries[i].monomials().any(|m| m.contains_var(i) && !m.is_var(i))).collect()
    }

    pub fn doubling_free(&self) -> bool {
        self.doubling_violations().is_empty()
    }

    /// Every monomial mentions only self-dependent variables.
    pub fn is_iterative(&self) -> bool {
        let sd = self.self_dependent();
        self.entries.iter().all(|p| p.monomials().all(|m| m.support().all(|v| sd.contains(&v))))
    }

    /// Largest iterative fragment: repeatedly deletes monomials that mention a
    /// variable outside the self-dependent set.
    pub fn iterative_kernel(&self) -> Amp {
        let mut cur = self.clone();
        loop {
            let sd = cur.self_dependent();
            let next = Amp {
                entries: cur.entries.iter().map(|p| p.filter(|m| m.support().all(|v| sd.contains(&v)))).collect(),
            };
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    /// For an iterative AMP, turns each entry `x_i + q` into `x_i + t*q`.
    pub fn generalize(&self) -> Result<Amp, AnalysisError> {
        if !self.is_iterative() {
            return Err(AnalysisError::NotIterative);
        }
        Ok(self.generalize_unchecked())
    }

    pub(crate) fn generalize_unchecked(&self) -> Amp {
        let entries = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, p)| {
                if p.is_saturated() || !p.contains(&Monomial::var(i)) {
                    return p.clone();
                }
                p.map_monomials(|m| if m.is_var(i) { m.clone() } else { m.with_tau(m.tau() + 1) })
            })
            .collect();
        Amp { entries }
    }

    /// Generalization for idempotent AMPs: in every self-dependent entry, each
    /// `t`-free monomial over self-dependent variables other than `x_i` is
    /// multiplied by `t` (the sum `m + t*m` collapses to `t*m`).
    pub fn generalize_idempotent(&self) -> Amp {
        let sd = self.self_dependent();
        let entries = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, p)| {
                if !sd.contains(&i) || p.is_saturated() {
                    return p.clone();
                }
                p.map_monomials(|m| {
                    let iterative = m.tau() == 0 && !m.is_var(i) && m.support().all(|v| sd.contains(&v));
                    if iterative {
                        m.with_tau(1)
                    } else {
                        m.clone()
                    }
                })
            })
            .collect();
        Amp { entries }
    }

    pub fn is_idempotent(&self) -> bool {
        &self.compose_unbounded(self) == self
    }

    /// Entrywise monomial inclusion.
    pub fn fragment_le(&self, q: &Amp) -> bool {
        self.dim() == q.dim() && self.entries.iter().zip(&q.entries).all(|(a, b)| a.is_fragment_of(b))
    }

    /// Entrywise: every monomial of `self` has a multiple in `q`.
    pub fn subsumed_by(&self, q: &Amp) -> bool {
        self.dim() == q.dim() && self.entries.iter().zip(&q.entries).all(|(a, b)| a.is_subsumed_by(b))
    }

    /// Replaces the listed entries by the saturated polynomial.
    pub fn saturate_entries(&self, vars: &BTreeSet<usize>) -> Amp {
        let mut out = self.clone();
        for &v in vars {
            out.entries[v] = AbsPoly::saturated();
        }
        out
    }

    pub fn max_total_degree(&self) -> u64 {
        self.entries.iter().filter_map(AbsPoly::max_var_degree).max().unwrap_or(0)
    }
}

impl fmt::Display for Amp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(ToString::to_string).collect();
        write!(f, "<{}>", parts.join(", "))
    }
}

impl FromStr for Amp {
    type Err = TextError;

    /// Parses `<p1, p2, ...>`; the angle brackets are optional.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let t = t.strip_prefix('<').or_else(|| t.strip_prefix('⟨')).unwrap_or(t);
        let t = t.strip_suffix('>').or_else(|| t.strip_suffix('⟩')).unwrap_or(t);
        let entries = t.split(',').map(str::parse).collect::<Result<Vec<AbsPoly>, _>>()?;
        Ok(Amp { entries })
    }
}
