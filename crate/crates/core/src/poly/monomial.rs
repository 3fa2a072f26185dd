use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::TextError;

/// An abstract monomial over program variables and the iteration symbol `t`.
///
/// Variables are 0-based and render as `x1`, `x2`, ... . A saturated monomial
/// stands for a value whose growth escaped every polynomial bound; it absorbs
/// products and renders as `inf`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    vars: Vec<(usize, u32)>,
    tau: u32,
    saturated: bool,
}

impl Monomial {
    /// The constant monomial `1`.
    pub fn one() -> Self {
        Monomial { vars: Vec::new(), tau: 0, saturated: false }
    }

    pub fn var(i: usize) -> Self {
        Monomial { vars: vec![(i, 1)], tau: 0, saturated: false }
    }

    pub fn saturated() -> Self {
        Monomial { vars: Vec::new(), tau: 0, saturated: true }
    }

    /// Builds a monomial from `(variable, exponent)` pairs; zero exponents are dropped
    /// and repeated variables are merged.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, u32)>, tau: u32) -> Self {
        let mut vars: Vec<(usize, u32)> = Vec::new();
        for (v, e) in pairs {
            if e == 0 {
                continue;
            }
            match vars.binary_search_by_key(&v, |&(w, _)| w) {
                Ok(pos) => vars[pos].1 += e,
                Err(pos) => vars.insert(pos, (v, e)),
            }
        }
        Monomial { vars, tau, saturated: false }
    }

    /// Builds a monomial from a dense exponent vector.
    pub fn from_exponents(exps: &[u32]) -> Self {
        Self::from_pairs(exps.iter().copied().enumerate(), 0)
    }

    pub fn is_saturated(&self) -> bool {
        self.saturated
    }

    pub fn is_one(&self) -> bool {
        !self.saturated && self.vars.is_empty() && self.tau == 0
    }

    pub fn tau(&self) -> u32 {
        self.tau
    }

    pub fn degree_of(&self, v: usize) -> u32 {
        match self.vars.binary_search_by_key(&v, |&(w, _)| w) {
            Ok(pos) => self.vars[pos].1,
            Err(_) => 0,
        }
    }

    /// Sum of variable exponents plus the `t` exponent.
    pub fn total_degree(&self) -> u64 {
        self.vars.iter().map(|&(_, e)| u64::from(e)).sum::<u64>() + u64::from(self.tau)
    }

    /// Sum of variable exponents only.
    pub fn var_degree(&self) -> u64 {
        self.vars.iter().map(|&(_, e)| u64::from(e)).sum()
    }

    pub fn vars(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.vars.iter().copied()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.vars.iter().map(|&(v, _)| v)
    }

    pub fn contains_var(&self, v: usize) -> bool {
        self.degree_of(v) > 0
    }

    /// True when the monomial is exactly `x_v`, ignoring any `t` factor.
    pub fn is_linear_in(&self, v: usize) -> bool {
        !self.saturated && self.vars.len() == 1 && self.vars[0] == (v, 1)
    }

    /// True when the monomial is exactly `x_v`.
    pub fn is_var(&self, v: usize) -> bool {
        self.is_linear_in(v) && self.tau == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        if self.saturated || other.saturated {
            return Monomial::saturated();
        }
        let mut vars = Vec::with_capacity(self.vars.len() + other.vars.len());
        let (mut a, mut b) = (0, 0);
        while a < self.vars.len() && b < other.vars.len() {
            let (va, ea) = self.vars[a];
            let (vb, eb) = other.vars[b];
            match va.cmp(&vb) {
                Ordering::Less => {
                    vars.push((va, ea));
                    a += 1;
                }
                Ordering::Greater => {
                    vars.push((vb, eb));
                    b += 1;
                }
                Ordering::Equal => {
                    vars.push((va, ea + eb));
                    a += 1;
                    b += 1;
                }
            }
        }
        vars.extend_from_slice(&self.vars[a..]);
        vars.extend_from_slice(&other.vars[b..]);
        Monomial { vars, tau: self.tau + other.tau, saturated: false }
    }

    pub fn pow(&self, e: u32) -> Monomial {
        if self.saturated {
            return self.clone();
        }
        Monomial { vars: self.vars.iter().map(|&(v, d)| (v, d * e)).collect(), tau: self.tau * e, saturated: false }
    }

    pub fn with_tau(&self, tau: u32) -> Monomial {
        if self.saturated {
            return self.clone();
        }
        Monomial { vars: self.vars.clone(), tau, saturated: false }
    }

    /// Removes the `t` factor.
    pub fn without_tau(&self) -> Monomial {
        self.with_tau(0)
    }

    /// Folds the `t` exponent into the exponent of `x_l`.
    pub fn substitute_tau(&self, l: usize) -> Monomial {
        if self.saturated || self.tau == 0 {
            return self.clone();
        }
        Monomial::from_pairs(self.vars.iter().copied().chain([(l, self.tau)]), 0)
    }

    /// True when `other` is a multiple of `self` (every exponent, including `t`, at least as large).
    pub fn divides(&self, other: &Monomial) -> bool {
        if other.saturated {
            return true;
        }
        if self.saturated {
            return false;
        }
        self.tau <= other.tau && self.vars.iter().all(|&(v, e)| other.degree_of(v) >= e)
    }

    /// Dense exponent vector of length `n` (ignores `t`).
    pub fn exponents(&self, n: usize) -> Vec<u32> {
        let mut out = vec![0; n];
        for &(v, e) in &self.vars {
            if v < n {
                out[v] = e;
            }
        }
        out
    }

    pub fn max_var(&self) -> Option<usize> {
        self.vars.last().map(|&(v, _)| v)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.saturated, other.saturated) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (false, false) => self.vars.cmp(&other.vars).then(self.tau.cmp(&other.tau)),
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.saturated {
            return f.write_str("inf");
        }
        if self.vars.is_empty() && self.tau == 0 {
            return f.write_str("1");
        }
        let mut parts: Vec<String> = Vec::new();
        match self.tau {
            0 => {}
            1 => parts.push("t".into()),
            k => parts.push(format!("t^{k}")),
        }
        for &(v, e) in &self.vars {
            if e == 1 {
                parts.push(format!("x{}", v + 1));
            } else {
                parts.push(format!("x{}^{}", v + 1, e));
            }
        }
        f.write_str(&parts.join("*"))
    }
}

impl FromStr for Monomial {
    type Err = TextError;

    /// Parses `1`, `inf`, or `*`-separated factors such as `t^2*x1*x3^4`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "inf" {
            return Ok(Monomial::saturated());
        }
        if s == "1" {
            return Ok(Monomial::one());
        }
        let mut pairs = Vec::new();
        let mut tau = 0;
        for factor in s.split('*') {
            let factor = factor.trim();
            let (base, exp) = match factor.split_once('^') {
                Some((b, e)) => {
                    let e: u32 = e.trim().parse().map_err(|_| TextError::new(s, "bad exponent"))?;
                    (b.trim(), e)
                }
                None => (factor, 1),
            };
            if base == "t" {
                tau += exp;
            } else if let Some(idx) = base.strip_prefix('x').or_else(|| base.strip_prefix('X')) {
                let i: usize = idx.parse().map_err(|_| TextError::new(s, "bad variable"))?;
                if i == 0 {
                    return Err(TextError::new(s, "variables are numbered from 1"));
                }
                pairs.push((i - 1, exp));
            } else {
                return Err(TextError::new(s, "expected x<i>, t, 1 or inf"));
            }
        }
        Ok(Monomial::from_pairs(pairs, tau))
    }
}
