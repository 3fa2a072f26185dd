//! Degree polyhedra: the convex hull of attainable degree vectors extended
//! downwards, with exact rational membership tests.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::engine::{EngineConfig, UniVal};
use crate::error::AnalysisError;
use crate::lang::Program;
use crate::multi::attainable_monomials;
use crate::poly::Monomial;
use crate::uni::decide_univariate;

/// Integer points generating `conv(points) + cone(-e_1, …, -e_n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyhedronGen {
    pub dim: usize,
    pub points: BTreeSet<Vec<u32>>,
}

fn rat(x: u32) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

impl PolyhedronGen {
    pub fn new(dim: usize, points: impl IntoIterator<Item = Vec<u32>>) -> Self {
        PolyhedronGen { dim, points: points.into_iter().collect() }
    }

    /// Is some convex combination of the points componentwise at least `d`?
    pub fn contains(&self, d: &[BigRational]) -> Result<bool, AnalysisError> {
        if d.len() != self.dim {
            return Err(AnalysisError::Dimension(d.len(), self.dim));
        }
        if self.points.is_empty() {
            return Err(AnalysisError::EmptyGenerators);
        }
        let pts: Vec<&Vec<u32>> = self.points.iter().collect();
        Ok(dominated_by_hull(&pts, d))
    }

    pub fn contains_int(&self, d: &[u32]) -> Result<bool, AnalysisError> {
        self.contains(&d.iter().map(|&x| rat(x)).collect::<Vec<_>>())
    }

    /// Points that do not lie in the polyhedron generated by the others.
    pub fn vertices(&self) -> BTreeSet<Vec<u32>> {
        let all: Vec<&Vec<u32>> = self.points.iter().collect();
        let mut out = BTreeSet::new();
        for (i, v) in all.iter().enumerate() {
            let rest: Vec<&Vec<u32>> = all.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, p)| *p).collect();
            let target: Vec<BigRational> = v.iter().map(|&x| rat(x)).collect();
            if rest.is_empty() || !dominated_by_hull(&rest, &target) {
                out.insert((*v).clone());
            }
        }
        out
    }
}

/// Feasibility of `λ ≥ 0, Σλ = 1, Σ λ_v v ≥ d` by phase-one simplex.
fn dominated_by_hull(points: &[&Vec<u32>], d: &[BigRational]) -> bool {
    let n = d.len();
    let k = points.len();
    // Columns: λ (k), surplus (n), artificial (n + 1), then the right-hand side.
    let rows = n + 1;
    let cols = k + n + rows;
    let mut t: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); cols + 1]; rows];
    for i in 0..n {
        for (c, p) in points.iter().enumerate() {
            t[i][c] = rat(p[i]);
        }
        t[i][k + i] = -BigRational::one();
        t[i][cols] = d[i].clone();
    }
    for x in &mut t[n][..k] {
        *x = BigRational::one();
    }
    t[n][cols] = BigRational::one();
    for (r, row) in t.iter_mut().enumerate() {
        if row[cols].is_negative() {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
        }
        row[k + n + r] = BigRational::one();
    }
    let mut basis: Vec<usize> = (0..rows).map(|r| k + n + r).collect();
    // Objective: minimize the sum of artificials, written as reduced costs.
    let mut obj = vec![BigRational::zero(); cols + 1];
    for row in &t {
        for c in 0..=cols {
            if c < k + n || c == cols {
                obj[c] -= &row[c];
            }
        }
    }
    while let Some(enter) = (0..cols).find(|&c| obj[c].is_negative()) {
        let mut leave: Option<(usize, BigRational)> = None;
        for r in 0..rows {
            if t[r][enter].is_positive() {
                let ratio = &t[r][cols] / &t[r][enter];
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => ratio < *best || (ratio == *best && basis[r] < basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let Some((r, _)) = leave else { break };
        pivot(&mut t, &mut obj, r, enter);
        basis[r] = enter;
    }
    obj[cols].is_zero()
}

fn pivot(t: &mut [Vec<BigRational>], obj: &mut [BigRational], r: usize, c: usize) {
    let p = t[r][c].clone();
    for x in t[r].iter_mut() {
        *x = &*x / &p;
    }
    let prow = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i != r && !row[c].is_zero() {
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&prow) {
                *x -= &f * y;
            }
        }
    }
    if !obj[c].is_zero() {
        let f = obj[c].clone();
        for (x, y) in obj.iter_mut().zip(&prow) {
            *x -= &f * y;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiAnswer {
    pub attainable: bool,
    /// The variable can exceed every monomial within the cap.
    pub unbounded: bool,
}

/// Is `m` an attainable lower bound for variable `j`?
pub fn decide_multivariate(prog: &Program, j: usize, m: &Monomial, cap: u64) -> Result<MultiAnswer, AnalysisError> {
    let n = prog.n();
    if m.max_var().is_some_and(|v| v >= n) || m.tau() > 0 || m.is_saturated() {
        return Err(AnalysisError::InvalidQuery(format!("{m} is not a monomial over x1..x{n}")));
    }
    let att = attainable_monomials(prog, j, cap)?;
    if att.unbounded {
        return Ok(MultiAnswer { attainable: true, unbounded: true });
    }
    if att.vectors.is_empty() {
        return Ok(MultiAnswer { attainable: false, unbounded: false });
    }
    let gen = PolyhedronGen::new(n, att.vectors);
    Ok(MultiAnswer { attainable: gen.contains_int(&m.exponents(n))?, unbounded: false })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Bounds {
    pub vertices: BTreeSet<Vec<u32>>,
    pub interior: BTreeSet<Vec<u32>>,
    pub unbounded: bool,
}

impl Bounds {
    /// `max(m1, m2, …)` over the vertices.
    pub fn upper_bound(&self) -> String {
        let ms: Vec<String> = self.vertices.iter().map(|v| Monomial::from_exponents(v).to_string()).collect();
        format!("max({})", ms.join(", "))
    }
}

/// Attainable monomials of variable `j` with every exponent at most `max_degree`,
/// split into vertices and dominated points.
pub fn generate_multivariate(prog: &Program, j: usize, max_degree: u32, cap: u64) -> Result<Bounds, AnalysisError> {
    let att = attainable_monomials(prog, j, cap)?;
    let pts: BTreeSet<Vec<u32>> = att.vectors.into_iter().filter(|v| v.iter().all(|&e| e <= max_degree)).collect();
    let vertices = PolyhedronGen::new(prog.n(), pts.iter().cloned()).vertices();
    let interior = pts.difference(&vertices).cloned().collect();
    Ok(Bounds { vertices, interior, unbounded: att.unbounded })
}

/// Bit length of the weight vectors that suffice to separate a non-member from
/// the polyhedron: `4n²(n + bits(d_max))`.
pub fn u_bound_bits(n: usize, d_max: u32) -> u64 {
    let bits = u64::from(u32::BITS - d_max.leading_zeros());
    4 * (n as u64).pow(2) * (n as u64 + bits)
}

/// Largest weight component once the bit bound is clipped to `max_bits`.
pub fn clipped_umax(n: usize, d_max: u32, max_bits: u32) -> u32 {
    let bits = u_bound_bits(n, d_max).min(u64::from(max_bits.min(32)));
    ((1u64 << bits) - 1) as u32
}

/// Membership decided through univariate queries: `d` lies outside iff some
/// weight vector `u` with components in `0..=umax` makes degree `u·d` unreachable
/// from the state `⟨x^u1, …, x^un⟩`.
pub fn decide_via_univariate(
    prog: &Program,
    j: usize,
    d: &[u32],
    umax: u32,
    budget: u128,
    cfg: EngineConfig,
) -> Result<bool, AnalysisError> {
    let n = prog.n();
    if d.len() != n {
        return Err(AnalysisError::Dimension(d.len(), n));
    }
    let needed = u128::from(umax + 1).checked_pow(n as u32).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(AnalysisError::BoundTooLarge { needed, budget });
    }
    let mut u = vec![0u32; n];
    loop {
        let init: Vec<UniVal> = u.iter().map(|&x| UniVal::Ord(x)).collect();
        let target: u64 = u.iter().zip(d).map(|(&a, &b)| u64::from(a) * u64::from(b)).sum();
        let target = u32::try_from(target)
            .map_err(|_| AnalysisError::BoundTooLarge { needed: u128::from(target), budget: u128::from(u32::MAX) })?;
        if !decide_univariate(prog, &init, j, target, cfg)?.answer {
            return Ok(false);
        }
        if !advance(&mut u, umax) {
            return Ok(true);
        }
    }
}

fn advance(u: &mut [u32], umax: u32) -> bool {
    for x in u.iter_mut() {
        if *x < umax {
            *x += 1;
            return true;
        }
        *x = 0;
    }
    false
}
