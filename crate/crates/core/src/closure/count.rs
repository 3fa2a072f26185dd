//! Linear path-counting matrices, saturating at 2.
//!
//! Abstract polynomials forget coefficients, so `x := x + x` looks like `x := x`.
//! Counting linear data-flow paths recovers that information: a loop whose
//! closed body has a diagonal count of 2 doubles a variable on every iteration.

use std::collections::BTreeSet;

use crate::lang::{Command, Expr};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub(crate) struct CountMat {
    n: usize,
    cells: Vec<u8>,
}

impl CountMat {
    fn zero(n: usize) -> Self {
        CountMat { n, cells: vec![0; n * n] }
    }

    pub(crate) fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.cells[i * n + i] = 1;
        }
        m
    }

    fn get(&self, i: usize, j: usize) -> u8 {
        self.cells[i * self.n + j]
    }

    fn bump(&mut self, i: usize, j: usize, by: u8) {
        let c = &mut self.cells[i * self.n + j];
        *c = (*c + by).min(2);
    }

    fn clear_column(&mut self, j: usize) {
        for i in 0..self.n {
            self.cells[i * self.n + j] = 0;
        }
    }

    fn of_atom(n: usize, target: usize, sources: &[usize]) -> Self {
        let mut m = Self::identity(n);
        m.clear_column(target);
        for &s in sources {
            m.bump(s, target, 1);
        }
        m
    }

    pub(crate) fn mul(&self, other: &CountMat) -> CountMat {
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if b != 0 {
                        out.bump(i, j, (a * b).min(2));
                    }
                }
            }
        }
        out
    }

    pub(crate) fn doubled(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(|&i| self.get(i, i) >= 2)
    }

    /// Effect of generalization on linear flow: self-dependent columns become
    /// unit columns; the rest keep only rows of self-dependent variables.
    fn generalized(&self) -> CountMat {
        let n = self.n;
        let sd: Vec<bool> = (0..n).map(|i| self.get(i, i) > 0).collect();
        let mut out = Self::zero(n);
        for j in 0..n {
            if sd[j] {
                out.cells[j * n + j] = 1;
                continue;
            }
            for i in (0..n).filter(|&i| sd[i]) {
                out.cells[i * n + j] = self.get(i, j);
            }
        }
        out
    }
}

pub(crate) type CountSet = BTreeSet<CountMat>;

pub(crate) fn atom(n: usize, c: &Command) -> CountSet {
    let m = match c {
        Command::Skip => CountMat::identity(n),
        Command::Assign(i, Expr::Var(j)) => CountMat::of_atom(n, *i, &[*j]),
        Command::Assign(i, Expr::Add(j, k)) => CountMat::of_atom(n, *i, &[*j, *k]),
        Command::Assign(i, Expr::Mul(..)) | Command::Reset(i) | Command::Havoc(i) => CountMat::of_atom(n, *i, &[]),
        _ => unreachable!("not an atomic command"),
    };
    BTreeSet::from([m])
}

pub(crate) fn product(a: &CountSet, b: &CountSet) -> CountSet {
    a.iter().flat_map(|x| b.iter().map(move |y| x.mul(y))).collect()
}

pub(crate) fn close(s: &CountSet, n: usize) -> CountSet {
    let mut all: CountSet = s.clone();
    all.insert(CountMat::identity(n));
    let mut frontier: Vec<CountMat> = all.iter().cloned().collect();
    while let Some(p) = frontier.pop() {
        let snapshot: Vec<CountMat> = all.iter().cloned().collect();
        for q in &snapshot {
            for r in [p.mul(q), q.mul(&p)] {
                if all.insert(r.clone()) {
                    frontier.push(r);
                }
            }
        }
    }
    all
}

/// Variables doubled by some closed path through the loop body.
pub(crate) fn doubling(closed: &CountSet) -> BTreeSet<usize> {
    closed.iter().flat_map(|m| m.doubled().collect::<Vec<_>>()).collect()
}

/// Linear flow of a whole loop, given the closed body and the variables whose
/// growth has been replaced by the saturated value.
pub(crate) fn loop_effect(closed: &CountSet, masked: &BTreeSet<usize>, n: usize) -> CountSet {
    let mut base: CountSet = closed
        .iter()
        .map(|m| {
            let mut m = m.clone();
            for &j in masked {
                m.clear_column(j);
            }
            m
        })
        .collect();
    let gen: Vec<CountMat> = base.iter().map(CountMat::generalized).collect();
    base.extend(gen);
    close(&base, n)
}
