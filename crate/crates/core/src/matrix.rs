//! Boolean data-flow matrices.
//!
//! Entry `(i, j)` is set when target variable `j` depends on source variable `i`.
//! With this orientation, running `p` then `q` corresponds to the product `P * Q`.

use std::fmt;
use std::str::FromStr;

use crate::error::TextError;
use crate::poly::Amp;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DFMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl DFMatrix {
    pub fn zero(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        DFMatrix { n, words, bits: vec![0; n * words] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = DFMatrix::zero(n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Matrix of `x_i := x_j`: the identity with column `i` replaced by the unit vector `e_j`.
    pub fn assign(n: usize, j: usize, i: usize) -> Self {
        let mut m = DFMatrix::erase(n, i);
        m.set(j, i, true);
        m
    }

    /// The identity with column `i` zeroed.
    pub fn erase(n: usize, i: usize) -> Self {
        let mut m = DFMatrix::identity(n);
        m.set(i, i, false);
        m
    }

    pub fn from_rows(rows: &[&str]) -> Result<Self, TextError> {
        let n = rows.len();
        let mut m = DFMatrix::zero(n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.trim();
            if row.chars().count() != n {
                return Err(TextError::new(row, "row length differs from the row count"));
            }
            for (j, c) in row.chars().enumerate() {
                match c {
                    '1' => m.set(i, j, true),
                    '0' => {}
                    _ => return Err(TextError::new(row, "expected 0 or 1")),
                }
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        let w = &mut self.bits[i * self.words + j / 64];
        if v {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    pub fn mul(&self, other: &DFMatrix) -> DFMatrix {
        debug_assert_eq!(self.n, other.n);
        let mut out = DFMatrix::zero(self.n);
        for i in 0..self.n {
            let dst = i * self.words;
            for k in 0..self.n {
                if self.get(i, k) {
                    for (w, src) in other.row(k).iter().enumerate() {
                        out.bits[dst + w] |= src;
                    }
                }
            }
        }
        out
    }

    pub fn and(&self, other: &DFMatrix) -> DFMatrix {
        self.zip(other, |a, b| a & b)
    }

    pub fn or(&self, other: &DFMatrix) -> DFMatrix {
        self.zip(other, |a, b| a | b)
    }

    fn zip(&self, other: &DFMatrix, f: impl Fn(u64, u64) -> u64) -> DFMatrix {
        debug_assert_eq!(self.n, other.n);
        let bits = self.bits.iter().zip(&other.bits).map(|(&a, &b)| f(a, b)).collect();
        DFMatrix { n: self.n, words: self.words, bits }
    }

    pub fn diag(&self, i: usize) -> bool {
        self.get(i, i)
    }

    /// `I ∧ M`: keeps only the diagonal.
    pub fn diag_restrict(&self) -> DFMatrix {
        let mut out = DFMatrix::zero(self.n);
        for i in 0..self.n {
            out.set(i, i, self.get(i, i));
        }
        out
    }

    /// `I ∧ ¬M`: the diagonal positions where `M` is clear.
    pub fn diag_complement(&self) -> DFMatrix {
        let mut out = DFMatrix::zero(self.n);
        for i in 0..self.n {
            out.set(i, i, !self.get(i, i));
        }
        out
    }

    /// The matrix update applied by a successful generalization step:
    /// `(I∧M) M (I∧¬M) ∨ (I∧M)`.
    pub fn gen_matrix(&self) -> DFMatrix {
        let d = self.diag_restrict();
        d.mul(self).mul(&self.diag_complement()).or(&d)
    }

    /// Linear data-flow matrix: `(i, j)` set when `p[j]` contains the monomial `x_i`
    /// (a `t` factor is ignored).
    pub fn ldfm_of(p: &Amp) -> DFMatrix {
        let mut m = DFMatrix::zero(p.dim());
        for j in 0..p.dim() {
            for mono in p.entry(j).monomials() {
                if let Some(i) = (0..p.dim()).find(|&i| mono.is_linear_in(i)) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Data-flow matrix: `(i, j)` set when `p[j]` depends on `x_i`.
    pub fn dfm_of(p: &Amp) -> DFMatrix {
        let mut m = DFMatrix::zero(p.dim());
        for j in 0..p.dim() {
            for i in p.entry(j).support() {
                m.set(i, j, true);
            }
        }
        m
    }

    pub fn rows(&self) -> Vec<String> {
        (0..self.n).map(|i| (0..self.n).map(|j| if self.get(i, j) { '1' } else { '0' }).collect()).collect()
    }
}

impl fmt::Display for DFMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.rows().join(","))
    }
}

impl fmt::Debug for DFMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DFMatrix[{self}]")
    }
}

impl FromStr for DFMatrix {
    type Err = TextError;

    /// Comma- or whitespace-separated rows of `0`/`1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let rows: Vec<&str> = s.split(|c: char| c == ',' || c.is_whitespace()).filter(|r| !r.is_empty()).collect();
        DFMatrix::from_rows(&rows)
    }
}
