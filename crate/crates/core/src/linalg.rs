//! Small dense linear algebra over F_2 on vectors packed into `u32` words.
//!
//! Bit `i` of a word is coordinate `x_{i+1}`. Row-echelon forms use the
//! highest set bit of each row as its pivot.

use crate::error::{invalid, Result};

/// Parity of the dot product `a . b` over F_2.
#[inline]
pub fn dot(a: u32, b: u32) -> u32 {
    (a & b).count_ones() & 1
}

/// Reduced row-echelon form of the span of `rows`.
///
/// The result is sorted by increasing pivot, every pivot column is zero in
/// all other rows, and zero rows are dropped. Two generating sets of the same
/// space always produce the same output.
pub fn rref(rows: &[u32]) -> Vec<u32> {
    let mut basis: Vec<u32> = Vec::with_capacity(rows.len());
    for &r in rows {
        let v = reduce(&basis, r);
        if v == 0 {
            continue;
        }
        let p = 31 - v.leading_zeros();
        for b in basis.iter_mut() {
            if (*b >> p) & 1 == 1 {
                *b ^= v;
            }
        }
        basis.push(v);
    }
    basis.sort_unstable();
    basis
}

/// Reduce `v` against an echelon basis (rows with distinct pivots).
#[inline]
pub fn reduce(basis: &[u32], mut v: u32) -> u32 {
    loop {
        let mut changed = false;
        for &b in basis {
            let p = 31 - b.leading_zeros();
            if (v >> p) & 1 == 1 {
                v ^= b;
                changed = true;
            }
        }
        if !changed {
            return v;
        }
    }
}

pub fn rank(rows: &[u32]) -> usize {
    rref(rows).len()
}

pub fn is_independent(rows: &[u32]) -> bool {
    rank(rows) == rows.len()
}

/// The orthogonal complement `{w : w . e = 0 for all e in span(rows)}` inside
/// F_2^n, returned in RREF.
pub fn annihilator(rows: &[u32], n: u32) -> Vec<u32> {
    let basis = rref(rows);
    let pivots: u32 = basis.iter().fold(0, |acc, &b| acc | (1 << (31 - b.leading_zeros())));
    let mut out = Vec::with_capacity(n as usize - basis.len());
    for f in 0..n {
        if (pivots >> f) & 1 == 1 {
            continue;
        }
        // free coordinate f set to 1; solve for pivot coordinates
        let mut w = 1u32 << f;
        for &b in &basis {
            if (b >> f) & 1 == 1 {
                w |= 1 << (31 - b.leading_zeros());
            }
        }
        out.push(w);
    }
    // w . b = b_f + b_p = 1 + 1 = 0 for rows touching f; other rows give 0
    rref(&out)
}

/// Square matrix over F_2 stored as rows; `apply` computes `M x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: Vec<u32>,
}

impl BitMatrix {
    pub fn from_rows(rows: Vec<u32>) -> Self {
        BitMatrix { rows }
    }

    pub fn identity(n: u32) -> Self {
        BitMatrix { rows: (0..n).map(|i| 1 << i).collect() }
    }

    /// Matrix whose columns are the given vectors, i.e. `M e_i = cols[i]`.
    pub fn from_columns(cols: &[u32], n: u32) -> Self {
        let rows = (0..n)
            .map(|i| {
                cols.iter()
                    .enumerate()
                    .fold(0u32, |acc, (j, &c)| acc | (((c >> i) & 1) << j))
            })
            .collect();
        BitMatrix { rows }
    }

    pub fn dim(&self) -> u32 {
        self.rows.len() as u32
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.rows
            .iter()
            .enumerate()
            .fold(0u32, |acc, (i, &r)| acc | (dot(r, x) << i))
    }

    pub fn is_invertible(&self) -> bool {
        rank(&self.rows) == self.rows.len()
    }

    pub fn transpose(&self) -> Self {
        BitMatrix::from_columns(&self.rows, self.dim())
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.dim() as usize;
        // Gauss-Jordan on [M | I], augmented half kept in a parallel vector
        let mut a = self.rows.clone();
        let mut inv: Vec<u32> = (0..n).map(|i| 1u32 << i).collect();
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| (a[r] >> col) & 1 == 1)
                .ok_or_else(|| invalid!("matrix is singular"))?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            for r in 0..n {
                if r != col && (a[r] >> col) & 1 == 1 {
                    a[r] ^= a[col];
                    inv[r] ^= inv[col];
                }
            }
        }
        Ok(BitMatrix { rows: inv })
    }

    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        let cols: Vec<u32> = (0..other.dim()).map(|j| self.apply(other.apply(1 << j))).collect();
        BitMatrix::from_columns(&cols, self.dim())
    }
}
