//! Smith normal form over the integers.
//!
//! The elimination is deterministic: the pivot is the entry of smallest nonzero
//! absolute value in the active submatrix, ties broken by the lexicographically
//! first position. All four transforms (`left`, `right` and their inverses) are
//! tracked so that callers can move between the input basis and the diagonal basis
//! without a separate inversion.
//!
//! Transforms are kept in arbitrary precision: even for small inputs their entries
//! can outgrow 64 bits. Only the diagonal is narrowed.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{BigIntMatrix, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SmithDecomposition {
    /// Unimodular `m x m` matrix acting on rows.
    pub left: BigIntMatrix,
    /// Divisibility chain of length `min(m, n)`; trailing zeros for rank deficiency.
    pub diagonal: Vec<i64>,
    /// Unimodular `n x n` matrix acting on columns.
    pub right: BigIntMatrix,
    #[serde(skip)]
    pub left_inv: BigIntMatrix,
    #[serde(skip)]
    pub right_inv: BigIntMatrix,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().take_while(|&&d| d != 0).count()
    }

    /// The diagonal as a full `m x n` matrix.
    pub fn diagonal_matrix(&self) -> IntMatrix {
        let mut d = IntMatrix::zeros(self.left.rows(), self.right.rows());
        for (i, &v) in self.diagonal.iter().enumerate() {
            d[(i, i)] = v;
        }
        d
    }

    /// A basis of the integer kernel `{x : M x = 0}`, saturated in `Z^n`.
    ///
    /// The columns of `right` past the rank span it; they are brought to Hermite
    /// form before narrowing so the entries stay small.
    pub fn kernel_basis(&self) -> Result<Vec<Vec<i64>>> {
        let cols: Vec<Vec<BigInt>> = (self.rank()..self.right.cols())
            .map(|j| self.right.column(j))
            .collect();
        narrow_basis(cols)
    }

    /// A basis of the left kernel `{y : y^T M = 0}`.
    pub fn left_kernel_basis(&self) -> Result<Vec<Vec<i64>>> {
        let rows: Vec<Vec<BigInt>> = (self.rank()..self.left.rows())
            .map(|i| self.left.row(i).to_vec())
            .collect();
        narrow_basis(rows)
    }
}

/// Reduces a lattice basis by its Hermite normal form and narrows it to `i64`.
/// HNF entries are bounded by the covolume, so this succeeds whenever the
/// saturated kernel has a small basis at all in practice.
pub(crate) fn narrow_basis(mut b: Vec<Vec<BigInt>>) -> Result<Vec<Vec<i64>>> {
    let k = b.len();
    let n = b.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..n {
        if r == k {
            break;
        }
        // Euclid on column c over rows r..k.
        loop {
            let piv = (r..k)
                .filter(|&i| !b[i][c].is_zero())
                .min_by(|&x, &y| b[x][c].abs().cmp(&b[y][c].abs()));
            let Some(p) = piv else { break };
            b.swap(r, p);
            let mut done = true;
            for i in r + 1..k {
                if b[i][c].is_zero() {
                    continue;
                }
                let q = b[i][c].div_floor(&b[r][c]);
                let src = b[r].clone();
                for (x, s) in b[i].iter_mut().zip(&src) {
                    *x -= &q * s;
                }
                done &= b[i][c].is_zero();
            }
            if done {
                break;
            }
        }
        if r < k && !b[r][c].is_zero() {
            if b[r][c].is_negative() {
                for x in b[r].iter_mut() {
                    *x = -std::mem::take(x);
                }
            }
            for i in 0..r {
                let q = b[i][c].div_floor(&b[r][c]);
                let src = b[r].clone();
                for (x, s) in b[i].iter_mut().zip(&src) {
                    *x -= &q * s;
                }
            }
            r += 1;
        }
    }
    b.iter()
        .map(|v| {
            v.iter()
                .map(|x| x.to_i64().ok_or(Error::Overflow("kernel basis entry")))
                .collect()
        })
        .collect()
}

struct Work {
    a: BigIntMatrix,
    left: BigIntMatrix,
    left_inv: BigIntMatrix,
    right: BigIntMatrix,
    right_inv: BigIntMatrix,
}

impl Work {
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_row(dst, src, k);
        self.left.add_row(dst, src, k);
        self.left_inv.add_col(src, dst, &-k);
    }

    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_col(dst, src, k);
        self.right.add_col(dst, src, k);
        self.right_inv.add_row(src, dst, &-k);
    }

    fn swap_rows(&mut self, x: usize, y: usize) {
        self.a.swap_rows(x, y);
        self.left.swap_rows(x, y);
        self.left_inv.swap_cols(x, y);
    }

    fn swap_cols(&mut self, x: usize, y: usize) {
        self.a.swap_cols(x, y);
        self.right.swap_cols(x, y);
        self.right_inv.swap_rows(x, y);
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.left.negate_row(i);
        self.left_inv.negate_col(i);
    }

    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(BigInt, usize, usize)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let v = &self.a[(i, j)];
                if v.is_zero() {
                    continue;
                }
                let abs = v.abs();
                if best.as_ref().is_none_or(|(b, _, _)| abs < *b) {
                    best = Some((abs, i, j));
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }
}

/// Computes `left * m * right = diag(d_1, ..., d_k)` with `d_i | d_{i+1}`.
pub fn smith_normal_form(m: &IntMatrix) -> Result<SmithDecomposition> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Work {
        a: BigIntMatrix::from(m),
        left: BigIntMatrix::identity(rows),
        left_inv: BigIntMatrix::identity(rows),
        right: BigIntMatrix::identity(cols),
        right_inv: BigIntMatrix::identity(cols),
    };
    let steps = rows.min(cols);
    'outer: for t in 0..steps {
        loop {
            let Some((pi, pj)) = w.pivot(t) else {
                break 'outer;
            };
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);
            let p = w.a[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..rows {
                let q = &w.a[(i, t)] / &p;
                w.add_row(i, t, &-q);
                clean &= w.a[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                let q = &w.a[(t, j)] / &p;
                w.add_col(j, t, &-q);
                clean &= w.a[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !(&w.a[(i, j)] % &p).is_zero()));
            match offender {
                Some(i) => w.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if w.a[(t, t)].is_negative() {
            w.negate_row(t);
        }
    }
    let diagonal = (0..steps)
        .map(|i| w.a[(i, i)].to_i64().ok_or(Error::Overflow("Smith diagonal entry")))
        .collect::<Result<_>>()?;
    Ok(SmithDecomposition {
        left: w.left,
        diagonal,
        right: w.right,
        left_inv: w.left_inv,
        right_inv: w.right_inv,
    })
}

/// Rank of an integer matrix.
pub fn rank(m: &IntMatrix) -> Result<usize> {
    Ok(smith_normal_form(m)?.rank())
}

/// Checks the full decomposition contract; used by tests and debug assertions.
pub fn verify(m: &IntMatrix, s: &SmithDecomposition) -> Result<()> {
    let big = BigIntMatrix::from(m);
    let prod = s.left.mul(&big)?.mul(&s.right)?;
    if prod != BigIntMatrix::from(&s.diagonal_matrix()) {
        return Err(Error::invalid("left * M * right is not the diagonal"));
    }
    if !s.left.determinant()?.abs().is_one() || !s.right.determinant()?.abs().is_one() {
        return Err(Error::invalid("transform is not unimodular"));
    }
    if s.left.mul(&s.left_inv)? != BigIntMatrix::identity(m.rows())
        || s.right.mul(&s.right_inv)? != BigIntMatrix::identity(m.cols())
    {
        return Err(Error::invalid("tracked inverse is wrong"));
    }
    for w in s.diagonal.windows(2) {
        let ok = if w[0] == 0 { w[1] == 0 } else { w[1] % w[0] == 0 };
        if !ok || w[0] < 0 {
            return Err(Error::invalid(format!("divisibility chain broken at {w:?}")));
        }
    }
    Ok(())
}
