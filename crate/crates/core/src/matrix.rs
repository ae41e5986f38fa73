//! Square matrices over exact rational expressions.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::ratexpr::RatExpr;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SqMatrix {
    size: usize,
    entries: Vec<RatExpr>,
}

impl SqMatrix {
    pub fn from_rows(rows: Vec<Vec<RatExpr>>) -> SqMatrix {
        let size = rows.len();
        assert!(rows.iter().all(|r| r.len() == size), "ragged rows");
        SqMatrix {
            size,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn identity(size: usize) -> SqMatrix {
        let mut m = SqMatrix::zeros(size);
        for i in 0..size {
            *m.at_mut(i, i) = RatExpr::one();
        }
        m
    }

    pub fn zeros(size: usize) -> SqMatrix {
        SqMatrix {
            size,
            entries: vec![RatExpr::zero(); size * size],
        }
    }

    pub fn diagonal(entries: Vec<RatExpr>) -> SqMatrix {
        let mut m = SqMatrix::zeros(entries.len());
        for (i, e) in entries.into_iter().enumerate() {
            *m.at_mut(i, i) = e;
        }
        m
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Zero-based access.
    pub fn at(&self, row: usize, col: usize) -> &RatExpr {
        &self.entries[row * self.size + col]
    }

    pub fn at_mut(&mut self, row: usize, col: usize) -> &mut RatExpr {
        &mut self.entries[row * self.size + col]
    }

    pub fn diag(&self) -> Vec<RatExpr> {
        (0..self.size).map(|i| self.at(i, i).clone()).collect()
    }

    pub fn transpose(&self) -> SqMatrix {
        let mut m = SqMatrix::zeros(self.size);
        for i in 0..self.size {
            for j in 0..self.size {
                *m.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        m
    }

    pub fn mul(&self, other: &SqMatrix) -> Result<SqMatrix> {
        if self.size != other.size {
            return Err(Error::SizeMismatch(self.size, other.size));
        }
        let n = self.size;
        let mut m = SqMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = RatExpr::zero();
                for k in 0..n {
                    let a = self.at(i, k);
                    let b = other.at(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                *m.at_mut(i, j) = acc;
            }
        }
        Ok(m)
    }

    /// Exact determinant by Laplace expansion with column-subset memoization
    /// (division-free, fine for the small ranks used here).
    pub fn det(&self) -> RatExpr {
        let n = self.size;
        if n == 0 {
            return RatExpr::one();
        }
        let mut memo: HashMap<u32, RatExpr> = HashMap::new();
        self.det_cols((1u32 << n) - 1, &mut memo)
    }

    fn det_cols(&self, cols: u32, memo: &mut HashMap<u32, RatExpr>) -> RatExpr {
        if cols == 0 {
            return RatExpr::one();
        }
        if let Some(d) = memo.get(&cols) {
            return d.clone();
        }
        let k = cols.count_ones() as usize;
        let row = self.size - k; // expand along the first remaining row
        let mut acc = RatExpr::zero();
        let mut sign = 1i64;
        for j in 0..self.size {
            if cols & (1 << j) == 0 {
                continue;
            }
            let a = self.at(row, j);
            if !a.is_zero() {
                let minor = self.det_cols(cols & !(1 << j), memo);
                let term = a.mul(&minor);
                acc = if sign > 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            sign = -sign;
        }
        memo.insert(cols, acc.clone());
        acc
    }

    /// Exact inverse via Gauss-Jordan over the rational-function field.
    pub fn inverse(&self) -> Result<SqMatrix> {
        let n = self.size;
        let mut a = self.clone();
        let mut inv = SqMatrix::identity(n);
        for col in 0..n {
            let pivot_row = (col..n)
                .find(|&r| !a.at(r, col).is_zero())
                .ok_or_else(|| Error::SingularMatrix(self.det().to_string()))?;
            if pivot_row != col {
                for j in 0..n {
                    let (lo, hi) = (col.min(pivot_row), col.max(pivot_row));
                    self_swap(&mut a, lo, hi, j);
                    self_swap(&mut inv, lo, hi, j);
                }
            }
            let pivot = a.at(col, col).clone();
            let pinv = pivot.inverse()?;
            for j in 0..n {
                *a.at_mut(col, j) = a.at(col, j).mul(&pinv);
                *inv.at_mut(col, j) = inv.at(col, j).mul(&pinv);
            }
            for r in 0..n {
                if r == col || a.at(r, col).is_zero() {
                    continue;
                }
                let factor = a.at(r, col).clone();
                for j in 0..n {
                    let va = a.at(col, j).mul(&factor);
                    *a.at_mut(r, j) = a.at(r, j).sub(&va);
                    let vi = inv.at(col, j).mul(&factor);
                    *inv.at_mut(r, j) = inv.at(r, j).sub(&vi);
                }
            }
        }
        Ok(inv)
    }

    /// Gauss decomposition `g = b * u` with `b` lower triangular and `u`
    /// unit upper triangular. Defined exactly when every leading principal
    /// minor is a nonzero rational expression; the error reports the first
    /// vanishing minor (1-based).
    pub fn gauss_lu(&self) -> Result<(SqMatrix, SqMatrix)> {
        let n = self.size;
        let mut lower = SqMatrix::zeros(n);
        let mut upper = SqMatrix::identity(n);
        for j in 0..n {
            // Column j of the lower factor.
            for i in j..n {
                let mut acc = self.at(i, j).clone();
                for k in 0..j {
                    acc = acc.sub(&lower.at(i, k).mul(upper.at(k, j)));
                }
                *lower.at_mut(i, j) = acc;
            }
            let pivot = lower.at(j, j).clone();
            if pivot.is_zero() {
                return Err(Error::NotInBorelCell(j + 1));
            }
            let pinv = pivot.inverse()?;
            // Row j of the unit upper factor.
            for col in j + 1..n {
                let mut acc = self.at(j, col).clone();
                for k in 0..j {
                    acc = acc.sub(&lower.at(j, k).mul(upper.at(k, col)));
                }
                *upper.at_mut(j, col) = acc.mul(&pinv);
            }
        }
        Ok((lower, upper))
    }

    pub fn is_upper_unitriangular(&self) -> bool {
        let n = self.size;
        (0..n).all(|i| {
            self.at(i, i).is_one() && (0..i).all(|j| self.at(i, j).is_zero())
        })
    }

    pub fn is_lower_triangular(&self) -> bool {
        let n = self.size;
        (0..n).all(|i| (i + 1..n).all(|j| self.at(i, j).is_zero()))
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.size;
        (0..n).all(|i| (0..n).all(|j| i == j || self.at(i, j).is_zero()))
    }
}

fn self_swap(m: &mut SqMatrix, r1: usize, r2: usize, col: usize) {
    let n = m.size;
    m.entries.swap(r1 * n + col, r2 * n + col);
}

impl fmt::Display for SqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.size {
            write!(f, "[")?;
            for j in 0..self.size {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Parse a matrix from rows of canonical expression strings (test helper).
pub fn mat(rows: &[&[&str]]) -> SqMatrix {
    SqMatrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|s| crate::ratexpr::rex(s)).collect())
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratexpr::rex;

    #[test]
    fn identity_multiplication() {
        let m = mat(&[&["1", "a"], &["0", "1"]]);
        let id = SqMatrix::identity(2);
        assert_eq!(m.mul(&id).unwrap(), m);
    }

    #[test]
    fn det_of_identity() {
        assert!(SqMatrix::identity(4).det().is_one());
    }

    #[test]
    fn inverse_round_trip() {
        let m = mat(&[&["a", "1", "0"], &["0", "b", "1"], &["1", "0", "c"]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), SqMatrix::identity(3));
        assert_eq!(inv.inverse().unwrap(), m);
    }

    #[test]
    fn singular_matrix_reports_determinant() {
        let m = mat(&[&["1", "1"], &["1", "1"]]);
        assert!(matches!(m.inverse(), Err(Error::SingularMatrix(_))));
    }

    #[test]
    fn diagonal_inverse() {
        let m = SqMatrix::diagonal(vec![rex("t1"), rex("t2")]);
        let inv = m.inverse().unwrap();
        assert_eq!(*inv.at(0, 0), rex("(1)/(t1)"));
        assert_eq!(*inv.at(1, 1), rex("(1)/(t2)"));
    }

    #[test]
    fn lu_on_lower_triangular_is_trivial() {
        let g = mat(&[&["a", "0"], &["1", "b"]]);
        let (b, u) = g.gauss_lu().unwrap();
        assert_eq!(b, g);
        assert!(u.is_upper_unitriangular());
    }

    #[test]
    fn lu_reconstructs_input() {
        let g = mat(&[
            &["a", "b", "1"],
            &["1", "c", "0"],
            &["0", "1", "d"],
        ]);
        let (b, u) = g.gauss_lu().unwrap();
        assert!(b.is_lower_triangular());
        assert!(u.is_upper_unitriangular());
        assert_eq!(b.mul(&u).unwrap(), g);
    }

    #[test]
    fn lu_reports_vanishing_minor() {
        let g = mat(&[&["0", "1"], &["1", "0"]]);
        assert_eq!(g.gauss_lu().unwrap_err(), Error::NotInBorelCell(1));
    }

    #[test]
    fn det_via_cofactors_matches_pivots() {
        let m = mat(&[&["a", "b"], &["c", "d"]]);
        assert_eq!(m.det(), rex("a*d - b*c"));
    }
}
