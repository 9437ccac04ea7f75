//! Matrices of truncated series.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::ScalarMatrix;
use crate::scalar::Scalar;
use crate::series::BSeries;

/// Dense row-major matrix of [`BSeries`] sharing one precision.
#[derive(Clone)]
pub struct BMatrix {
    rows: usize,
    cols: usize,
    precision: usize,
    entries: Vec<BSeries>,
}

impl BMatrix {
    pub fn zeros(rows: usize, cols: usize, precision: usize) -> Self {
        BMatrix {
            rows,
            cols,
            precision,
            entries: vec![BSeries::zero(precision); rows * cols],
        }
    }

    pub fn identity(n: usize, precision: usize) -> Self {
        Self::from_constant(&ScalarMatrix::identity(n), precision)
    }

    pub fn from_fn(rows: usize, cols: usize, precision: usize, mut f: impl FnMut(usize, usize) -> BSeries) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j).truncate(precision).assume_precision(precision));
            }
        }
        BMatrix {
            rows,
            cols,
            precision,
            entries,
        }
    }

    /// Builds a matrix from rows of series; the precision is the smallest entry precision.
    pub fn from_rows(rows: Vec<Vec<BSeries>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        let precision = rows.iter().flatten().map(BSeries::precision).min().unwrap_or(0);
        Ok(Self::from_fn(r, c, precision, |i, j| rows[i][j].clone()))
    }

    /// Matrix with integer polynomial entries, `rows[i][j]` listing coefficients in ascending order.
    pub fn from_int_polys(rows: &[&[&[i64]]], precision: usize) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        Self::from_fn(r, c, precision, |i, j| BSeries::from_ints(rows[i][j], precision))
    }

    pub fn from_constant(m: &ScalarMatrix, precision: usize) -> Self {
        Self::from_fn(m.rows(), m.cols(), precision, |i, j| {
            BSeries::constant(m.get(i, j).clone(), precision)
        })
    }

    /// `Σ_k C_k b^k`.
    pub fn from_coeff_matrices(coeffs: &[ScalarMatrix], rows: usize, cols: usize, precision: usize) -> Self {
        Self::from_fn(rows, cols, precision, |i, j| {
            BSeries::new(coeffs.iter().map(|c| c.get(i, j).clone()).collect(), precision)
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn get(&self, i: usize, j: usize) -> &BSeries {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BSeries) {
        self.entries[i * self.cols + j] = v.truncate(self.precision).assume_precision(self.precision);
    }

    pub fn entries(&self) -> &[BSeries] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> Vec<BSeries> {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<BSeries> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn from_columns(rows: usize, cols: &[Vec<BSeries>], precision: usize) -> Self {
        Self::from_fn(rows, cols.len(), precision, |i, j| cols[j][i].clone())
    }

    /// Coefficient matrix of `b^k`.
    pub fn coeff_matrix(&self, k: usize) -> ScalarMatrix {
        ScalarMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).coeff(k))
    }

    pub fn constant_term(&self) -> ScalarMatrix {
        self.coeff_matrix(0)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(BSeries::is_zero)
    }

    /// Smallest valuation over the entries, `None` for the zero matrix.
    pub fn valuation(&self) -> Option<usize> {
        self.entries.iter().filter_map(BSeries::valuation).min()
    }

    pub fn truncate(&self, p: usize) -> Self {
        let p = p.min(self.precision);
        Self::from_fn(self.rows, self.cols, p, |i, j| self.get(i, j).clone())
    }

    /// Raises the declared precision, treating unknown coefficients as zero.
    pub fn assume_precision(&self, p: usize) -> Self {
        Self::from_fn(self.rows, self.cols, p, |i, j| self.get(i, j).assume_precision(p))
    }

    fn map(&self, precision: usize, f: impl Fn(&BSeries) -> BSeries) -> Self {
        BMatrix {
            rows: self.rows,
            cols: self.cols,
            precision,
            entries: self
                .entries
                .iter()
                .map(|e| f(e).truncate(precision).assume_precision(precision))
                .collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, self.precision, |i, j| self.get(j, i).clone())
    }

    /// Entrywise `S(b) -> S(-b)`.
    pub fn conjugate(&self) -> Self {
        self.map(self.precision, BSeries::conjugate)
    }

    /// Entrywise derivative; the precision drops by one.
    pub fn derivative(&self) -> Self {
        self.map(self.precision.saturating_sub(1), BSeries::derivative)
    }

    /// Multiplication by `b^k`; the precision rises by `k`.
    pub fn shift_up(&self, k: usize) -> Self {
        self.map(self.precision + k, |e| e.shift_up(k))
    }

    /// `b^2 M'`, known to one order more than `M`.
    pub fn b2_derivative(&self) -> Self {
        self.derivative().shift_up(2)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        self.map(self.precision, |e| e.scale(c))
    }

    pub fn scale_series(&self, s: &BSeries) -> Self {
        let p = self.precision.min(s.precision());
        self.map(p, |e| e * s)
    }

    pub fn neg(&self) -> Self {
        self.map(self.precision, |e| -e)
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let p = self.precision.min(other.precision);
        Ok(BMatrix {
            rows: self.rows,
            cols: self.cols,
            precision: p,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let p = self.precision.min(other.precision);
        Ok(BMatrix {
            rows: self.rows,
            cols: self.cols,
            precision: p,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let p = self.precision.min(other.precision);
        let mut out = Self::zeros(self.rows, other.cols, p);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BSeries::zero(p);
                for k in 0..self.cols {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = &acc + &(a * b);
                }
                out.entries[i * other.cols + j] = acc;
            }
        }
        Ok(out)
    }

    /// Panicking sum for internal use where shapes are known to agree.
    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("matrix shapes agree")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.try_sub(other).expect("matrix shapes agree")
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("matrix shapes agree")
    }

    pub fn mul_vec(&self, v: &[BSeries]) -> Vec<BSeries> {
        let p = v
            .iter()
            .map(BSeries::precision)
            .min()
            .unwrap_or(self.precision)
            .min(self.precision);
        (0..self.rows)
            .map(|i| {
                let mut acc = BSeries::zero(p);
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc = &acc + &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    /// Kronecker product `self ⊗ other`; row `(i, k)` maps to `i * other.rows + k`.
    pub fn kron(&self, other: &Self) -> Self {
        let p = self.precision.min(other.precision);
        Self::from_fn(self.rows * other.rows, self.cols * other.cols, p, |r, c| {
            let (i, k) = (r / other.rows, r % other.rows);
            let (j, l) = (c / other.cols, c % other.cols);
            self.get(i, j) * other.get(k, l)
        })
    }

    pub fn block_diag(&self, other: &Self) -> Self {
        let p = self.precision.min(other.precision);
        Self::from_fn(self.rows + other.rows, self.cols + other.cols, p, |i, j| {
            if i < self.rows && j < self.cols {
                self.get(i, j).clone()
            } else if i >= self.rows && j >= self.cols {
                other.get(i - self.rows, j - self.cols).clone()
            } else {
                BSeries::zero(p)
            }
        })
    }

    /// Sub-block of rows `r0..r1` and columns `c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        Self::from_fn(r1 - r0, c1 - c0, self.precision, |i, j| {
            self.get(r0 + i, c0 + j).clone()
        })
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let p = self.precision.min(other.precision);
        Self::from_fn(self.rows, self.cols + other.cols, p, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let p = self.precision.min(other.precision);
        Self::from_fn(self.rows + other.rows, self.cols, p, |i, j| {
            if i < self.rows {
                self.get(i, j).clone()
            } else {
                other.get(i - self.rows, j).clone()
            }
        })
    }

    /// Reorders rows and columns: entry `(i, j)` of the result is `self[perm[i]][perm[j]]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        Self::from_fn(self.rows, self.cols, self.precision, |i, j| {
            self.get(perm[i], perm[j]).clone()
        })
    }

    /// Inverse over the truncated ring; requires an invertible constant term.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let p = self.precision;
        let inv0 = self.constant_term().inverse()?;
        let coeffs: Vec<ScalarMatrix> = (0..p).map(|k| self.coeff_matrix(k)).collect();
        let mut x: Vec<ScalarMatrix> = Vec::with_capacity(p);
        if p > 0 {
            x.push(inv0.clone());
        }
        for k in 1..p {
            let mut acc = ScalarMatrix::zeros(n, n);
            for j in 1..=k {
                if coeffs[j].is_zero() {
                    continue;
                }
                acc = acc.add(&coeffs[j].mul(&x[k - j]));
            }
            x.push(inv0.mul(&acc).scale(&Scalar::from_int(-1)));
        }
        Ok(Self::from_coeff_matrices(&x, n, n, p))
    }

    /// Equality up to the smaller precision.
    pub fn eq_at(&self, other: &Self) -> bool {
        (self.rows, self.cols) == (other.rows, other.cols)
            && self.entries.iter().zip(&other.entries).all(|(a, b)| a.eq_at(b))
    }

    /// Integer power of a square matrix.
    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::identity(self.rows, self.precision);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }
}

impl PartialEq for BMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.eq_at(other)
    }
}

impl fmt::Debug for BMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BMatrix {}x{} mod b^{} [", self.rows, self.cols, self.precision)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_poly_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_unit_matrix() {
        let m = BMatrix::from_int_polys(&[&[&[1, 1], &[0, 2]], &[&[0, 0, 3], &[1]]], 6);
        let m = m.add(&BMatrix::identity(2, 6));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), BMatrix::identity(2, 6));
        assert_eq!(inv.mul(&m), BMatrix::identity(2, 6));
    }

    #[test]
    fn singular_constant_term_is_rejected() {
        let m = BMatrix::from_int_polys(&[&[&[0, 1]]], 4);
        assert_eq!(m.inverse().unwrap_err(), Error::NotInvertible);
    }

    #[test]
    fn kron_mixed_product() {
        let a = BMatrix::from_int_polys(&[&[&[1, 2], &[3]], &[&[0, 1], &[1, 0, 1]]], 5);
        let b = BMatrix::from_int_polys(&[&[&[2], &[0, 0, 1]], &[&[1, 1], &[4]]], 5);
        let c = BMatrix::from_int_polys(&[&[&[1], &[0, 1]], &[&[2], &[1]]], 5);
        let d = BMatrix::from_int_polys(&[&[&[0, 3], &[1]], &[&[1], &[1, 1]]], 5);
        assert_eq!(a.kron(&b).mul(&c.kron(&d)), a.mul(&c).kron(&b.mul(&d)));
    }

    #[test]
    fn b2_derivative_keeps_precision() {
        let m = BMatrix::from_int_polys(&[&[&[1, 1, 1]]], 3);
        let d = m.b2_derivative();
        assert_eq!(d.precision(), 4);
        assert_eq!(d.get(0, 0), &BSeries::from_ints(&[0, 0, 1, 2], 4));
    }
}
