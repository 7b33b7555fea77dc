//! Row-major dense complex matrices.
//!
//! `DenseMatrix` is the workhorse for the small factors (`A`, `B`, reduced
//! blocks) and for every desk-scale oracle. Entries are validated to be
//! finite on construction; arithmetic on finite inputs stays finite for the
//! magnitudes this crate works at.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tensor::sparse::SparseMatrix;

/// Default cap on stored entries of a single dense matrix (2^26).
pub const DENSE_ENTRY_CAP: u64 = 1 << 26;

#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

fn check_finite(z: Complex64, what: &str) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(format!("{what}: {z}")))
    }
}

pub(crate) fn check_dense_size(rows: usize, cols: usize, cap: u64) -> Result<()> {
    let total = (rows as u64)
        .checked_mul(cols as u64)
        .ok_or_else(|| Error::cap(format!("{rows} x {cols} overflows the index range")))?;
    if total > cap {
        return Err(Error::cap(format!(
            "dense matrix {rows} x {cols} has {total} entries, cap is {cap}"
        )));
    }
    Ok(())
}

impl DenseMatrix {
    /// Builds a matrix from row-major entries, validating length, size cap
    /// and finiteness.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        check_dense_size(rows, cols, DENSE_ENTRY_CAP)?;
        if entries.len() != rows * cols {
            return Err(Error::dim(format!(
                "{rows} x {cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        for &z in &entries {
            check_finite(z, "matrix entry")?;
        }
        Ok(DenseMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        check_dense_size(rows, cols, DENSE_ENTRY_CAP)?;
        Ok(DenseMatrix {
            rows,
            cols,
            entries: vec![Complex64::ZERO; rows * cols],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m[(i, i)] = Complex64::ONE;
        }
        Ok(m)
    }

    /// Uniform matrix of order `n` (all entries one).
    pub fn uniform(n: usize) -> Result<Self> {
        check_dense_size(n, n, DENSE_ENTRY_CAP)?;
        Ok(DenseMatrix {
            rows: n,
            cols: n,
            entries: vec![Complex64::ONE; n * n],
        })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Complex64,
    ) -> Result<Self> {
        let mut m = Self::zeros(rows, cols)?;
        for i in 0..rows {
            for j in 0..cols {
                let z = f(i, j);
                check_finite(z, "matrix entry")?;
                m[(i, j)] = z;
            }
        }
        Ok(m)
    }

    /// Convenience constructor from real row slices.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::dim("ragged rows"));
        }
        let entries = rows
            .iter()
            .flat_map(|row| row.iter().map(|&x| Complex64::new(x, 0.0)))
            .collect();
        Self::new(r, c, entries)
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::dim("ragged rows"));
        }
        Self::new(r, c, rows.iter().flatten().copied().collect())
    }

    /// Diagonal matrix from the given values.
    pub fn from_diagonal(diag: &[Complex64]) -> Result<Self> {
        let n = diag.len();
        let mut m = Self::zeros(n, n)?;
        for (i, &z) in diag.iter().enumerate() {
            check_finite(z, "diagonal entry")?;
            m[(i, i)] = z;
        }
        Ok(m)
    }

    /// Scalar matrix h*I_n.
    pub fn scalar(n: usize, h: Complex64) -> Result<Self> {
        Self::from_diagonal(&vec![h; n])
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

    /// Order of a square matrix; errors on rectangular input.
    pub fn order(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::dim(format!(
                "expected square matrix, got {} x {}",
                self.rows, self.cols
            )))
        }
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self[(i, j)]
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)])
            .collect()
    }

    pub fn add(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &DenseMatrix,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<DenseMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::dim(format!(
                "{} x {} vs {} x {}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn scale(&self, factor: Complex64) -> DenseMatrix {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&z| z * factor).collect(),
        }
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(Error::dim(format!(
                "cannot multiply {} x {} by {} x {}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = DenseMatrix::zeros(self.rows, other.cols)?;
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut out = DenseMatrix {
            rows: self.cols,
            cols: self.rows,
            entries: vec![Complex64::ZERO; self.entries.len()],
        };
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn conj_transpose(&self) -> DenseMatrix {
        let mut out = self.transpose();
        for z in &mut out.entries {
            *z = z.conj();
        }
        out
    }

    pub fn trace(&self) -> Result<Complex64> {
        let n = self.order()?;
        Ok((0..n).map(|i| self[(i, i)]).sum())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest componentwise distance to `other`; errors on shape mismatch.
    pub fn max_abs_diff(&self, other: &DenseMatrix) -> Result<f64> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::dim(format!(
                "{} x {} vs {} x {}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a.re - b.re).abs().max((a.im - b.im).abs()))
            .fold(0.0, f64::max))
    }

    pub fn approx_eq(&self, other: &DenseMatrix, tol: f64) -> bool {
        matches!(self.max_abs_diff(other), Ok(d) if d <= tol)
    }

    /// Sparse view of this matrix; entries that are exactly zero are dropped.
    pub fn to_sparse(&self) -> SparseMatrix {
        let triples = (0..self.rows)
            .flat_map(|i| (0..self.cols).map(move |j| (i, j)))
            .filter_map(|(i, j)| {
                let z = self[(i, j)];
                (z != Complex64::ZERO).then_some((i, j, z))
            })
            .collect();
        SparseMatrix::new_canonical(self.rows, self.cols, triples)
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

impl std::fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "DenseMatrix {} x {} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:.4}{:+.4}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn construction_validates_shape_and_finiteness() {
        assert!(DenseMatrix::new(2, 2, vec![Complex64::ZERO; 3]).is_err());
        assert!(DenseMatrix::new(1, 1, vec![c(f64::NAN, 0.0)]).is_err());
        assert!(DenseMatrix::new(1, 1, vec![c(0.0, f64::INFINITY)]).is_err());
        assert!(DenseMatrix::new(2, 2, vec![Complex64::ONE; 4]).is_ok());
    }

    #[test]
    fn entry_cap_is_enforced() {
        let err = DenseMatrix::zeros(1 << 14, 1 << 14).unwrap_err();
        assert!(matches!(err, Error::CapExceeded(_)));
    }

    #[test]
    fn trace_of_identity_is_order() {
        for n in [1, 2, 5] {
            let id = DenseMatrix::identity(n).unwrap();
            assert_eq!(id.trace().unwrap(), c(n as f64, 0.0));
        }
    }

    #[test]
    fn matmul_against_hand_computed_product() {
        let a = DenseMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]).unwrap();
        let b = DenseMatrix::from_real_rows(&[&[5.0, 6.0], &[7.0, 8.0]]).unwrap();
        let ab = a.matmul(&b).unwrap();
        let want = DenseMatrix::from_real_rows(&[&[19.0, 22.0], &[43.0, 50.0]]).unwrap();
        assert_eq!(ab, want);
    }

    #[test]
    fn conj_transpose_conjugates() {
        let m = DenseMatrix::new(1, 2, vec![c(1.0, 2.0), c(3.0, -4.0)]).unwrap();
        let h = m.conj_transpose();
        assert_eq!(h.rows(), 2);
        assert_eq!(h[(0, 0)], c(1.0, -2.0));
        assert_eq!(h[(1, 0)], c(3.0, 4.0));
    }

    #[test]
    fn rectangular_trace_is_an_error() {
        let m = DenseMatrix::zeros(2, 3).unwrap();
        assert!(m.trace().is_err());
    }
}
