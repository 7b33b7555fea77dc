//! Coordinate-list sparse complex matrices.
//!
//! Storage for the full wreath product, whose order n*m^n makes dense
//! storage infeasible beyond tiny factors. Triples are kept canonical:
//! sorted by (row, col), duplicate positions merged, exact zeros dropped.
//! No epsilon pruning happens here; only entries equal to zero exactly are
//! removed, so near-singular inputs keep their spectra.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tensor::dense::{check_dense_size, DenseMatrix, DENSE_ENTRY_CAP};

/// Default cap on the virtual order (max of rows, cols) of a sparse matrix (2^30).
pub const SPARSE_ORDER_CAP: u64 = 1 << 30;

#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    triples: Vec<(usize, usize, Complex64)>,
}

impl SparseMatrix {
    /// Builds a sparse matrix from (row, col, value) triples with 0-based
    /// indices. Duplicates are summed, exact zeros dropped.
    pub fn new(rows: usize, cols: usize, triples: Vec<(usize, usize, Complex64)>) -> Result<Self> {
        check_sparse_size(rows, cols)?;
        for &(i, j, z) in &triples {
            if i >= rows || j >= cols {
                return Err(Error::IndexOutOfRange(format!(
                    "triple ({i}, {j}) outside {rows} x {cols}"
                )));
            }
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::NonFinite(format!("triple ({i}, {j}): {z}")));
            }
        }
        Ok(Self::canonicalize(rows, cols, triples))
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        check_sparse_size(rows, cols)?;
        Ok(SparseMatrix {
            rows,
            cols,
            triples: Vec::new(),
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        check_sparse_size(n, n)?;
        Ok(SparseMatrix {
            rows: n,
            cols: n,
            triples: (0..n).map(|i| (i, i, Complex64::ONE)).collect(),
        })
    }

    /// Fast path for callers that guarantee sorted, unique, nonzero triples.
    pub(crate) fn new_canonical(
        rows: usize,
        cols: usize,
        triples: Vec<(usize, usize, Complex64)>,
    ) -> Self {
        debug_assert!(triples
            .windows(2)
            .all(|w| (w[0].0, w[0].1) < (w[1].0, w[1].1)));
        debug_assert!(triples.iter().all(|&(_, _, z)| z != Complex64::ZERO));
        SparseMatrix {
            rows,
            cols,
            triples,
        }
    }

    fn canonicalize(rows: usize, cols: usize, mut triples: Vec<(usize, usize, Complex64)>) -> Self {
        triples.sort_unstable_by_key(|&(i, j, _)| (i, j));
        let mut out: Vec<(usize, usize, Complex64)> = Vec::with_capacity(triples.len());
        for (i, j, z) in triples {
            match out.last_mut() {
                Some(last) if last.0 == i && last.1 == j => last.2 += z,
                _ => out.push((i, j, z)),
            }
        }
        out.retain(|&(_, _, z)| z != Complex64::ZERO);
        SparseMatrix {
            rows,
            cols,
            triples: out,
        }
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

    pub fn nnz(&self) -> usize {
        self.triples.len()
    }

    pub fn triples(&self) -> &[(usize, usize, Complex64)] {
        &self.triples
    }

    /// Entry lookup by binary search over the canonical triple list.
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        match self
            .triples
            .binary_search_by_key(&(i, j), |&(r, c, _)| (r, c))
        {
            Ok(pos) => self.triples[pos].2,
            Err(_) => Complex64::ZERO,
        }
    }

    pub fn add(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::dim(format!(
                "{} x {} vs {} x {}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut triples = self.triples.clone();
        triples.extend_from_slice(&other.triples);
        Ok(Self::canonicalize(self.rows, self.cols, triples))
    }

    pub fn scale(&self, factor: Complex64) -> SparseMatrix {
        let triples = self
            .triples
            .iter()
            .map(|&(i, j, z)| (i, j, z * factor))
            .filter(|&(_, _, z)| z != Complex64::ZERO)
            .collect();
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            triples,
        }
    }

    pub fn transpose(&self) -> SparseMatrix {
        let triples = self.triples.iter().map(|&(i, j, z)| (j, i, z)).collect();
        Self::canonicalize(self.cols, self.rows, triples)
    }

    pub fn conj_transpose(&self) -> SparseMatrix {
        let triples = self
            .triples
            .iter()
            .map(|&(i, j, z)| (j, i, z.conj()))
            .collect();
        Self::canonicalize(self.cols, self.rows, triples)
    }

    pub fn trace(&self) -> Result<Complex64> {
        if !self.is_square() {
            return Err(Error::dim(format!(
                "trace of {} x {}",
                self.rows, self.cols
            )));
        }
        Ok(self
            .triples
            .iter()
            .filter(|&&(i, j, _)| i == j)
            .map(|&(_, _, z)| z)
            .sum())
    }

    pub fn row_sums(&self) -> Vec<Complex64> {
        let mut sums = vec![Complex64::ZERO; self.rows];
        for &(i, _, z) in &self.triples {
            sums[i] += z;
        }
        sums
    }

    pub fn max_abs(&self) -> f64 {
        self.triples
            .iter()
            .map(|&(_, _, z)| z.norm())
            .fold(0.0, f64::max)
    }

    /// Largest componentwise distance to `other` over the union of supports.
    pub fn max_abs_diff(&self, other: &SparseMatrix) -> Result<f64> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::dim(format!(
                "{} x {} vs {} x {}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut worst = 0.0f64;
        let (mut a, mut b) = (
            self.triples.iter().peekable(),
            other.triples.iter().peekable(),
        );
        loop {
            let d = match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(&&(_, _, z)), None) => {
                    a.next();
                    z.norm()
                }
                (None, Some(&&(_, _, z))) => {
                    b.next();
                    z.norm()
                }
                (Some(&&(i, j, x)), Some(&&(r, c, y))) => {
                    if (i, j) == (r, c) {
                        a.next();
                        b.next();
                        (x.re - y.re).abs().max((x.im - y.im).abs())
                    } else if (i, j) < (r, c) {
                        a.next();
                        x.norm()
                    } else {
                        b.next();
                        y.norm()
                    }
                }
            };
            worst = worst.max(d);
        }
        Ok(worst)
    }

    pub fn approx_eq(&self, other: &SparseMatrix, tol: f64) -> bool {
        matches!(self.max_abs_diff(other), Ok(d) if d <= tol)
    }

    pub fn to_dense(&self) -> Result<DenseMatrix> {
        check_dense_size(self.rows, self.cols, DENSE_ENTRY_CAP)?;
        let mut out = DenseMatrix::zeros(self.rows, self.cols)?;
        for &(i, j, z) in &self.triples {
            out[(i, j)] = z;
        }
        Ok(out)
    }
}

fn check_sparse_size(rows: usize, cols: usize) -> Result<()> {
    let order = rows.max(cols) as u64;
    if order > SPARSE_ORDER_CAP {
        return Err(Error::cap(format!(
            "sparse virtual order {order} exceeds cap {SPARSE_ORDER_CAP}"
        )));
    }
    Ok(())
}
