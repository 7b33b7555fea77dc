//! Kronecker products, canonical basis matrices and the vectorization
//! operator, over dense and sparse storage.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub mod dense;
pub mod sparse;

pub use dense::{DenseMatrix, DENSE_ENTRY_CAP};
pub use sparse::{SparseMatrix, SPARSE_ORDER_CAP};

impl DenseMatrix {
    /// Kronecker product `self (x) other`: the block matrix whose (i, j)
    /// block is `self[i][j] * other`.
    pub fn kron(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        let (p, q) = (other.rows(), other.cols());
        let rows = checked_dim(self.rows(), p)?;
        let cols = checked_dim(self.cols(), q)?;
        let mut out = DenseMatrix::zeros(rows, cols)?;
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                let a = self[(i, j)];
                if a == Complex64::ZERO {
                    continue;
                }
                for h in 0..p {
                    for k in 0..q {
                        out[(i * p + h, j * q + k)] = a * other[(h, k)];
                    }
                }
            }
        }
        Ok(out)
    }

    /// k-fold Kronecker power; the zeroth power is the 1 x 1 matrix of one.
    pub fn kron_power(&self, k: usize) -> Result<DenseMatrix> {
        let mut out = DenseMatrix::identity(1)?;
        for _ in 0..k {
            out = out.kron(self)?;
        }
        Ok(out)
    }
}

impl SparseMatrix {
    pub fn kron(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        let (p, q) = (other.rows(), other.cols());
        let rows = checked_dim(self.rows(), p)?;
        let cols = checked_dim(self.cols(), q)?;
        let mut triples = Vec::with_capacity(self.nnz() * other.nnz());
        for &(i, j, a) in self.triples() {
            for &(h, k, b) in other.triples() {
                triples.push((i * p + h, j * q + k, a * b));
            }
        }
        SparseMatrix::new(rows, cols, triples)
    }

    pub fn kron_power(&self, k: usize) -> Result<SparseMatrix> {
        let mut out = SparseMatrix::identity(1)?;
        for _ in 0..k {
            out = out.kron(self)?;
        }
        Ok(out)
    }
}

fn checked_dim(a: usize, b: usize) -> Result<usize> {
    a.checked_mul(b).ok_or_else(|| {
        Error::cap(format!(
            "Kronecker dimension {a} * {b} overflows the index range"
        ))
    })
}

/// Column-stacking operator: returns the (rows*cols) x 1 column vector whose
/// entry (j*rows + i) is `m[i][j]`.
pub fn vectorize(m: &DenseMatrix) -> Result<DenseMatrix> {
    let (r, c) = (m.rows(), m.cols());
    let mut entries = Vec::with_capacity(r * c);
    for j in 0..c {
        for i in 0..r {
            entries.push(m[(i, j)]);
        }
    }
    DenseMatrix::new(r * c, 1, entries)
}

/// Inverse of [`vectorize`]: reshapes a column vector back into an
/// `rows x cols` matrix, column by column.
pub fn unvectorize(v: &DenseMatrix, rows: usize, cols: usize) -> Result<DenseMatrix> {
    if v.cols() != 1 || v.rows() != rows * cols {
        return Err(Error::dim(format!(
            "cannot reshape {} x {} vector into {rows} x {cols}",
            v.rows(),
            v.cols()
        )));
    }
    DenseMatrix::from_fn(rows, cols, |i, j| v[(j * rows + i, 0)])
}

/// The canonical 0/1 matrices used throughout: diagonal projectors,
/// matrix units, cyclic shifts, the uniform matrix and the identity.
///
/// Projector and unit indices are 1-based to match the usual notation
/// (`C_2` of order 3 is diag(0, 1, 0)); cyclic shifts are indexed 0..m-1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CanonicalBasis {
    /// `C_i`: single 1 at diagonal position (i, i), 1-based.
    Projector { order: usize, index: usize },
    /// `E_ij`: single 1 at position (i, j), 1-based.
    Unit {
        order: usize,
        row: usize,
        col: usize,
    },
    /// `Circ_i`: entry (h, k) is 1 iff k - h = i (mod m).
    CyclicShift { order: usize, shift: usize },
    /// `J_m`: all entries 1.
    Uniform { order: usize },
    /// `I_n`.
    Identity { order: usize },
}

impl CanonicalBasis {
    pub fn matrix(&self) -> Result<DenseMatrix> {
        match *self {
            CanonicalBasis::Projector { order, index } => {
                check_one_based(index, order, "projector index")?;
                let mut m = DenseMatrix::zeros(order, order)?;
                m[(index - 1, index - 1)] = Complex64::ONE;
                Ok(m)
            }
            CanonicalBasis::Unit { order, row, col } => {
                check_one_based(row, order, "unit row")?;
                check_one_based(col, order, "unit col")?;
                let mut m = DenseMatrix::zeros(order, order)?;
                m[(row - 1, col - 1)] = Complex64::ONE;
                Ok(m)
            }
            CanonicalBasis::CyclicShift { order, shift } => {
                if shift >= order {
                    return Err(Error::IndexOutOfRange(format!(
                        "cyclic shift {shift} not below order {order}"
                    )));
                }
                DenseMatrix::from_fn(order, order, |h, k| {
                    if (k + order - h) % order == shift {
                        Complex64::ONE
                    } else {
                        Complex64::ZERO
                    }
                })
            }
            CanonicalBasis::Uniform { order } => DenseMatrix::uniform(order),
            CanonicalBasis::Identity { order } => DenseMatrix::identity(order),
        }
    }
}

/// Shorthand for the diagonal projector `C_i` of the given order (1-based).
pub fn projector(order: usize, index: usize) -> Result<DenseMatrix> {
    CanonicalBasis::Projector { order, index }.matrix()
}

/// Shorthand for the cyclic shift `Circ_i` of the given order (0-based shift).
pub fn cyclic_shift(order: usize, shift: usize) -> Result<DenseMatrix> {
    CanonicalBasis::CyclicShift { order, shift }.matrix()
}

fn check_one_based(index: usize, order: usize, what: &str) -> Result<()> {
    if index == 0 || index > order {
        return Err(Error::IndexOutOfRange(format!(
            "{what} {index} not in 1..={order}"
        )));
    }
    Ok(())
}
