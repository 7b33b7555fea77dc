//! The wreath product of matrices and its block anatomy.
//!
//! For square `A` of order n and `B` of order m, the wreath product is the
//! square matrix of order n*m^n
//!
//! ```text
//! A wr B = I_m^(x)n (x) A  +  sum_{i=1..n} I_m^(x)(i-1) (x) B (x) I_m^(x)(n-i) (x) C_i
//! ```
//!
//! where `C_i` is the diagonal projector with a single 1 at (i, i). Viewed
//! as an m^n x m^n grid of order-n blocks, the entry at block (P, Q) is
//! determined by the base-m digit tuples of P-1 and Q-1 (most significant
//! digit first):
//!
//! * equal tuples give the diagonal block `A + sum_h b_{f_h+1, f_h+1} C_h`,
//! * tuples differing in exactly one position k give `b_{f_k+1, g_k+1} C_k`,
//! * tuples differing in two or more positions give the zero block.
//!
//! Construction emits nonzeros straight from this classification; nothing
//! of order n*m^n is ever materialized as a dense intermediate.

use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::tensor::{DenseMatrix, SparseMatrix, SPARSE_ORDER_CAP};

/// Default absolute entrywise tolerance for the kernel and commutativity
/// predicates.
pub const PREDICATE_TOL: f64 = 1e-10;

/// Order n*m^n of the wreath product of factors of orders n and m, checked
/// against the sparse order cap.
pub fn wreath_order(n: usize, m: usize) -> Result<u64> {
    if n == 0 || m == 0 {
        return Err(Error::dim("wreath factors must have order at least 1"));
    }
    let mut order = n as u64;
    for _ in 0..n {
        order = order
            .checked_mul(m as u64)
            .ok_or_else(|| Error::cap(format!("wreath order n*m^n overflows for n={n}, m={m}")))?;
    }
    if order > SPARSE_ORDER_CAP {
        return Err(Error::cap(format!(
            "wreath order {order} exceeds cap {SPARSE_ORDER_CAP}"
        )));
    }
    Ok(order)
}

/// Bijection between a 1-based flat block index p in 1..=m^n and its base-m
/// digit tuple (f_1, ..., f_n), most significant digit first; the tuples in
/// flat order are exactly the lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WreathIndex {
    p: usize,
    digits: Vec<usize>,
    radix: usize,
}

impl WreathIndex {
    pub fn from_flat(p: usize, n: usize, m: usize) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::dim("n and m must be positive"));
        }
        let count = checked_pow(m, n)?;
        if p == 0 || p > count {
            return Err(Error::IndexOutOfRange(format!(
                "p = {p} not in 1..={count}"
            )));
        }
        let mut digits = vec![0usize; n];
        let mut rest = p - 1;
        for slot in digits.iter_mut().rev() {
            *slot = rest % m;
            rest /= m;
        }
        Ok(WreathIndex {
            p,
            digits,
            radix: m,
        })
    }

    pub fn from_digits(digits: Vec<usize>, m: usize) -> Result<Self> {
        if digits.is_empty() || m == 0 {
            return Err(Error::dim(
                "digit tuple must be nonempty over a positive radix",
            ));
        }
        checked_pow(m, digits.len())?;
        let mut p = 0usize;
        for &d in &digits {
            if d >= m {
                return Err(Error::IndexOutOfRange(format!("digit {d} not below {m}")));
            }
            p = p * m + d;
        }
        Ok(WreathIndex {
            p: p + 1,
            digits,
            radix: m,
        })
    }

    /// 1-based flat index, p = 1 + sum_h f_h m^(n-h).
    pub fn flat(&self) -> usize {
        self.p
    }

    pub fn digits(&self) -> &[usize] {
        &self.digits
    }

    pub fn radix(&self) -> usize {
        self.radix
    }

    /// All m^n indices in lexicographic (= flat) order.
    pub fn iter_all(n: usize, m: usize) -> Result<impl Iterator<Item = WreathIndex>> {
        if n == 0 || m == 0 {
            return Err(Error::dim("n and m must be positive"));
        }
        let count = checked_pow(m, n)?;
        let mut digits = vec![0usize; n];
        let mut emitted = 0usize;
        Ok(std::iter::from_fn(move || {
            if emitted == count {
                return None;
            }
            let idx = WreathIndex {
                p: emitted + 1,
                digits: digits.clone(),
                radix: m,
            };
            emitted += 1;
            for slot in digits.iter_mut().rev() {
                *slot += 1;
                if *slot < m {
                    break;
                }
                *slot = 0;
            }
            Some(idx)
        }))
    }
}

pub(crate) fn checked_pow(m: usize, n: usize) -> Result<usize> {
    let mut out = 1usize;
    for _ in 0..n {
        out = out
            .checked_mul(m)
            .ok_or_else(|| Error::cap(format!("m^n overflows for m={m}, n={n}")))?;
    }
    Ok(out)
}

/// Classification of one order-n block of the wreath product. Positions and
/// the (i, j, k) parameters are 1-based, matching the usual statement of the
/// block layout; digit values are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlockKind {
    Zero,
    /// `b_ij C_k` with i != j.
    OffDiagonal {
        i: usize,
        j: usize,
        k: usize,
    },
    /// `A + sum_h b_{f_h+1, f_h+1} C_h` for this digit tuple.
    Diagonal {
        digits: Vec<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDescriptor {
    pub block_row: usize,
    pub block_col: usize,
    pub kind: BlockKind,
}

impl BlockDescriptor {
    /// Coefficient b_ij of an off-diagonal block; `None` for the other kinds.
    pub fn coefficient(&self, b: &DenseMatrix) -> Option<Complex64> {
        match &self.kind {
            BlockKind::OffDiagonal { i, j, .. } => Some(b[(i - 1, j - 1)]),
            _ => None,
        }
    }

    /// Materializes this block as an order-n dense matrix.
    pub fn materialize(&self, a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
        let n = a.order()?;
        b.order()?;
        match &self.kind {
            BlockKind::Zero => DenseMatrix::zeros(n, n),
            BlockKind::OffDiagonal { i, j, k } => {
                let mut block = DenseMatrix::zeros(n, n)?;
                block[(k - 1, k - 1)] = b[(i - 1, j - 1)];
                Ok(block)
            }
            BlockKind::Diagonal { digits } => {
                let idx = WreathIndex::from_digits(digits.clone(), b.order()?)?;
                diagonal_block(&idx, a, b)
            }
        }
    }
}

impl Serialize for BlockDescriptor {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct OffParams {
            i: usize,
            j: usize,
            k: usize,
        }
        #[derive(Serialize)]
        struct DiagParams<'a> {
            digits: &'a [usize],
        }
        #[derive(Serialize)]
        struct NoParams {}

        let mut st = serializer.serialize_struct("BlockDescriptor", 4)?;
        match &self.kind {
            BlockKind::Zero => st.serialize_field("kind", "zero")?,
            BlockKind::OffDiagonal { .. } => st.serialize_field("kind", "off_diagonal")?,
            BlockKind::Diagonal { .. } => st.serialize_field("kind", "diagonal")?,
        }
        st.serialize_field("block_row", &self.block_row)?;
        st.serialize_field("block_col", &self.block_col)?;
        match &self.kind {
            BlockKind::Zero => st.serialize_field("params", &NoParams {})?,
            BlockKind::OffDiagonal { i, j, k } => st.serialize_field(
                "params",
                &OffParams {
                    i: *i,
                    j: *j,
                    k: *k,
                },
            )?,
            BlockKind::Diagonal { digits } => {
                st.serialize_field("params", &DiagParams { digits })?
            }
        }
        st.end()
    }
}

/// Classifies the order-n block at 1-based block coordinates of `A wr B`,
/// by index arithmetic alone (entries of `A` are never consulted, and `B`
/// only through the reported (i, j) parameters).
pub fn block_at(n: usize, m: usize, block_row: usize, block_col: usize) -> Result<BlockDescriptor> {
    if n == 0 || m == 0 {
        return Err(Error::dim("n and m must be positive"));
    }
    let count = checked_pow(m, n)?;
    for (what, v) in [("block_row", block_row), ("block_col", block_col)] {
        if v == 0 || v > count {
            return Err(Error::IndexOutOfRange(format!(
                "{what} = {v} not in 1..={count}"
            )));
        }
    }
    let row = WreathIndex::from_flat(block_row, n, m)?;
    let col = WreathIndex::from_flat(block_col, n, m)?;
    let mut differing = row
        .digits()
        .iter()
        .zip(col.digits())
        .enumerate()
        .filter(|(_, (f, g))| f != g);
    let kind = match (differing.next(), differing.next()) {
        (None, _) => BlockKind::Diagonal {
            digits: row.digits().to_vec(),
        },
        (Some((pos, (&f, &g))), None) => BlockKind::OffDiagonal {
            i: f + 1,
            j: g + 1,
            k: pos + 1,
        },
        _ => BlockKind::Zero,
    };
    Ok(BlockDescriptor {
        block_row,
        block_col,
        kind,
    })
}

/// The order-n matrix occupying diagonal block p: `A` plus the digit-driven
/// diagonal correction.
pub fn diagonal_block(idx: &WreathIndex, a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    let n = a.order()?;
    let m = b.order()?;
    if idx.digits().len() != n || idx.radix() != m {
        return Err(Error::dim(format!(
            "index over {} digits of radix {}, factors have n={n}, m={m}",
            idx.digits().len(),
            idx.radix()
        )));
    }
    let mut block = a.clone();
    for (h, &digit) in idx.digits().iter().enumerate() {
        block[(h, h)] += b[(digit, digit)];
    }
    Ok(block)
}

/// Builds `A wr B` as a sparse matrix of order n*m^n by direct index
/// arithmetic. The degenerate orders go through their closed forms:
/// `(a) wr B = B + a I_m` and `A wr (b) = A + b I_n`.
pub fn wreath_product(a: &DenseMatrix, b: &DenseMatrix) -> Result<SparseMatrix> {
    let n = a.order()?;
    let m = b.order()?;
    wreath_order(n, m)?;
    if m == 1 {
        return Ok(a.add(&DenseMatrix::scalar(n, b[(0, 0)])?)?.to_sparse());
    }
    if n == 1 {
        return Ok(b.add(&DenseMatrix::scalar(m, a[(0, 0)])?)?.to_sparse());
    }

    let blocks = checked_pow(m, n)?;
    let order = n * blocks;
    let mut triples = Vec::with_capacity(blocks * (n * n + n * (m - 1)) / 2);

    // strides of each digit position in the flat block index
    let mut stride = vec![1usize; n];
    for k in (0..n - 1).rev() {
        stride[k] = stride[k + 1] * m;
    }

    let mut digits = vec![0usize; n];
    for p in 0..blocks {
        let row0 = p * n;
        // diagonal block: A plus the digit-driven diagonal correction
        for r in 0..n {
            for c in 0..n {
                let mut z = a[(r, c)];
                if r == c {
                    z += b[(digits[r], digits[r])];
                }
                if z != Complex64::ZERO {
                    triples.push((row0 + r, row0 + c, z));
                }
            }
        }
        // off-diagonal blocks b_{f_k+1, alt+1} C_{k+1} toward every block
        // whose digits differ from ours exactly at position k
        for k in 0..n {
            let fk = digits[k];
            for alt in 0..m {
                if alt == fk {
                    continue;
                }
                let z = b[(fk, alt)];
                if z == Complex64::ZERO {
                    continue;
                }
                let q = p - fk * stride[k] + alt * stride[k];
                debug_assert!(q < blocks && q != p);
                triples.push((row0 + k, q * n + k, z));
            }
        }
        for slot in digits.iter_mut().rev() {
            *slot += 1;
            if *slot < m {
                break;
            }
            *slot = 0;
        }
    }
    SparseMatrix::new(order, order, triples)
}

/// Closed-form trace: m^(n-1) (m tr A + n tr B).
pub fn wreath_trace(a: &DenseMatrix, b: &DenseMatrix) -> Result<Complex64> {
    let n = a.order()?;
    let m = b.order()?;
    if n == 0 || m == 0 {
        return Err(Error::dim("wreath factors must have order at least 1"));
    }
    let factor = (m as f64).powi(n as i32 - 1);
    Ok((a.trace()? * m as f64 + b.trace()? * n as f64) * factor)
}

/// The linear map F(A, B) = A wr B.
pub fn f_map(a: &DenseMatrix, b: &DenseMatrix) -> Result<SparseMatrix> {
    wreath_product(a, b)
}

/// Whether (a, b) lies in the kernel of F, i.e. a = h I_n and b = -h I_m for
/// a common scalar h, entrywise within `tol`. The candidate h is the least
/// squares fit over both diagonals.
pub fn f_kernel_member(a: &DenseMatrix, b: &DenseMatrix, tol: f64) -> bool {
    let (Ok(n), Ok(m)) = (a.order(), b.order()) else {
        return false;
    };
    if n == 0 || m == 0 {
        return false;
    }
    let diag_sum_a: Complex64 = a.diagonal().into_iter().sum();
    let diag_sum_b: Complex64 = b.diagonal().into_iter().sum();
    let h = (diag_sum_a - diag_sum_b) / (n + m) as f64;
    is_scalar_matrix(a, h, tol) && is_scalar_matrix(b, -h, tol)
}

fn is_scalar_matrix(m: &DenseMatrix, h: Complex64, tol: f64) -> bool {
    let n = m.rows();
    for i in 0..n {
        for j in 0..n {
            let want = if i == j { h } else { Complex64::ZERO };
            let d = m[(i, j)] - want;
            if d.re.abs() > tol || d.im.abs() > tol {
                return false;
            }
        }
    }
    true
}

/// Commutativity criterion: `a wr b = b wr a` iff the factors have equal
/// order and differ by a scalar multiple of the identity (within `tol`).
pub fn wreath_commute(a: &DenseMatrix, b: &DenseMatrix, tol: f64) -> bool {
    let (Ok(n), Ok(m)) = (a.order(), b.order()) else {
        return false;
    };
    if n != m || n == 0 {
        return false;
    }
    let Ok(d) = a.sub(b) else {
        return false;
    };
    let h = d.diagonal().into_iter().sum::<Complex64>() / n as f64;
    is_scalar_matrix(&d, h, tol)
}
