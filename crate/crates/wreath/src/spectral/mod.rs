//! Spectrum of `A wr B` for circulant `B`.
//!
//! A circulant second factor makes the wreath product block circulant at
//! every level of its iterated block structure, so its spectrum of order
//! n*m^n collapses to m^n eigenproblems of order n: for each tuple
//! (i_1, ..., i_n) over {0..m-1} the reduced block is
//!
//! ```text
//! A + diag(sigma(i_1), ..., sigma(i_n)),   sigma(k) = sum_i b_i rho^(i k),
//! ```
//!
//! with rho = exp(2 pi i / m); the sigma values are the DFT of the first
//! row of `B`, i.e. exactly the eigenvalues of `B`. The multiset union of
//! the reduced spectra (multiplicities add) is the spectrum of `A wr B`.
//!
//! Closed forms are provided for order-2 `A` (quadratic roots per tuple)
//! and for diagonal `A` with uniform `B` (spectrum and determinant), plus
//! the dense-eigensolver oracle everything is tested against.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg;
use crate::tensor::DenseMatrix;
use crate::wreath::checked_pow;

mod multiset;

pub use multiset::{EigenMultiset, MultisetDiff, CLUSTER_TOL};

/// Default cap on the number of reduced-block tuples m^n (2^24).
pub const ENUM_TUPLE_CAP: u64 = 1 << 24;

/// Default cap on the order accepted by the dense eigensolver oracle.
pub const DENSE_EIG_CAP: usize = 1024;

/// A circulant matrix, stored as its first row (b_0, ..., b_{m-1}); row h
/// holds b_{(k-h) mod m} at column k.
#[derive(Clone, Debug, PartialEq)]
pub struct CirculantSpec {
    coeffs: Vec<Complex64>,
}

impl CirculantSpec {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::dim("circulant needs at least one coefficient"));
        }
        for &z in &coeffs {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::NonFinite(format!("circulant coefficient {z}")));
            }
        }
        Ok(CirculantSpec { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Materializes the circulant as a dense matrix.
    pub fn matrix(&self) -> Result<DenseMatrix> {
        let m = self.order();
        DenseMatrix::from_fn(m, m, |h, k| self.coeffs[(k + m - h) % m])
    }

    /// The symbol sigma(k) = sum_i b_i rho^(i k) with rho = exp(2 pi i / m).
    /// Each power is evaluated as exp(2 pi i (i k mod m) / m) rather than by
    /// repeated multiplication, keeping the phase error per term at a single
    /// rounding.
    pub fn symbol(&self, k: usize) -> Result<Complex64> {
        let m = self.order();
        if k >= m {
            return Err(Error::IndexOutOfRange(format!(
                "symbol index {k} not below {m}"
            )));
        }
        Ok(self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &b)| b * root_of_unity(m, i * k))
            .sum())
    }

    /// All m symbols; these are exactly the eigenvalues of the circulant.
    pub fn symbols(&self) -> Vec<Complex64> {
        (0..self.order())
            .map(|k| self.symbol(k).expect("k < m"))
            .collect()
    }
}

/// exp(2 pi i e / m), with the exponent reduced mod m first.
fn root_of_unity(m: usize, e: usize) -> Complex64 {
    let r = e % m;
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * r as f64 / m as f64)
}

fn circulant_scan(b: &DenseMatrix, tol: f64) -> std::result::Result<CirculantSpec, (usize, usize)> {
    let m = match b.order() {
        Ok(m) if m > 0 => m,
        _ => return Err((0, 0)),
    };
    let coeffs: Vec<Complex64> = (0..m).map(|k| b[(0, k)]).collect();
    for h in 0..m {
        for k in 0..m {
            let want = coeffs[(k + m - h) % m];
            let d = b[(h, k)] - want;
            if d.re.abs() > tol || d.im.abs() > tol {
                return Err((h, k));
            }
        }
    }
    Ok(CirculantSpec { coeffs })
}

/// Recognizes a circulant matrix within `tol` and returns its first row.
pub fn is_circulant(b: &DenseMatrix, tol: f64) -> Option<CirculantSpec> {
    circulant_scan(b, tol).ok()
}

/// First (row, col) position at which the matrix deviates from the
/// circulant pattern of its first row; `None` when it is circulant.
pub fn circulant_defect(b: &DenseMatrix, tol: f64) -> Option<(usize, usize)> {
    circulant_scan(b, tol).err()
}

/// Recognizes h * J_m (every entry equal) and returns h.
pub fn is_uniform(b: &DenseMatrix, tol: f64) -> Option<Complex64> {
    let m = b.order().ok()?;
    if m == 0 {
        return None;
    }
    let h = b[(0, 0)];
    for i in 0..m {
        for j in 0..m {
            let d = b[(i, j)] - h;
            if d.re.abs() > tol || d.im.abs() > tol {
                return None;
            }
        }
    }
    Some(h)
}

/// One reduced block: the tuple it belongs to and the order-n matrix
/// `A + diag(sigma(i_1), ..., sigma(i_n))`.
#[derive(Clone, Debug)]
pub struct ReducedBlock {
    pub tuple: Vec<usize>,
    pub matrix: DenseMatrix,
}

/// Streams all m^n reduced blocks in lexicographic tuple order.
pub struct ReducedBlocks {
    a: DenseMatrix,
    symbols: Vec<Complex64>,
    digits: Vec<usize>,
    remaining: usize,
}

impl ReducedBlocks {
    /// Number of blocks left to yield.
    pub fn len(&self) -> usize {
        self.remaining
    }

    pub fn is_empty(&self) -> bool {
        self.remaining == 0
    }
}

impl Iterator for ReducedBlocks {
    type Item = ReducedBlock;

    fn next(&mut self) -> Option<ReducedBlock> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let mut matrix = self.a.clone();
        for (t, &digit) in self.digits.iter().enumerate() {
            matrix[(t, t)] += self.symbols[digit];
        }
        let tuple = self.digits.clone();
        let m = self.symbols.len();
        for slot in self.digits.iter_mut().rev() {
            *slot += 1;
            if *slot < m {
                break;
            }
            *slot = 0;
        }
        Some(ReducedBlock { tuple, matrix })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining, Some(self.remaining))
    }
}

pub fn reduced_blocks(a: &DenseMatrix, spec: &CirculantSpec) -> Result<ReducedBlocks> {
    let n = a.order()?;
    if n == 0 {
        return Err(Error::dim("first factor must have order at least 1"));
    }
    let count = tuple_count(spec.order(), n)?;
    Ok(ReducedBlocks {
        a: a.clone(),
        symbols: spec.symbols(),
        digits: vec![0; n],
        remaining: count,
    })
}

fn tuple_count(m: usize, n: usize) -> Result<usize> {
    let count = checked_pow(m, n)?;
    if count as u64 > ENUM_TUPLE_CAP {
        return Err(Error::cap(format!(
            "m^n = {count} reduced blocks exceed cap {ENUM_TUPLE_CAP}"
        )));
    }
    Ok(count)
}

/// Spectrum of `A wr B` through the reduction: the multiset union of the
/// eigenvalues of all m^n reduced blocks, clustered at `tol`. Per-block
/// eigensolves run in parallel; aggregation order is fixed by tuple order,
/// so the result is deterministic.
pub fn spectrum_reduced(a: &DenseMatrix, spec: &CirculantSpec, tol: f64) -> Result<EigenMultiset> {
    let n = a.order()?;
    if n == 0 {
        return Err(Error::dim("first factor must have order at least 1"));
    }
    let count = tuple_count(spec.order(), n)?;
    let symbols = spec.symbols();
    let m = spec.order();
    let per_block: Vec<Vec<Complex64>> = (0..count)
        .into_par_iter()
        .map(|flat| {
            let mut block = a.clone();
            let mut rest = flat;
            for t in (0..n).rev() {
                block[(t, t)] += symbols[rest % m];
                rest /= m;
            }
            linalg::eigenvalues(&block).map_err(|source| {
                let mut tuple = vec![0usize; n];
                let mut rest = flat;
                for t in (0..n).rev() {
                    tuple[t] = rest % m;
                    rest /= m;
                }
                Error::BlockEig {
                    tuple,
                    source: Box::new(source),
                }
            })
        })
        .collect::<Result<_>>()?;
    let mut values = Vec::with_capacity(count * n);
    for eigs in per_block {
        values.extend(eigs);
    }
    Ok(EigenMultiset::from_values(&values, tol))
}

/// Order-2 closed form: for each tuple (i_1, i_2) the two quadratic roots
/// of the reduced block, aggregated over all m^2 tuples.
pub fn spectrum_2x2_closed_form(
    a: &DenseMatrix,
    spec: &CirculantSpec,
    tol: f64,
) -> Result<EigenMultiset> {
    if a.order()? != 2 {
        return Err(Error::dim(format!(
            "closed form needs order 2, got {}",
            a.rows()
        )));
    }
    let symbols = spec.symbols();
    let (pa, pb, pc, pd) = (a[(0, 0)], a[(0, 1)], a[(1, 0)], a[(1, 1)]);
    let mut values = Vec::with_capacity(2 * symbols.len() * symbols.len());
    for &s1 in &symbols {
        for &s2 in &symbols {
            let mean = (s1 + s2 + pa + pd) * 0.5;
            let diff = s1 - s2 + pa - pd;
            let disc = (diff * diff + pb * pc * 4.0).sqrt() * 0.5;
            values.push(mean + disc);
            values.push(mean - disc);
        }
    }
    Ok(EigenMultiset::from_values(&values, tol))
}

/// A tuple (i_1, i_2) together with the two roots of its reduced block.
pub type TupleSpectrum = ((usize, usize), [Complex64; 2]);

/// Per-tuple spectra of the order-2 closed form, keyed by (i_1, i_2).
pub fn spectrum_2x2_by_tuple(a: &DenseMatrix, spec: &CirculantSpec) -> Result<Vec<TupleSpectrum>> {
    if a.order()? != 2 {
        return Err(Error::dim(format!(
            "closed form needs order 2, got {}",
            a.rows()
        )));
    }
    let symbols = spec.symbols();
    let (pa, pb, pc, pd) = (a[(0, 0)], a[(0, 1)], a[(1, 0)], a[(1, 1)]);
    let mut out = Vec::with_capacity(symbols.len() * symbols.len());
    for (i1, &s1) in symbols.iter().enumerate() {
        for (i2, &s2) in symbols.iter().enumerate() {
            let mean = (s1 + s2 + pa + pd) * 0.5;
            let diff = s1 - s2 + pa - pd;
            let disc = (diff * diff + pb * pc * 4.0).sqrt() * 0.5;
            out.push(((i1, i2), [mean + disc, mean - disc]));
        }
    }
    Ok(out)
}

/// Index at which the diagonal/uniform closed forms degenerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SingularReason {
    /// a_k = 0 at this 1-based index.
    ZeroEntry,
    /// a_k = -m h at this 1-based index.
    MinusMh,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingularWitness {
    /// 1-based diagonal index k.
    pub index: usize,
    pub reason: SingularReason,
    pub value: Complex64,
}

/// Spectrum of `diag(a_1..a_n) wr (h J_m)`: each a_k + m h with
/// multiplicity m^(n-1) and each a_k with multiplicity (m-1) m^(n-1).
pub fn spectrum_diag_uniform(
    diag: &[Complex64],
    m: usize,
    h: Complex64,
    tol: f64,
) -> Result<EigenMultiset> {
    let (mult_shifted, mult_plain) = diag_uniform_multiplicities(diag.len(), m)?;
    let mut items = Vec::with_capacity(2 * diag.len());
    for &ak in diag {
        items.push((ak + h * m as f64, mult_shifted));
        if mult_plain > 0 {
            items.push((ak, mult_plain));
        }
    }
    Ok(EigenMultiset::from_items(items, tol))
}

/// det(diag(a) wr (h J_m)) = prod_k (a_k + m h)^(m^(n-1)) a_k^((m-1) m^(n-1)).
pub fn det_diag_uniform(diag: &[Complex64], m: usize, h: Complex64) -> Result<Complex64> {
    let (mult_shifted, mult_plain) = diag_uniform_multiplicities(diag.len(), m)?;
    let mut det = Complex64::ONE;
    for &ak in diag {
        det *= powi(ak + h * m as f64, mult_shifted);
        det *= powi(ak, mult_plain);
    }
    Ok(det)
}

/// First index at which the closed-form determinant vanishes, if any:
/// a_k = 0 or a_k = -m h within `tol` componentwise.
pub fn diag_uniform_singularity(
    diag: &[Complex64],
    m: usize,
    h: Complex64,
    tol: f64,
) -> Option<SingularWitness> {
    let near =
        |z: Complex64, w: Complex64| (z.re - w.re).abs() <= tol && (z.im - w.im).abs() <= tol;
    let target = -h * m as f64;
    for (k, &ak) in diag.iter().enumerate() {
        if near(ak, Complex64::ZERO) {
            return Some(SingularWitness {
                index: k + 1,
                reason: SingularReason::ZeroEntry,
                value: ak,
            });
        }
        if near(ak, target) {
            return Some(SingularWitness {
                index: k + 1,
                reason: SingularReason::MinusMh,
                value: ak,
            });
        }
    }
    None
}

pub fn is_singular_diag_uniform(diag: &[Complex64], m: usize, h: Complex64, tol: f64) -> bool {
    diag_uniform_singularity(diag, m, h, tol).is_some()
}

fn diag_uniform_multiplicities(n: usize, m: usize) -> Result<(usize, usize)> {
    if n == 0 || m == 0 {
        return Err(Error::dim("factors must have order at least 1"));
    }
    let m_pow = checked_pow(m, n - 1)?;
    let plain = m_pow.checked_mul(m - 1).ok_or_else(|| {
        Error::cap(format!(
            "multiplicity (m-1) m^(n-1) overflows for n={n}, m={m}"
        ))
    })?;
    Ok((m_pow, plain))
}

fn powi(z: Complex64, e: usize) -> Complex64 {
    if e == 0 {
        return Complex64::ONE; // includes 0^0 = 1, the empty product
    }
    if z == Complex64::ZERO {
        return Complex64::ZERO;
    }
    let (r, theta) = z.to_polar();
    Complex64::from_polar(r.powi(e as i32), theta * e as f64)
}

/// The oracle: all eigenvalues of a general dense complex matrix, clustered
/// into a multiset at `tol`. Capped at order [`DENSE_EIG_CAP`].
pub fn dense_spectrum(m: &DenseMatrix, tol: f64) -> Result<EigenMultiset> {
    let n = m.order()?;
    if n > DENSE_EIG_CAP {
        return Err(Error::cap(format!(
            "dense eigensolver capped at order {DENSE_EIG_CAP}, got {n}"
        )));
    }
    let values = linalg::eigenvalues(m)?;
    Ok(EigenMultiset::from_values(&values, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wreath::wreath_product;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn golden_a() -> DenseMatrix {
        DenseMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 2.0]]).unwrap()
    }

    fn golden_spec() -> CirculantSpec {
        CirculantSpec::from_real(&[1.0, 2.0, -1.0]).unwrap()
    }

    #[test]
    fn circulant_recognition() {
        let id = DenseMatrix::identity(4).unwrap();
        let spec = is_circulant(&id, 0.0).unwrap();
        assert_eq!(spec.coeffs()[0], Complex64::ONE);
        assert!(spec.coeffs()[1..].iter().all(|&z| z == Complex64::ZERO));

        let b =
            DenseMatrix::from_real_rows(&[&[1.0, 2.0, -1.0], &[-1.0, 1.0, 2.0], &[2.0, -1.0, 1.0]])
                .unwrap();
        let spec = is_circulant(&b, 0.0).unwrap();
        assert_eq!(spec.coeffs(), &[c(1.0, 0.0), c(2.0, 0.0), c(-1.0, 0.0)]);
        assert_eq!(spec.matrix().unwrap(), b);

        let not =
            DenseMatrix::from_real_rows(&[&[1.0, 2.0, -1.0], &[-1.0, 1.5, 2.0], &[2.0, -1.0, 1.0]])
                .unwrap();
        assert!(is_circulant(&not, 1e-9).is_none());
    }

    #[test]
    fn symbol_values() {
        let spec = golden_spec();
        assert!((spec.symbol(0).unwrap() - c(2.0, 0.0)).norm() < 1e-14);
        let s1 = spec.symbol(1).unwrap();
        let want = c(0.5, 1.5 * 3.0f64.sqrt());
        assert!((s1 - want).norm() < 1e-13, "sigma(1) = {s1}");
        assert!((spec.symbol(2).unwrap() - want.conj()).norm() < 1e-13);

        // sigma of (b0, 0, ..., 0) is constantly b0
        let diag_spec = CirculantSpec::new(vec![
            c(3.0, -1.0),
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::ZERO,
        ])
        .unwrap();
        for k in 0..4 {
            assert_eq!(diag_spec.symbol(k).unwrap(), c(3.0, -1.0));
        }
    }

    #[test]
    fn symbols_are_circulant_eigenvalues() {
        let spec =
            CirculantSpec::new(vec![c(1.0, 0.2), c(-2.0, 1.0), c(0.5, 0.0), c(0.0, -1.5)]).unwrap();
        let from_symbols = EigenMultiset::from_values(&spec.symbols(), 1e-10);
        let from_dense = dense_spectrum(&spec.matrix().unwrap(), 1e-10).unwrap();
        assert!(from_symbols.approx_eq(&from_dense, 1e-10));
    }

    #[test]
    fn reduced_blocks_differ_from_a_only_on_the_diagonal() {
        let a =
            DenseMatrix::from_fn(3, 3, |i, j| c((i + 2 * j) as f64, i as f64 - j as f64)).unwrap();
        let spec = golden_spec();
        let mut count = 0;
        for block in reduced_blocks(&a, &spec).unwrap() {
            count += 1;
            for i in 0..3 {
                for j in 0..3 {
                    if i != j {
                        assert_eq!(block.matrix[(i, j)], a[(i, j)]);
                    }
                }
            }
        }
        assert_eq!(count, 27);
    }

    #[test]
    fn golden_tuple_block() {
        // tuple (0, 0) adds sigma(0) = 2 on the diagonal
        let mut blocks = reduced_blocks(&golden_a(), &golden_spec()).unwrap();
        let first = blocks.next().unwrap();
        assert_eq!(first.tuple, vec![0, 0]);
        let want = DenseMatrix::from_real_rows(&[&[3.0, 1.0], &[0.0, 4.0]]).unwrap();
        assert!(first.matrix.approx_eq(&want, 1e-14));
    }

    #[test]
    fn zero_spec_blocks_equal_a() {
        let a = DenseMatrix::from_fn(3, 3, |i, j| c((i * 3 + j) as f64, 0.0)).unwrap();
        let spec = CirculantSpec::from_real(&[0.0, 0.0]).unwrap();
        for block in reduced_blocks(&a, &spec).unwrap() {
            assert_eq!(block.matrix, a);
        }
    }

    #[test]
    fn order_one_first_factor_reduces_to_shifted_circulant() {
        let a = DenseMatrix::new(1, 1, vec![c(2.0, -1.0)]).unwrap();
        let spec = CirculantSpec::new(vec![c(0.5, 0.0), c(1.0, 1.0), c(-2.0, 0.3)]).unwrap();
        let reduced = spectrum_reduced(&a, &spec, CLUSTER_TOL).unwrap();
        let shifted = spec
            .matrix()
            .unwrap()
            .add(&DenseMatrix::scalar(3, c(2.0, -1.0)).unwrap())
            .unwrap();
        let oracle = dense_spectrum(&shifted, CLUSTER_TOL).unwrap();
        assert!(reduced.approx_eq(&oracle, 1e-9));
    }

    #[test]
    fn golden_example_aggregate_spectrum() {
        let reduced = spectrum_reduced(&golden_a(), &golden_spec(), CLUSTER_TOL).unwrap();
        assert_eq!(reduced.total(), 18);
        let s = 1.5 * 3.0f64.sqrt();
        let want = EigenMultiset::from_items(
            vec![
                (c(4.0, 0.0), 3),
                (c(3.0, 0.0), 3),
                (c(2.5, s), 3),
                (c(2.5, -s), 3),
                (c(1.5, s), 3),
                (c(1.5, -s), 3),
            ],
            1e-12,
        );
        assert!(reduced.approx_eq(&want, 1e-10));

        // all three routes agree: closed form, reduction, dense oracle
        let closed = spectrum_2x2_closed_form(&golden_a(), &golden_spec(), CLUSTER_TOL).unwrap();
        assert!(closed.approx_eq(&want, 1e-10));
        let w = wreath_product(&golden_a(), &golden_spec().matrix().unwrap()).unwrap();
        let oracle = dense_spectrum(&w.to_dense().unwrap(), CLUSTER_TOL).unwrap();
        assert!(oracle.approx_eq(&want, 1e-8));
    }

    #[test]
    fn kernel_pair_spectrum_is_zero() {
        let h = c(1.5, -0.5);
        let a = DenseMatrix::scalar(2, h).unwrap();
        let spec = CirculantSpec::new(vec![-h, Complex64::ZERO, Complex64::ZERO]).unwrap();
        let reduced = spectrum_reduced(&a, &spec, CLUSTER_TOL).unwrap();
        assert_eq!(reduced.total(), 18);
        assert_eq!(reduced.items().len(), 1);
        assert!(reduced.items()[0].0.norm() < 1e-12);
    }

    #[test]
    fn closed_form_2x2_degenerates_for_triangular_a() {
        let spec = golden_spec();
        let a = DenseMatrix::from_rows(&[
            vec![c(1.0, 1.0), Complex64::ZERO],
            vec![Complex64::ZERO, c(-2.0, 0.5)],
        ])
        .unwrap();
        let closed = spectrum_2x2_closed_form(&a, &spec, 1e-10).unwrap();
        let mut values = Vec::new();
        for s1 in spec.symbols() {
            values.push(a[(0, 0)] + s1);
        }
        // diagonal a: roots are a+sigma(i1) and d+sigma(i2), each m times
        let mut items = Vec::new();
        for v in &values {
            items.push((*v, 3));
        }
        for s2 in spec.symbols() {
            items.push((a[(1, 1)] + s2, 3));
        }
        let want = EigenMultiset::from_items(items, 1e-12);
        assert!(closed.approx_eq(&want, 1e-10));
    }

    #[test]
    fn diag_uniform_closed_forms() {
        let diag = [c(1.0, 0.0), c(2.0, 0.0)];
        let h = Complex64::ONE;
        let spectrum = spectrum_diag_uniform(&diag, 2, h, 1e-10).unwrap();
        assert_eq!(spectrum.total(), 8);
        let det = det_diag_uniform(&diag, 2, h).unwrap();
        assert!((det - c(576.0, 0.0)).norm() < 1e-9, "det = {det}");

        // h = 0: every a_k with multiplicity m^n
        let spectrum0 = spectrum_diag_uniform(&diag, 3, Complex64::ZERO, 1e-12).unwrap();
        assert_eq!(spectrum0.total(), 18);
        for &(_, mult) in spectrum0.items() {
            assert_eq!(mult, 9);
        }
        let det0 = det_diag_uniform(&diag, 3, Complex64::ZERO).unwrap();
        assert!((det0 - powi(c(2.0, 0.0), 9)).norm() < 1e-9);

        // singularity witnesses
        let w = diag_uniform_singularity(&[c(-2.0, 0.0), c(5.0, 0.0)], 2, h, 1e-12).unwrap();
        assert_eq!((w.index, w.reason), (1, SingularReason::MinusMh));
        let w = diag_uniform_singularity(&[c(1.0, 0.0), Complex64::ZERO], 2, h, 1e-12).unwrap();
        assert_eq!((w.index, w.reason), (2, SingularReason::ZeroEntry));
        assert!(!is_singular_diag_uniform(&diag, 2, h, 1e-12));
    }

    #[test]
    fn diag_uniform_matches_reduction_and_oracle() {
        let diag = [c(1.0, 0.5), c(-2.0, 0.0), c(0.7, -1.0)];
        let m = 2usize;
        let h = c(0.8, -0.3);
        let closed = spectrum_diag_uniform(&diag, m, h, CLUSTER_TOL).unwrap();

        let a = DenseMatrix::from_diagonal(&diag).unwrap();
        let b = DenseMatrix::uniform(m).unwrap().scale(h);
        let spec = is_circulant(&b, 0.0).unwrap();
        let reduced = spectrum_reduced(&a, &spec, CLUSTER_TOL).unwrap();
        assert!(closed.approx_eq(&reduced, 1e-10));

        let oracle = dense_spectrum(
            &wreath_product(&a, &b).unwrap().to_dense().unwrap(),
            CLUSTER_TOL,
        )
        .unwrap();
        assert!(closed.approx_eq(&oracle, 1e-8));

        // determinant equals the product over the multiset
        let det = det_diag_uniform(&diag, m, h).unwrap();
        let mut prod = Complex64::ONE;
        for &(z, mult) in closed.items() {
            prod *= powi(z, mult);
        }
        assert!((det - prod).norm() <= 1e-8 * det.norm().max(1.0));
    }

    #[test]
    fn dense_spectrum_cap_and_basics() {
        let tri = DenseMatrix::from_real_rows(&[&[1.0, 5.0], &[0.0, -2.0]]).unwrap();
        let ms = dense_spectrum(&tri, 1e-10).unwrap();
        assert!(ms.approx_eq(
            &EigenMultiset::from_values(&[c(1.0, 0.0), c(-2.0, 0.0)], 1e-12),
            1e-12
        ));
        assert_eq!(
            dense_spectrum(&DenseMatrix::identity(3).unwrap(), 1e-10)
                .unwrap()
                .items(),
            &[(Complex64::ONE, 3)]
        );

        let too_big = DenseMatrix::zeros(DENSE_EIG_CAP + 1, DENSE_EIG_CAP + 1).unwrap();
        assert!(matches!(
            dense_spectrum(&too_big, 1e-10),
            Err(Error::CapExceeded(_))
        ));
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let a = DenseMatrix::identity(25).unwrap();
        let spec = CirculantSpec::from_real(&[0.0, 1.0]).unwrap();
        // 2^25 tuples exceed the 2^24 cap
        assert!(matches!(
            reduced_blocks(&a, &spec),
            Err(Error::CapExceeded(_))
        ));
        assert!(matches!(
            spectrum_reduced(&a, &spec, 1e-8),
            Err(Error::CapExceeded(_))
        ));
    }

    #[test]
    fn circulant_defect_positions() {
        let not = DenseMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 1.0]]).unwrap();
        assert_eq!(circulant_defect(&not, 1e-12), Some((1, 0)));
        let id = DenseMatrix::identity(3).unwrap();
        assert_eq!(circulant_defect(&id, 0.0), None);
    }
}
