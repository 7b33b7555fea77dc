//! Generalized Sylvester matrix equations sum_i A_i X B_i = C.
//!
//! Column-stacking turns the equation into the single linear system
//! (sum_i B_i^T (x) A_i) vec(X) = vec(C). The wreath-structured instance
//! with pairs (A, I_m^(x)n), (C_1, (B (x) I ... )^T), ..., (C_n, (... (x) B)^T)
//! has coefficient matrix exactly A wr B, so its unique solvability is the
//! full-rank question for the wreath product; for diagonal A and uniform B
//! that question has a closed-form answer.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{lu_factor, PIVOT_REL_TOL};
use crate::spectral::{
    dense_spectrum, diag_uniform_singularity, is_circulant, is_uniform, spectrum_reduced,
    SingularWitness, CLUSTER_TOL,
};
use crate::tensor::{projector, unvectorize, vectorize, DenseMatrix};
use crate::wreath::wreath_product;

/// Cap on the order of the assembled coefficient matrix accepted by the
/// dense solver.
pub const ASSEMBLED_ORDER_CAP: usize = 4096;

/// Default tolerance when checking the diagonal/uniform structure and its
/// singularity criterion.
pub const STRUCTURE_TOL: f64 = 1e-12;

/// A system sum_i A_i X B_i = C: all A_i share shape n x m, all B_i share
/// shape s x t, C is n x t, and the unknown X is m x s.
#[derive(Clone, Debug)]
pub struct SylvesterSystem {
    pairs: Vec<(DenseMatrix, DenseMatrix)>,
    c: DenseMatrix,
}

impl SylvesterSystem {
    pub fn new(pairs: Vec<(DenseMatrix, DenseMatrix)>, c: DenseMatrix) -> Result<Self> {
        let Some(((a0, b0), _)) = pairs.split_first() else {
            return Err(Error::dim("system needs at least one coefficient pair"));
        };
        let (n, m) = (a0.rows(), a0.cols());
        let (s, t) = (b0.rows(), b0.cols());
        for (idx, (a, b)) in pairs.iter().enumerate() {
            if (a.rows(), a.cols()) != (n, m) || (b.rows(), b.cols()) != (s, t) {
                return Err(Error::dim(format!(
                    "pair {idx} has shapes {}x{} and {}x{}, expected {n}x{m} and {s}x{t}",
                    a.rows(),
                    a.cols(),
                    b.rows(),
                    b.cols()
                )));
            }
        }
        if (c.rows(), c.cols()) != (n, t) {
            return Err(Error::dim(format!(
                "right side is {}x{}, expected {n}x{t}",
                c.rows(),
                c.cols()
            )));
        }
        Ok(SylvesterSystem { pairs, c })
    }

    pub fn pairs(&self) -> &[(DenseMatrix, DenseMatrix)] {
        &self.pairs
    }

    pub fn rhs(&self) -> &DenseMatrix {
        &self.c
    }

    /// Shape (rows, cols) of the unknown X.
    pub fn unknown_shape(&self) -> (usize, usize) {
        (self.pairs[0].0.cols(), self.pairs[0].1.rows())
    }

    /// Evaluates sum_i A_i X B_i for a candidate X.
    pub fn apply(&self, x: &DenseMatrix) -> Result<DenseMatrix> {
        let mut acc = DenseMatrix::zeros(self.c.rows(), self.c.cols())?;
        for (a, b) in &self.pairs {
            acc = acc.add(&a.matmul(x)?.matmul(b)?)?;
        }
        Ok(acc)
    }

    /// Residual of a candidate solution in the Frobenius norm.
    pub fn residual(&self, x: &DenseMatrix) -> Result<f64> {
        Ok(self.apply(x)?.sub(&self.c)?.frobenius_norm())
    }
}

/// The vectorized coefficient matrix sum_i B_i^T (x) A_i of shape
/// (n t) x (m s).
pub fn assemble_coefficient(sys: &SylvesterSystem) -> Result<DenseMatrix> {
    let (a0, b0) = &sys.pairs()[0];
    let rows = a0.rows() * b0.cols();
    let cols = a0.cols() * b0.rows();
    let mut acc = DenseMatrix::zeros(rows, cols)?;
    for (a, b) in sys.pairs() {
        acc = acc.add(&b.transpose().kron(a)?)?;
    }
    Ok(acc)
}

/// The wreath-structured instance: first factor `a` of order n, second
/// factor `b` of order m, right side of shape n x m^n.
#[derive(Clone, Debug)]
pub struct WreathSylvesterSpec {
    pub a: DenseMatrix,
    pub b: DenseMatrix,
    pub c: DenseMatrix,
}

/// Expands the wreath spec into its n+1 coefficient pairs:
/// A_1 = A with B_1 = I_m^(x)n, and A_{h} = C_{h-1} with
/// B_h = (I_m^(x)(h-2) (x) B (x) I_m^(x)(n-h+1))^T for h = 2..n+1.
/// The transpose is applied literally; assembling the result reproduces
/// A wr B exactly.
pub fn expand_wreath_system(spec: &WreathSylvesterSpec) -> Result<SylvesterSystem> {
    let n = spec.a.order()?;
    let m = spec.b.order()?;
    let im = DenseMatrix::identity(m)?;
    let mut pairs = Vec::with_capacity(n + 1);
    pairs.push((spec.a.clone(), im.kron_power(n)?));
    for h in 2..=n + 1 {
        let sandwich = im
            .kron_power(h - 2)?
            .kron(&spec.b)?
            .kron(&im.kron_power(n + 1 - h)?)?;
        pairs.push((projector(n, h - 1)?, sandwich.transpose()));
    }
    SylvesterSystem::new(pairs, spec.c.clone())
}

/// Solution of a square system with diagnostics.
#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub x: DenseMatrix,
    /// Frobenius norm of sum_i A_i X B_i - C at the computed X.
    pub residual: f64,
    /// Smallest over largest LU pivot magnitude of the assembled system.
    pub pivot_ratio: f64,
}

/// Solves sum_i A_i X B_i = C by assembling the vectorized system and
/// running dense LU. Requires a square assembled coefficient (n t = m s);
/// rank deficiency at the pivot tolerance is reported as singular.
pub fn solve(sys: &SylvesterSystem) -> Result<SolveOutcome> {
    let coefficient = assemble_coefficient(sys)?;
    if coefficient.rows() != coefficient.cols() {
        return Err(Error::dim(format!(
            "assembled coefficient is {} x {}; only square systems are solvable here",
            coefficient.rows(),
            coefficient.cols()
        )));
    }
    if coefficient.rows() > ASSEMBLED_ORDER_CAP {
        return Err(Error::cap(format!(
            "assembled order {} exceeds solver cap {ASSEMBLED_ORDER_CAP}",
            coefficient.rows()
        )));
    }
    let factors = lu_factor(&coefficient)?;
    if factors.is_singular(PIVOT_REL_TOL) {
        return Err(Error::Singular(format!(
            "assembled coefficient is rank deficient (pivot ratio {:.3e})",
            factors.pivot_ratio()
        )));
    }
    let x_vec = factors.solve(&vectorize(sys.rhs())?)?;
    let (xr, xc) = sys.unknown_shape();
    let x = unvectorize(&x_vec, xr, xc)?;
    let residual = sys.residual(&x)?;
    Ok(SolveOutcome {
        x,
        residual,
        pivot_ratio: factors.pivot_ratio(),
    })
}

/// Why a wreath-structured system is, or is not, uniquely solvable.
#[derive(Clone, Debug, PartialEq)]
pub enum UniquenessCertificate {
    /// Diagonal/uniform closed form: no a_k hits 0 or -m h.
    ClosedFormOk,
    /// Diagonal/uniform closed form found a violating index.
    ClosedFormViolation(SingularWitness),
    /// Decided through the spectrum of A wr B: smallest |eigenvalue|.
    Spectral { min_abs: f64, singular: bool },
}

/// Decides unique solvability of the wreath-structured system, i.e. whether
/// A wr B has full rank. Diagonal A with uniform B is decided by the
/// closed-form criterion without assembling anything; a circulant B goes
/// through the spectral reduction; anything else through the dense oracle
/// at desk scale.
pub fn wreath_unique_solvable(
    a: &DenseMatrix,
    b: &DenseMatrix,
    tol: f64,
) -> Result<(bool, UniquenessCertificate)> {
    let m = b.order()?;
    a.order()?;
    let diag_a: Option<Vec<Complex64>> = is_diagonal(a, STRUCTURE_TOL);
    if let (Some(diag), Some(h)) = (diag_a, is_uniform(b, STRUCTURE_TOL)) {
        return Ok(match diag_uniform_singularity(&diag, m, h, tol) {
            Some(witness) => (false, UniquenessCertificate::ClosedFormViolation(witness)),
            None => (true, UniquenessCertificate::ClosedFormOk),
        });
    }
    let spectrum = match is_circulant(b, STRUCTURE_TOL) {
        Some(spec) => spectrum_reduced(a, &spec, CLUSTER_TOL)?,
        None => dense_spectrum(&wreath_product(a, b)?.to_dense()?, CLUSTER_TOL)?,
    };
    let min_abs = spectrum
        .items()
        .iter()
        .map(|(z, _)| z.norm())
        .fold(f64::INFINITY, f64::min);
    let max_abs = spectrum
        .items()
        .iter()
        .map(|(z, _)| z.norm())
        .fold(0.0f64, f64::max);
    let singular = min_abs <= tol * max_abs.max(1.0);
    Ok((
        !singular,
        UniquenessCertificate::Spectral { min_abs, singular },
    ))
}

fn is_diagonal(a: &DenseMatrix, tol: f64) -> Option<Vec<Complex64>> {
    let n = a.order().ok()?;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let z = a[(i, j)];
                if z.re.abs() > tol || z.im.abs() > tol {
                    return None;
                }
            }
        }
    }
    Some(a.diagonal())
}

pub use crate::spectral::SingularReason as WreathSingularReason;
