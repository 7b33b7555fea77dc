//! Dense complex LU factorization with partial pivoting.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tensor::DenseMatrix;

/// Relative pivot threshold below which a factorization counts as singular.
pub const PIVOT_REL_TOL: f64 = 1e-10;

/// PA = LU factors of a square matrix, with pivot magnitude bookkeeping.
pub struct LuFactors {
    lu: DenseMatrix,
    perm: Vec<usize>,
    swaps: usize,
    min_pivot: f64,
    max_pivot: f64,
}

pub fn lu_factor(a: &DenseMatrix) -> Result<LuFactors> {
    let n = a.order()?;
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut swaps = 0usize;
    let mut min_pivot = f64::INFINITY;
    let mut max_pivot = 0.0f64;

    for k in 0..n {
        let (pivot_row, pivot_mag) = (k..n)
            .map(|i| (i, lu[(i, k)].norm()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .expect("nonempty column");
        if pivot_row != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(pivot_row, j)];
                lu[(pivot_row, j)] = tmp;
            }
            perm.swap(k, pivot_row);
            swaps += 1;
        }
        min_pivot = min_pivot.min(pivot_mag);
        max_pivot = max_pivot.max(pivot_mag);
        if pivot_mag == 0.0 {
            continue; // exactly singular; keep going so det comes out zero
        }
        let pivot = lu[(k, k)];
        for i in k + 1..n {
            let factor = lu[(i, k)] / pivot;
            lu[(i, k)] = factor;
            if factor != Complex64::ZERO {
                for j in k + 1..n {
                    let sub = factor * lu[(k, j)];
                    lu[(i, j)] -= sub;
                }
            }
        }
    }
    if n == 0 {
        min_pivot = 0.0;
    }
    Ok(LuFactors {
        lu,
        perm,
        swaps,
        min_pivot,
        max_pivot,
    })
}

impl LuFactors {
    pub fn order(&self) -> usize {
        self.lu.rows()
    }

    pub fn min_pivot(&self) -> f64 {
        self.min_pivot
    }

    pub fn max_pivot(&self) -> f64 {
        self.max_pivot
    }

    /// Ratio of smallest to largest pivot magnitude; 0 for an exactly
    /// singular factorization.
    pub fn pivot_ratio(&self) -> f64 {
        if self.max_pivot == 0.0 {
            0.0
        } else {
            self.min_pivot / self.max_pivot
        }
    }

    pub fn is_singular(&self, rel_tol: f64) -> bool {
        self.max_pivot == 0.0 || self.min_pivot < rel_tol * self.max_pivot
    }

    pub fn det(&self) -> Complex64 {
        let n = self.order();
        let sign = if self.swaps.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        let mut det = Complex64::new(sign, 0.0);
        for k in 0..n {
            det *= self.lu[(k, k)];
        }
        det
    }

    /// Solves A X = RHS for a multi-column right-hand side. Fails when the
    /// factorization is singular at [`PIVOT_REL_TOL`].
    pub fn solve(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        let n = self.order();
        if rhs.rows() != n {
            return Err(Error::dim(format!(
                "rhs has {} rows, system has order {n}",
                rhs.rows()
            )));
        }
        if self.is_singular(PIVOT_REL_TOL) {
            return Err(Error::Singular(format!(
                "pivot ratio {:.3e} below {PIVOT_REL_TOL:.0e}",
                self.pivot_ratio()
            )));
        }
        let mut x = DenseMatrix::zeros(n, rhs.cols())?;
        for col in 0..rhs.cols() {
            // forward substitution on the permuted rhs
            let mut y = vec![Complex64::ZERO; n];
            for i in 0..n {
                let mut s = rhs[(self.perm[i], col)];
                for (j, &yj) in y.iter().enumerate().take(i) {
                    s -= self.lu[(i, j)] * yj;
                }
                y[i] = s;
            }
            // back substitution
            for i in (0..n).rev() {
                let mut s = y[i];
                for j in i + 1..n {
                    s -= self.lu[(i, j)] * x[(j, col)];
                }
                x[(i, col)] = s / self.lu[(i, i)];
            }
        }
        Ok(x)
    }
}

pub fn determinant(a: &DenseMatrix) -> Result<Complex64> {
    Ok(lu_factor(a)?.det())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn determinant_of_triangular_is_diagonal_product() {
        let a =
            DenseMatrix::from_real_rows(&[&[2.0, 5.0, 1.0], &[0.0, -3.0, 4.0], &[0.0, 0.0, 0.5]])
                .unwrap();
        assert!((determinant(&a).unwrap() - c(-3.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn determinant_complex_2x2() {
        let a = DenseMatrix::new(
            2,
            2,
            vec![c(1.0, 1.0), c(2.0, 0.0), c(0.0, 1.0), c(1.0, -1.0)],
        )
        .unwrap();
        // ad - bc = (1+i)(1-i) - 2i = 2 - 2i
        assert!((determinant(&a).unwrap() - c(2.0, -2.0)).norm() < 1e-12);
    }

    #[test]
    fn solve_recovers_manufactured_solution() {
        let a = DenseMatrix::new(
            3,
            3,
            vec![
                c(4.0, 0.0),
                c(1.0, 2.0),
                c(0.0, -1.0),
                c(-1.0, 0.5),
                c(3.0, 0.0),
                c(2.0, 0.0),
                c(0.0, 0.0),
                c(1.0, -1.0),
                c(5.0, 1.0),
            ],
        )
        .unwrap();
        let x0 = DenseMatrix::new(
            3,
            2,
            (0..6).map(|k| c(k as f64 - 2.0, 0.5 * k as f64)).collect(),
        )
        .unwrap();
        let rhs = a.matmul(&x0).unwrap();
        let x = lu_factor(&a).unwrap().solve(&rhs).unwrap();
        assert!(x.approx_eq(&x0, 1e-10));
    }

    #[test]
    fn singular_matrix_is_flagged() {
        let a = DenseMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]).unwrap();
        let f = lu_factor(&a).unwrap();
        assert!(f.is_singular(PIVOT_REL_TOL));
        assert!(f.det().norm() < 1e-12);
        let rhs = DenseMatrix::zeros(2, 1).unwrap();
        assert!(matches!(f.solve(&rhs), Err(Error::Singular(_))));
    }
}
