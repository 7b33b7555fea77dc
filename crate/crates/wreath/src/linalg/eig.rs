//! Dense complex eigensolver: Householder reduction to Hessenberg form
//! followed by explicitly shifted QR with Givens rotations, in the style of
//! EISPACK's comqr / LAPACK's zlahqr. Eigenvalues only, no Schur vectors.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tensor::DenseMatrix;

const ZERO: Complex64 = Complex64::ZERO;

/// All eigenvalues of a square complex matrix, in no particular order.
///
/// Orders 1 and 2 go through closed forms (the larger-magnitude quadratic
/// root is computed first, the other derived from the product); larger
/// orders through Hessenberg + shifted QR.
pub fn eigenvalues(a: &DenseMatrix) -> Result<Vec<Complex64>> {
    let n = a.order()?;
    match n {
        0 => Ok(Vec::new()),
        1 => Ok(vec![a[(0, 0)]]),
        2 => Ok(eig2(a[(0, 0)], a[(0, 1)], a[(1, 0)], a[(1, 1)]).to_vec()),
        _ => {
            let mut h = a.clone();
            hessenberg_in_place(&mut h);
            hessenberg_eigenvalues(&mut h)
        }
    }
}

/// Roots of the characteristic polynomial of [[a, b], [c, d]].
pub(crate) fn eig2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> [Complex64; 2] {
    let mid = (a + d) * 0.5;
    let off = (a - d) * 0.5;
    let disc = (off * off + b * c).sqrt();
    // Add the square root in the direction that avoids cancellation.
    let big = if mid.re * disc.re + mid.im * disc.im >= 0.0 {
        mid + disc
    } else {
        mid - disc
    };
    let det = a * d - b * c;
    let small = if big != ZERO {
        det / big
    } else {
        mid * 2.0 - big
    };
    [big, small]
}

/// In-place unitary reduction to upper Hessenberg form via Householder
/// reflections H = I - 2vv*.
fn hessenberg_in_place(h: &mut DenseMatrix) {
    let n = h.rows();
    for k in 0..n.saturating_sub(2) {
        let norm_x = (k + 1..n).map(|i| h[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm_x == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0 == ZERO {
            Complex64::ONE
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm_x;

        let mut v: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        v[0] = x0 - alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue; // column already in the required form
        }
        for z in &mut v {
            *z /= vnorm;
        }

        // left: rows k+1..n of columns k..n (earlier columns are zero there)
        for j in k..n {
            let mut s = ZERO;
            for (i, vi) in v.iter().enumerate() {
                s += vi.conj() * h[(k + 1 + i, j)];
            }
            s *= 2.0;
            for (i, vi) in v.iter().enumerate() {
                let sub = *vi * s;
                h[(k + 1 + i, j)] -= sub;
            }
        }
        // right: columns k+1..n of all rows
        for i in 0..n {
            let mut s = ZERO;
            for (j, vj) in v.iter().enumerate() {
                s += h[(i, k + 1 + j)] * *vj;
            }
            s *= 2.0;
            for (j, vj) in v.iter().enumerate() {
                let sub = s * vj.conj();
                h[(i, k + 1 + j)] -= sub;
            }
        }
        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
}

/// Complex Givens rotation [[c, s], [-conj(s), c]] with real c mapping
/// (f, g) to (r, 0).
fn givens(f: Complex64, g: Complex64) -> (f64, Complex64, Complex64) {
    if g == ZERO {
        return (1.0, ZERO, f);
    }
    if f == ZERO {
        let gn = g.norm();
        return (0.0, g.conj() / gn, Complex64::new(gn, 0.0));
    }
    let fn_ = f.norm();
    let d = (f.norm_sqr() + g.norm_sqr()).sqrt();
    let c = fn_ / d;
    let s = (f / fn_) * (g.conj() / d);
    let r = (f / fn_) * d;
    (c, s, r)
}

/// Shifted QR iteration on an upper Hessenberg matrix, mutating it toward
/// triangular form and collecting eigenvalues as 1x1 and 2x2 blocks deflate
/// off the bottom.
fn hessenberg_eigenvalues(h: &mut DenseMatrix) -> Result<Vec<Complex64>> {
    let n = h.rows();
    let eps = f64::EPSILON;
    let budget = 40 * n;
    let mut total_iters = 0usize;
    let mut eigs = Vec::with_capacity(n);
    let mut hi = n - 1;
    let mut since_deflation = 0usize;

    loop {
        if hi == 0 {
            eigs.push(h[(0, 0)]);
            break;
        }
        // top of the irreducible block ending at hi
        let mut lo = 0;
        for l in (1..=hi).rev() {
            let mut scale = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            if scale == 0.0 {
                scale = window_norm(h, l.saturating_sub(1), hi);
            }
            if h[(l, l - 1)].norm() <= eps * scale {
                h[(l, l - 1)] = ZERO;
                lo = l;
                break;
            }
        }

        if lo == hi {
            eigs.push(h[(hi, hi)]);
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        if lo + 1 == hi {
            let [l1, l2] = eig2(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            );
            eigs.push(l1);
            eigs.push(l2);
            if hi == 1 {
                break;
            }
            hi -= 2;
            since_deflation = 0;
            continue;
        }

        total_iters += 1;
        since_deflation += 1;
        if total_iters > budget {
            return Err(Error::NonConvergence {
                order: n,
                iterations: total_iters,
            });
        }

        let shift = if since_deflation.is_multiple_of(10) {
            // exceptional shift breaks symmetry-induced stalls
            h[(hi, hi)] + Complex64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(h, hi)
        };
        qr_sweep(h, lo, hi, shift);
    }
    Ok(eigs)
}

/// Eigenvalue of the trailing 2x2 closest to the corner entry.
fn wilkinson_shift(h: &DenseMatrix, hi: usize) -> Complex64 {
    let corner = h[(hi, hi)];
    let [l1, l2] = eig2(
        h[(hi - 1, hi - 1)],
        h[(hi - 1, hi)],
        h[(hi, hi - 1)],
        corner,
    );
    if (l1 - corner).norm() <= (l2 - corner).norm() {
        l1
    } else {
        l2
    }
}

fn window_norm(h: &DenseMatrix, lo: usize, hi: usize) -> f64 {
    let mut norm = 0.0f64;
    for i in lo..=hi {
        for j in i.saturating_sub(1)..=hi {
            norm += h[(i, j)].norm();
        }
    }
    norm
}

/// One explicit QR step on the window [lo, hi]: factor H - shift*I = QR by
/// Givens rotations, then form RQ + shift*I in place.
fn qr_sweep(h: &mut DenseMatrix, lo: usize, hi: usize, shift: Complex64) {
    let mut rotations: Vec<(f64, Complex64)> = Vec::with_capacity(hi - lo);
    for i in lo..=hi {
        h[(i, i)] -= shift;
    }
    for k in lo..hi {
        let (c, s, r) = givens(h[(k, k)], h[(k + 1, k)]);
        rotations.push((c, s));
        h[(k, k)] = r;
        h[(k + 1, k)] = ZERO;
        for j in k + 1..=hi {
            let t1 = h[(k, j)];
            let t2 = h[(k + 1, j)];
            h[(k, j)] = t1 * c + s * t2;
            h[(k + 1, j)] = -s.conj() * t1 + t2 * c;
        }
    }
    for k in lo..hi {
        let (c, s) = rotations[k - lo];
        for i in lo..=(k + 1).min(hi) {
            let t1 = h[(i, k)];
            let t2 = h[(i, k + 1)];
            h[(i, k)] = t1 * c + s.conj() * t2;
            h[(i, k + 1)] = -s * t1 + t2 * c;
        }
    }
    for i in lo..=hi {
        h[(i, i)] += shift;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Greedy nearest-neighbor pairing, good enough for tests whose expected
    /// values are separated by much more than the tolerance.
    fn assert_spectra_close(got: Vec<Complex64>, want: Vec<Complex64>, tol: f64) {
        assert_eq!(got.len(), want.len());
        let mut used = vec![false; want.len()];
        for g in &got {
            let (best, dist) = want
                .iter()
                .enumerate()
                .filter(|(i, _)| !used[*i])
                .map(|(i, w)| (i, (g - w).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            assert!(
                dist <= tol,
                "eigenvalue {g} is {dist:.3e} from nearest expected value (tol {tol})"
            );
            used[best] = true;
        }
    }

    #[test]
    fn identity_spectrum() {
        let eigs = eigenvalues(&DenseMatrix::identity(3).unwrap()).unwrap();
        assert_spectra_close(eigs, vec![Complex64::ONE; 3], 1e-14);
    }

    #[test]
    fn triangular_spectrum_is_diagonal() {
        let a = DenseMatrix::from_real_rows(&[
            &[4.0, 1.0, -2.0, 0.5],
            &[0.0, -1.0, 3.0, 2.0],
            &[0.0, 0.0, 2.5, -1.0],
            &[0.0, 0.0, 0.0, 0.0],
        ])
        .unwrap();
        let eigs = eigenvalues(&a).unwrap();
        assert_spectra_close(
            eigs,
            vec![c(4.0, 0.0), c(-1.0, 0.0), c(2.5, 0.0), c(0.0, 0.0)],
            1e-10,
        );
    }

    #[test]
    fn cyclic_shift_spectrum_is_roots_of_unity() {
        for m in [3usize, 4, 5, 7] {
            let circ = crate::tensor::cyclic_shift(m, 1).unwrap();
            let eigs = eigenvalues(&circ).unwrap();
            let want: Vec<Complex64> = (0..m)
                .map(|k| {
                    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / m as f64)
                })
                .collect();
            assert_spectra_close(eigs, want, 1e-10);
        }
    }

    #[test]
    fn quadratic_closed_form_matches_qr_path() {
        // embed a 2x2 in a 3x3 block triangular matrix so the QR path runs
        let (a, b, cc, d) = (c(1.0, 2.0), c(-3.0, 0.5), c(2.0, -1.0), c(0.0, 4.0));
        let m = DenseMatrix::from_rows(&[
            vec![a, b, c(0.3, 0.1)],
            vec![cc, d, c(-1.0, 0.0)],
            vec![ZERO, ZERO, c(7.0, -2.0)],
        ])
        .unwrap();
        let mut want = eig2(a, b, cc, d).to_vec();
        want.push(c(7.0, -2.0));
        assert_spectra_close(eigenvalues(&m).unwrap(), want, 1e-9);
    }

    #[test]
    fn eig2_handles_degenerate_cases() {
        let [l1, l2] = eig2(c(3.0, 0.0), ZERO, ZERO, c(3.0, 0.0));
        assert!((l1 - c(3.0, 0.0)).norm() < 1e-15 && (l2 - c(3.0, 0.0)).norm() < 1e-15);
        let [l1, l2] = eig2(ZERO, Complex64::ONE, ZERO, ZERO);
        assert_eq!((l1, l2), (ZERO, ZERO));
    }

    #[test]
    fn trace_and_determinant_consistency_on_random_matrices() {
        // splitmix-style deterministic pseudo-random entries
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        for trial in 0..20 {
            let n = 3 + trial % 10;
            let a = DenseMatrix::from_fn(n, n, |_, _| c(next(), next())).unwrap();
            let eigs = eigenvalues(&a).unwrap();
            assert_eq!(eigs.len(), n);

            let sum: Complex64 = eigs.iter().sum();
            let tr = a.trace().unwrap();
            assert!(
                (sum - tr).norm() <= 1e-9 * (1.0 + tr.norm()),
                "trace mismatch at n={n}"
            );

            let prod: Complex64 = eigs.iter().product();
            let det = crate::linalg::determinant(&a).unwrap();
            assert!(
                (prod - det).norm() <= 1e-6 * (1.0 + det.norm()),
                "det mismatch at n={n}: {prod} vs {det}"
            );
        }
    }

    #[test]
    fn repeated_eigenvalues_converge() {
        // J block with a repeated eigenvalue plus a distinct one
        let a =
            DenseMatrix::from_real_rows(&[&[2.0, 1.0, 0.0], &[0.0, 2.0, 0.0], &[1.0, 0.0, 5.0]])
                .unwrap();
        let eigs = eigenvalues(&a).unwrap();
        assert_spectra_close(eigs, vec![c(2.0, 0.0), c(2.0, 0.0), c(5.0, 0.0)], 1e-7);
    }
}
