use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Relative pivot threshold below which factorization reports singularity.
pub const PIVOT_REL_THRESHOLD: f64 = 1e-14;

const PANEL: usize = 48;

/// Packed LU factorization with partial pivoting, `L U = P A`.
///
/// `perm[i]` is the original row of `A` that ended up in row `i` of `PA`.
pub struct LuFactors {
    lu: ComplexMatrix,
    perm: Vec<usize>,
}

impl LuFactors {
    /// Right-looking blocked factorization; trailing updates go through gemm.
    pub fn factor(a: &ComplexMatrix) -> Result<Self> {
        assert!(a.is_square(), "LU requires a square matrix");
        let n = a.rows();
        let threshold = PIVOT_REL_THRESHOLD * a.max_abs();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();

        let mut j0 = 0;
        while j0 < n {
            let nb = PANEL.min(n - j0);
            // Panel factorization with partial pivoting; row swaps apply to
            // the whole matrix so the packed factors stay consistent.
            for j in j0..j0 + nb {
                let (mut piv_row, mut piv_mag) = (j, lu.get(j, j).norm());
                for i in j + 1..n {
                    let m = lu.get(i, j).norm();
                    if m > piv_mag {
                        piv_row = i;
                        piv_mag = m;
                    }
                }
                if piv_mag < threshold {
                    return Err(Error::SingularMatrix {
                        pivot: piv_mag,
                        threshold,
                    });
                }
                if piv_row != j {
                    swap_rows(&mut lu, j, piv_row);
                    perm.swap(j, piv_row);
                }
                let pivot = lu.get(j, j);
                for i in j + 1..n {
                    let mult = lu.get(i, j) / pivot;
                    lu.set(i, j, mult);
                    if mult.norm_sqr() > 0.0 {
                        // update only the remaining panel columns here
                        for k in j + 1..j0 + nb {
                            let v = lu.get(i, k) - mult * lu.get(j, k);
                            lu.set(i, k, v);
                        }
                    }
                }
            }
            let rest = j0 + nb;
            if rest < n {
                // U12 := L11^{-1} A12 (unit lower forward substitution, row-wise)
                for r in j0 + 1..rest {
                    for s in j0..r {
                        let l = lu.get(r, s);
                        if l.norm_sqr() > 0.0 {
                            let (row_s, row_r) = row_pair(&mut lu, s, r);
                            for k in rest..n {
                                row_r[k] -= l * row_s[k];
                            }
                        }
                    }
                }
                // A22 -= L21 * U12 via strided gemm on the shared buffer
                let cols = n;
                let m = n - rest;
                let k = nb;
                let base = lu.data_mut().as_mut_ptr();
                unsafe {
                    let a21 = base.add(rest * cols + j0) as *const [f64; 2];
                    let u12 = base.add(j0 * cols + rest) as *const [f64; 2];
                    let a22 = base.add(rest * cols + rest) as *mut [f64; 2];
                    matrixmultiply::zgemm(
                        matrixmultiply::CGemmOption::Standard,
                        matrixmultiply::CGemmOption::Standard,
                        m,
                        k,
                        m,
                        [-1.0, 0.0],
                        a21,
                        cols as isize,
                        1,
                        u12,
                        cols as isize,
                        1,
                        [1.0, 0.0],
                        a22,
                        cols as isize,
                        1,
                    );
                }
            }
            j0 += nb;
        }
        Ok(Self { lu, perm })
    }

    pub fn dimension(&self) -> usize {
        self.lu.rows()
    }

    /// Solve `A x = b` in place.
    pub fn solve_vec(&self, b: &mut Vec<Complex64>) {
        let n = self.dimension();
        assert_eq!(b.len(), n);
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for k in 0..i {
                s -= self.lu.get(i, k) * x[k];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in i + 1..n {
                s -= self.lu.get(i, k) * x[k];
            }
            x[i] = s / self.lu.get(i, i);
        }
        *b = x;
    }

    /// Solve `A X = B` for all columns of `B` at once (row-oriented sweeps).
    pub fn solve_mat(&self, b: &ComplexMatrix) -> ComplexMatrix {
        let n = self.dimension();
        assert_eq!(b.rows(), n);
        let ncols = b.cols();
        let mut x = ComplexMatrix::zeros(n, ncols);
        for i in 0..n {
            let src = b.row(self.perm[i]).to_vec();
            x.row_mut(i).copy_from_slice(&src);
        }
        for i in 0..n {
            for k in 0..i {
                let l = self.lu.get(i, k);
                if l.norm_sqr() > 0.0 {
                    let (row_k, row_i) = row_pair(&mut x, k, i);
                    for j in 0..ncols {
                        row_i[j] -= l * row_k[j];
                    }
                }
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let u = self.lu.get(i, k);
                if u.norm_sqr() > 0.0 {
                    let (row_k, row_i) = row_pair(&mut x, k, i);
                    for j in 0..ncols {
                        row_i[j] -= u * row_k[j];
                    }
                }
            }
            let d = self.lu.get(i, i);
            for v in x.row_mut(i) {
                *v /= d;
            }
        }
        x
    }

    /// Solve `A* y = c` in place, reusing the factors of `A`.
    ///
    /// With `A = P^T L U` one has `A* = U* L* P`, so the sweep order is a
    /// forward substitution with `U*`, a backward one with `L*`, then the
    /// inverse permutation.
    pub fn solve_adjoint_vec(&self, c: &mut Vec<Complex64>) {
        let n = self.dimension();
        assert_eq!(c.len(), n);
        let mut z = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut s = c[i];
            for k in 0..i {
                s -= self.lu.get(k, i).conj() * z[k];
            }
            z[i] = s / self.lu.get(i, i).conj();
        }
        let mut t = vec![Complex64::new(0.0, 0.0); n];
        for i in (0..n).rev() {
            let mut s = z[i];
            for k in i + 1..n {
                s -= self.lu.get(k, i).conj() * t[k];
            }
            t[i] = s;
        }
        for i in 0..n {
            c[self.perm[i]] = t[i];
        }
    }
}

fn swap_rows(m: &mut ComplexMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    let cols = m.cols();
    let (lo, hi) = (a.min(b), a.max(b));
    let data = m.data_mut();
    let (head, tail) = data.split_at_mut(hi * cols);
    head[lo * cols..lo * cols + cols].swap_with_slice(&mut tail[..cols]);
}

/// Disjoint (source, destination) rows of the same matrix.
fn row_pair(m: &mut ComplexMatrix, src: usize, dst: usize) -> (&[Complex64], &mut [Complex64]) {
    assert!(src != dst);
    let cols = m.cols();
    let data = m.data_mut();
    if src < dst {
        let (head, tail) = data.split_at_mut(dst * cols);
        (&head[src * cols..src * cols + cols], &mut tail[..cols])
    } else {
        let (head, tail) = data.split_at_mut(src * cols);
        (&tail[..cols], &mut head[dst * cols..dst * cols + cols])
    }
}

/// Solve `A X = B` by partial-pivoting LU.
pub fn solve_linear(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !a.is_square() {
        return Err(Error::InvalidArgument("solve_linear needs square A".into()));
    }
    if a.rows() != b.rows() {
        return Err(Error::InvalidArgument(format!(
            "rhs has {} rows, matrix has {}",
            b.rows(),
            a.rows()
        )));
    }
    let lu = LuFactors::factor(a)?;
    Ok(lu.solve_mat(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_solve_returns_rhs() {
        let a = ComplexMatrix::identity(3);
        let b = ComplexMatrix::from_fn(3, 2, |i, j| c(i as f64 + 1.0, j as f64)).unwrap();
        let x = solve_linear(&a, &b).unwrap();
        assert!(x.sub(&b).frobenius_norm() < 1e-14);
    }

    #[test]
    fn diagonal_inverse() {
        let a = ComplexMatrix::from_diag(&[c(2.0, 0.0), c(4.0, 0.0)]);
        let x = solve_linear(&a, &ComplexMatrix::identity(2)).unwrap();
        assert!((x.get(0, 0) - c(0.5, 0.0)).norm() < 1e-15);
        assert!((x.get(1, 1) - c(0.25, 0.0)).norm() < 1e-15);
        assert!(x.get(0, 1).norm() < 1e-15);
    }

    #[test]
    fn recovers_known_solution() {
        // forward-multiply oracle: B = A * X0, solve, compare
        let n = 5;
        let a = ComplexMatrix::from_fn(n, n, |i, j| {
            let d = if i == j { 10.0 } else { 0.0 };
            c(d + ((i * 3 + j * 7) % 5) as f64 * 0.3, ((i + 2 * j) % 3) as f64 * 0.4 - 0.4)
        })
        .unwrap();
        let x0 = ComplexMatrix::from_fn(n, n, |i, j| c((i as f64 - j as f64) * 0.2, (i + j) as f64 * 0.1)).unwrap();
        let b = a.matmul(&x0);
        let x = solve_linear(&a, &b).unwrap();
        let err = x.sub(&x0).frobenius_norm() / x0.frobenius_norm();
        assert!(err < 1e-9, "relative error {err}");
    }

    #[test]
    fn singular_matrix_is_reported() {
        let a = ComplexMatrix::from_vec(2, 2, vec![c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)]).unwrap();
        match solve_linear(&a, &ComplexMatrix::identity(2)) {
            Err(Error::SingularMatrix { .. }) => {}
            other => panic!("expected SingularMatrix, got {other:?}"),
        }
    }

    #[test]
    fn adjoint_solve_consistent_with_direct() {
        let n = 7;
        let a = ComplexMatrix::from_fn(n, n, |i, j| {
            let d = if i == j { 6.0 } else { 0.0 };
            c(d + ((i + j) % 4) as f64 * 0.5, ((2 * i + j) % 5) as f64 * 0.3 - 0.6)
        })
        .unwrap();
        let lu = LuFactors::factor(&a).unwrap();
        let b: Vec<Complex64> = (0..n).map(|i| c(1.0 + i as f64, -0.5 * i as f64)).collect();
        let mut y = b.clone();
        lu.solve_adjoint_vec(&mut y);
        // check A* y = b
        let r = a.adjoint().matvec(&y);
        let err: f64 = r.iter().zip(&b).map(|(u, v)| (u - v).norm()).sum();
        assert!(err < 1e-10, "residual {err}");
    }

    #[test]
    fn blocked_path_matches_reference_on_larger_matrix() {
        // exercises the gemm trailing update (n > panel width)
        let n = 97;
        let a = ComplexMatrix::from_fn(n, n, |i, j| {
            let d = if i == j { 20.0 } else { 0.0 };
            c(
                d + (((i * 13 + j * 5) % 11) as f64 - 5.0) * 0.37,
                (((i * 7 + j * 3) % 9) as f64 - 4.0) * 0.29,
            )
        })
        .unwrap();
        let x0 = ComplexMatrix::from_fn(n, 3, |i, j| c((i % 7) as f64 * 0.1, (j as f64) - (i % 3) as f64)).unwrap();
        let b = a.matmul(&x0);
        let x = solve_linear(&a, &b).unwrap();
        let err = x.sub(&x0).frobenius_norm() / x0.frobenius_norm();
        assert!(err < 1e-10, "relative error {err}");
    }
}
