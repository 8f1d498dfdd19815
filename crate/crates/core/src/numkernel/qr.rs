use super::matrix::{vec_norm, ComplexMatrix};
use num_complex::Complex64;

/// Column-pivoted Householder QR, used for rank-revealing range extraction.
pub struct PivotedQr {
    /// Orthonormal columns (full square Q).
    pub q: ComplexMatrix,
    /// Upper triangular factor after column pivoting.
    pub r: ComplexMatrix,
    /// Column permutation: column j of the factored matrix is column perm[j]
    /// of the input.
    pub perm: Vec<usize>,
}

impl PivotedQr {
    pub fn factor(a: &ComplexMatrix) -> Self {
        let (m, n) = (a.rows(), a.cols());
        let mut r = a.clone();
        let mut q = ComplexMatrix::identity(m);
        let mut perm: Vec<usize> = (0..n).collect();
        let mut col_norms: Vec<f64> = (0..n).map(|j| vec_norm(&r.column(j))).collect();
        let steps = m.min(n);
        for k in 0..steps {
            // pivot: bring the largest remaining column to position k
            let (mut jmax, mut vmax) = (k, -1.0f64);
            for j in k..n {
                // recompute lazily; downdating is cheaper but this is exact
                let nrm: f64 = (k..m).map(|i| r.get(i, j).norm_sqr()).sum::<f64>().sqrt();
                col_norms[j] = nrm;
                if nrm > vmax {
                    vmax = nrm;
                    jmax = j;
                }
            }
            if jmax != k {
                for i in 0..m {
                    let tmp = r.get(i, k);
                    r.set(i, k, r.get(i, jmax));
                    r.set(i, jmax, tmp);
                }
                perm.swap(k, jmax);
                col_norms.swap(k, jmax);
            }
            if vmax == 0.0 {
                break;
            }
            let mut v: Vec<Complex64> = (k..m).map(|i| r.get(i, k)).collect();
            let xn = vec_norm(&v);
            if xn == 0.0 {
                continue;
            }
            let phase = if v[0].norm() > 0.0 {
                v[0] / v[0].norm()
            } else {
                Complex64::new(1.0, 0.0)
            };
            let alpha = -phase * xn;
            v[0] -= alpha;
            let vn = vec_norm(&v);
            if vn == 0.0 {
                continue;
            }
            for e in v.iter_mut() {
                *e /= vn;
            }
            // R <- (I - 2vv*) R on rows k..m
            for j in k..n {
                let mut s = Complex64::new(0.0, 0.0);
                for (i, vi) in v.iter().enumerate() {
                    s += vi.conj() * r.get(k + i, j);
                }
                let s = 2.0 * s;
                for (i, vi) in v.iter().enumerate() {
                    let cur = r.get(k + i, j);
                    r.set(k + i, j, cur - s * vi);
                }
            }
            // Q <- Q (I - 2vv*) on columns k..m
            for i in 0..m {
                let mut s = Complex64::new(0.0, 0.0);
                for (jj, vj) in v.iter().enumerate() {
                    s += q.get(i, k + jj) * vj;
                }
                let s = 2.0 * s;
                for (jj, vj) in v.iter().enumerate() {
                    let cur = q.get(i, k + jj);
                    q.set(i, k + jj, cur - s * vj.conj());
                }
            }
            for i in k + 1..m {
                r.set(i, k, Complex64::new(0.0, 0.0));
            }
        }
        Self { q, r, perm }
    }

    /// Number of diagonal entries of R above `tol` in magnitude.
    pub fn rank(&self, tol: f64) -> usize {
        let k = self.r.rows().min(self.r.cols());
        (0..k).take_while(|&i| self.r.get(i, i).norm() > tol).count()
    }

    /// Magnitudes of the R diagonal (nonincreasing by pivoting).
    pub fn diag_magnitudes(&self) -> Vec<f64> {
        let k = self.r.rows().min(self.r.cols());
        (0..k).map(|i| self.r.get(i, i).norm()).collect()
    }

    /// First `count` columns of Q: an orthonormal basis of the dominant range.
    pub fn range_basis(&self, count: usize) -> ComplexMatrix {
        let m = self.q.rows();
        let mut out = ComplexMatrix::zeros(m, count);
        for j in 0..count {
            for i in 0..m {
                out.set(i, j, self.q.get(i, j));
            }
        }
        out
    }
}
