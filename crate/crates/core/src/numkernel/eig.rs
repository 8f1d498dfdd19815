use super::matrix::{vec_dot, vec_norm, ComplexMatrix};
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Eigenvalues (with algebraic multiplicity) and optional unit right eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenResult {
    pub values: Vec<Complex64>,
    pub vectors: Option<ComplexMatrix>,
}

impl EigenResult {
    /// Co-sort values (and vectors) by increasing real part, ties by imaginary part.
    pub fn sort_by_re(&mut self) {
        let mut idx: Vec<usize> = (0..self.values.len()).collect();
        idx.sort_by(|&a, &b| {
            let (x, y) = (self.values[a], self.values[b]);
            x.re.partial_cmp(&y.re)
                .unwrap()
                .then(x.im.partial_cmp(&y.im).unwrap())
        });
        self.values = idx.iter().map(|&i| self.values[i]).collect();
        if let Some(v) = &self.vectors {
            let n = v.rows();
            let mut out = ComplexMatrix::zeros(n, n);
            for (new_j, &old_j) in idx.iter().enumerate() {
                for i in 0..n {
                    out.set(i, new_j, v.get(i, old_j));
                }
            }
            self.vectors = Some(out);
        }
    }
}

/// All eigenvalues of `a`, Hessenberg reduction followed by shifted QR iteration.
pub fn eigenvalues(a: &ComplexMatrix) -> Result<EigenResult> {
    eigen_impl(a, false)
}

/// Eigenvalues plus unit right eigenvectors (inverse iteration on the
/// Hessenberg form, lifted back through the stored reflectors).
pub fn eigen_with_vectors(a: &ComplexMatrix) -> Result<EigenResult> {
    eigen_impl(a, true)
}

fn eigen_impl(a: &ComplexMatrix, want_vectors: bool) -> Result<EigenResult> {
    if !a.is_square() || a.rows() == 0 {
        return Err(Error::InvalidArgument(
            "eigenvalues need a square matrix of dimension >= 1".into(),
        ));
    }
    let n = a.rows();
    if n == 1 {
        let vectors = want_vectors.then(|| ComplexMatrix::identity(1));
        return Ok(EigenResult {
            values: vec![a.get(0, 0)],
            vectors,
        });
    }
    let (hess, reflectors) = hessenberg(a);
    let values = hessenberg_qr_values(hess.clone(), 30 * n)?;
    let vectors = if want_vectors {
        Some(eigenvectors_from_hessenberg(&hess, &reflectors, &values))
    } else {
        None
    };
    Ok(EigenResult { values, vectors })
}

/// Householder reduction to upper Hessenberg form. Returns the Hessenberg
/// matrix and the reflector vectors (unit norm, acting on rows k+1..n).
fn hessenberg(a: &ComplexMatrix) -> (ComplexMatrix, Vec<Vec<Complex64>>) {
    let n = a.rows();
    let mut h = a.clone();
    let mut reflectors: Vec<Vec<Complex64>> = Vec::with_capacity(n.saturating_sub(2));
    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let mut x = vec![Complex64::new(0.0, 0.0); m];
        for i in 0..m {
            x[i] = h.get(k + 1 + i, k);
        }
        let xnorm = vec_norm(&x);
        if xnorm < f64::MIN_POSITIVE {
            reflectors.push(Vec::new());
            continue;
        }
        // alpha = -(x0/|x0|)*|x| keeps v = x - alpha*e1 away from cancellation
        let phase = if x[0].norm() > 0.0 {
            x[0] / x[0].norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm = vec_norm(&v);
        if vnorm < f64::MIN_POSITIVE {
            reflectors.push(Vec::new());
            continue;
        }
        for e in v.iter_mut() {
            *e /= vnorm;
        }
        // rows k+1..n: A <- (I - 2vv*) A
        let mut w = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..m {
            let vi = v[i].conj();
            for (j, val) in h.row(k + 1 + i).iter().enumerate() {
                w[j] += vi * val;
            }
        }
        for i in 0..m {
            let f = 2.0 * v[i];
            for (j, wj) in w.iter().enumerate() {
                let cur = h.get(k + 1 + i, j);
                h.set(k + 1 + i, j, cur - f * wj);
            }
        }
        // cols k+1..n: A <- A (I - 2vv*)
        let mut u = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let row = h.row(i);
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..m {
                s += row[k + 1 + j] * v[j];
            }
            u[i] = s;
        }
        for i in 0..n {
            let f = 2.0 * u[i];
            for j in 0..m {
                let cur = h.get(i, k + 1 + j);
                h.set(i, k + 1 + j, cur - f * v[j].conj());
            }
        }
        reflectors.push(v);
    }
    // clear rounding noise below the subdiagonal
    for i in 2..n {
        for j in 0..i - 1 {
            h.set(i, j, Complex64::new(0.0, 0.0));
        }
    }
    (h, reflectors)
}

/// Complex Givens rotation: returns (c, s) with c real so that
/// c*a + s*b = r and -conj(s)*a + c*b = 0.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let an = a.norm();
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    let d = (an * an + bn * bn).sqrt();
    if an == 0.0 {
        // r = |b|, s = b.conj()/|b|
        return (0.0, b.conj() / bn);
    }
    let c = an / d;
    let s = (a / an) * b.conj() / d;
    (c, s)
}

/// Shifted QR iteration on a Hessenberg matrix, eigenvalues only.
fn hessenberg_qr_values(mut h: ComplexMatrix, budget: usize) -> Result<Vec<Complex64>> {
    let n = h.rows();
    let mut values = vec![Complex64::new(0.0, 0.0); n];
    let hnorm = h.frobenius_norm().max(f64::MIN_POSITIVE);
    let ulp = f64::EPSILON;
    let mut hi = n - 1;
    let mut total_iters = 0usize;
    let mut block_iters = 0usize;
    loop {
        // deflate negligible subdiagonals
        let mut l = hi;
        while l > 0 {
            let sub = h.get(l, l - 1).norm();
            let local = h.get(l - 1, l - 1).norm() + h.get(l, l).norm();
            let tol = ulp * if local > 0.0 { local } else { hnorm };
            if sub <= tol {
                h.set(l, l - 1, Complex64::new(0.0, 0.0));
                break;
            }
            l -= 1;
        }
        if l == hi {
            values[hi] = h.get(hi, hi);
            if hi == 0 {
                break;
            }
            hi -= 1;
            block_iters = 0;
            if hi == 0 {
                values[0] = h.get(0, 0);
                break;
            }
            continue;
        }
        if l == hi - 1 {
            let (e1, e2) = eig2(
                h.get(l, l),
                h.get(l, hi),
                h.get(hi, l),
                h.get(hi, hi),
            );
            values[l] = e1;
            values[hi] = e2;
            if l == 0 {
                break;
            }
            hi = l - 1;
            block_iters = 0;
            if hi == 0 {
                values[0] = h.get(0, 0);
                break;
            }
            continue;
        }

        total_iters += 1;
        block_iters += 1;
        if total_iters > budget {
            return Err(Error::NoConvergence(budget));
        }
        // Wilkinson shift from the trailing 2x2; exceptional shift when stuck
        let shift = if block_iters % 20 == 0 {
            h.get(hi, hi) + 0.75 * h.get(hi, hi - 1).norm()
        } else {
            let (e1, e2) = eig2(
                h.get(hi - 1, hi - 1),
                h.get(hi - 1, hi),
                h.get(hi, hi - 1),
                h.get(hi, hi),
            );
            let d = h.get(hi, hi);
            if (e1 - d).norm() <= (e2 - d).norm() {
                e1
            } else {
                e2
            }
        };

        // implicit single-shift bulge chase on rows/cols l..=hi
        let mut x = h.get(l, l) - shift;
        let mut y = h.get(l + 1, l);
        for k in l..hi {
            let (c, s) = givens(x, y);
            let sc = s.conj();
            // left rotation on rows k, k+1
            let jstart = k.saturating_sub(1).max(l);
            for j in jstart..=hi {
                let a = h.get(k, j);
                let b = h.get(k + 1, j);
                h.set(k, j, c * a + s * b);
                h.set(k + 1, j, -sc * a + c * b);
            }
            // right rotation on cols k, k+1
            let iend = (k + 2).min(hi);
            for i in l..=iend {
                let a = h.get(i, k);
                let b = h.get(i, k + 1);
                h.set(i, k, c * a + sc * b);
                h.set(i, k + 1, -s * a + c * b);
            }
            if k + 2 <= hi {
                x = h.get(k + 1, k);
                y = h.get(k + 2, k);
            }
        }
    }
    Ok(values)
}

/// Eigenvalues of [[a, b], [c, d]].
fn eig2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let half_tr = 0.5 * (a + d);
    let disc = (0.25 * (a - d) * (a - d) + b * c).sqrt();
    (half_tr + disc, half_tr - disc)
}

fn eigenvectors_from_hessenberg(
    hess: &ComplexMatrix,
    reflectors: &[Vec<Complex64>],
    values: &[Complex64],
) -> ComplexMatrix {
    let n = hess.rows();
    let hnorm = hess.frobenius_norm().max(f64::MIN_POSITIVE);
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (j, &lambda) in values.iter().enumerate() {
        let mut v = hessenberg_inverse_iteration(hess, lambda, hnorm);
        // lift w through Q = P_0 ... P_{n-3}
        for (k, refl) in reflectors.iter().enumerate().rev() {
            if refl.is_empty() {
                continue;
            }
            let seg: Vec<Complex64> = v[k + 1..k + 1 + refl.len()].to_vec();
            let coeff = 2.0 * vec_dot(refl, &seg);
            for (i, r) in refl.iter().enumerate() {
                v[k + 1 + i] -= coeff * r;
            }
        }
        let nv = vec_norm(&v);
        for (i, e) in v.iter().enumerate() {
            vectors.set(i, j, e / nv);
        }
    }
    vectors
}

/// A few rounds of inverse iteration with the shifted Hessenberg matrix.
fn hessenberg_inverse_iteration(h: &ComplexMatrix, lambda: Complex64, hnorm: f64) -> Vec<Complex64> {
    let n = h.rows();
    let mut best: Option<(f64, Vec<Complex64>)> = None;
    // nudge the shift if the factorization is exactly singular
    for attempt in 0..3 {
        let eps_shift = hnorm * 1e-13 * (attempt as f64 + if attempt == 0 { 0.0 } else { 1.0 });
        let shifted = h.add_scaled_identity(-(lambda + Complex64::new(eps_shift, eps_shift)));
        let factors = match HessLu::factor(shifted, hnorm) {
            Some(f) => f,
            None => continue,
        };
        let mut v = vec![Complex64::new(1.0, 0.0); n];
        let mut growth = 0.0f64;
        for _ in 0..3 {
            let nv = vec_norm(&v);
            for e in v.iter_mut() {
                *e /= nv;
            }
            factors.solve(&mut v);
            growth = vec_norm(&v);
        }
        let nv = vec_norm(&v);
        for e in v.iter_mut() {
            *e /= nv;
        }
        // larger growth means smaller residual for the iterate
        if best.as_ref().map_or(true, |(g, _)| growth > *g) {
            best = Some((growth, v));
        }
        if growth > 1.0 / (f64::EPSILON * 100.0) {
            break;
        }
    }
    best.map(|(_, v)| v)
        .unwrap_or_else(|| vec![Complex64::new(1.0, 0.0); n])
}

/// Hessenberg LU with adjacent-row pivoting: O(n^2) factor and solve.
struct HessLu {
    u: ComplexMatrix,
    mult: Vec<Complex64>,
    swapped: Vec<bool>,
}

impl HessLu {
    fn factor(mut m: ComplexMatrix, scale: f64) -> Option<HessLu> {
        let n = m.rows();
        let mut mult = vec![Complex64::new(0.0, 0.0); n.saturating_sub(1)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        let floor = scale * 1e-300_f64.max(f64::MIN_POSITIVE);
        for k in 0..n.saturating_sub(1) {
            let (a, b) = (m.get(k, k), m.get(k + 1, k));
            if b.norm() > a.norm() {
                swapped[k] = true;
                for j in k..n {
                    let (x, y) = (m.get(k, j), m.get(k + 1, j));
                    m.set(k, j, y);
                    m.set(k + 1, j, x);
                }
            }
            let pivot = m.get(k, k);
            let pivot = if pivot.norm() < floor {
                Complex64::new(scale * f64::EPSILON, 0.0)
            } else {
                pivot
            };
            m.set(k, k, pivot);
            let l = m.get(k + 1, k) / pivot;
            mult[k] = l;
            for j in k + 1..n {
                let v = m.get(k + 1, j) - l * m.get(k, j);
                m.set(k + 1, j, v);
            }
            m.set(k + 1, k, Complex64::new(0.0, 0.0));
        }
        if n > 0 && m.get(n - 1, n - 1).norm() < floor {
            m.set(n - 1, n - 1, Complex64::new(scale * f64::EPSILON, 0.0));
        }
        Some(HessLu {
            u: m,
            mult,
            swapped,
        })
    }

    fn solve(&self, b: &mut [Complex64]) {
        let n = self.u.rows();
        for k in 0..n.saturating_sub(1) {
            if self.swapped[k] {
                b.swap(k, k + 1);
            }
            let l = self.mult[k];
            let bk = b[k];
            b[k + 1] -= l * bk;
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for j in i + 1..n {
                s -= self.u.get(i, j) * b[j];
            }
            b[i] = s / self.u.get(i, i);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted_re(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
        v
    }

    #[test]
    fn diagonal_matrix_eigenvalues() {
        let a = ComplexMatrix::from_diag(&[c(1.0, 0.0), c(2.0, 3.0)]);
        let r = eigenvalues(&a).unwrap();
        let vals = sorted_re(r.values);
        assert!((vals[0] - c(1.0, 0.0)).norm() < 1e-12);
        assert!((vals[1] - c(2.0, 3.0)).norm() < 1e-12);
    }

    #[test]
    fn nilpotent_jordan_block() {
        let a = ComplexMatrix::from_vec(2, 2, vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        let r = eigenvalues(&a).unwrap();
        assert_eq!(r.values.len(), 2);
        for v in r.values {
            assert!(v.norm() < 1e-12);
        }
    }

    #[test]
    fn companion_matrix_roots() {
        // companion of z^2 - 3z + 2 = (z-1)(z-2)
        let a = ComplexMatrix::from_vec(2, 2, vec![c(3.0, 0.0), c(-2.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let r = eigenvalues(&a).unwrap();
        let vals = sorted_re(r.values);
        assert!((vals[0] - c(1.0, 0.0)).norm() < 1e-10);
        assert!((vals[1] - c(2.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn eigenvectors_have_small_residual_and_unit_norm() {
        let n = 12;
        let a = ComplexMatrix::from_fn(n, n, |i, j| {
            c(
                (((i * 7 + j * 3) % 11) as f64 - 5.0) * 0.4 + if i == j { 3.0 * i as f64 } else { 0.0 },
                (((i * 5 + j * 2) % 7) as f64 - 3.0) * 0.3,
            )
        })
        .unwrap();
        let r = eigen_with_vectors(&a).unwrap();
        let vv = r.vectors.as_ref().unwrap();
        let anorm = a.frobenius_norm();
        for (j, &lambda) in r.values.iter().enumerate() {
            let v = vv.column(j);
            assert!((vec_norm(&v) - 1.0).abs() < 1e-10);
            let av = a.matvec(&v);
            let res: f64 = av
                .iter()
                .zip(&v)
                .map(|(x, y)| (x - lambda * y).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(res <= 1e-8 * anorm, "residual {res} for lambda {lambda}");
        }
    }

    #[test]
    fn triangular_matrix_keeps_diagonal() {
        let n = 6;
        let a = ComplexMatrix::from_fn(n, n, |i, j| {
            if j >= i {
                c((i + 1) as f64, (j as f64) - 2.0)
            } else {
                c(0.0, 0.0)
            }
        })
        .unwrap();
        let r = eigenvalues(&a).unwrap();
        let mut vals = sorted_re(r.values);
        let mut expect: Vec<Complex64> = (0..n).map(|i| a.get(i, i)).collect();
        expect.sort_by(|x, y| x.re.partial_cmp(&y.re).unwrap());
        for (v, e) in vals.drain(..).zip(expect) {
            assert!((v - e).norm() < 1e-9, "{v} vs {e}");
        }
    }
}
