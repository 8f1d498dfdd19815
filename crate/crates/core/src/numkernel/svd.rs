use super::lu::LuFactors;
use super::matrix::{vec_norm, ComplexMatrix};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SIGMA_MIN_MAX_ITERS: usize = 80;
const LANCZOS_MAX_ITERS: usize = 320;

/// Smallest singular value via inverse iteration on `A* A` (two triangular
/// solve pairs per step, reusing one LU of `A`). Falls back to a full
/// bidiagonalization when the iteration stagnates. Returns 0 for a matrix
/// that is numerically singular at the LU pivot threshold.
///
/// Near the double-precision floor (sigma below ~1e-13 * |A|) the relative
/// accuracy degrades to the usual u*kappa limit of LU-based methods.
pub fn smallest_singular_value(a: &ComplexMatrix) -> f64 {
    assert!(a.is_square(), "smallest_singular_value needs a square matrix");
    let n = a.rows();
    if n == 0 {
        return 0.0;
    }
    let lu = match LuFactors::factor(a) {
        Ok(f) => f,
        Err(_) => return 0.0,
    };
    let mut v: Vec<Complex64> = vec![Complex64::new(1.0 / (n as f64).sqrt(), 0.0); n];
    let mut sigma_prev = f64::INFINITY;
    let mut hits = 0usize;
    for iter in 0..SIGMA_MIN_MAX_ITERS {
        let mut w = v.clone();
        lu.solve_adjoint_vec(&mut w);
        let mut u = w;
        lu.solve_vec(&mut u);
        let un = vec_norm(&u);
        if !un.is_finite() || un == 0.0 {
            // solves blew up: matrix is effectively singular at this scale
            return 0.0;
        }
        for e in u.iter_mut() {
            *e /= un;
        }
        v = u;
        let sigma = vec_norm(&a.matvec(&v));
        if (sigma - sigma_prev).abs() <= 1e-9 * sigma.max(f64::MIN_POSITIVE) {
            hits += 1;
            if hits >= 2 && iter >= 3 {
                return sigma;
            }
        } else {
            hits = 0;
        }
        sigma_prev = sigma;
    }
    // stagnation: full bidiagonalization fallback
    let (mut d, mut e) = bidiagonalize_values(a);
    bidiagonal_svd_values(&mut d, &mut e);
    d.into_iter().fold(f64::INFINITY, f64::min).max(0.0)
}

/// Largest singular value by Golub-Kahan-Lanczos bidiagonalization with full
/// reorthogonalization. Deterministic all-ones start; seeded random restart
/// when the start vector is annihilated.
pub fn operator_norm(a: &ComplexMatrix) -> f64 {
    let (m, n) = (a.rows(), a.cols());
    if m == 0 || n == 0 || a.max_abs() == 0.0 {
        return 0.0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut start: Vec<Complex64> = vec![Complex64::new(1.0 / (n as f64).sqrt(), 0.0); n];
    for _restart in 0..4 {
        if let Some(sigma) = lanczos_top_sigma(a, &start) {
            return sigma;
        }
        start = (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let sn = vec_norm(&start);
        for e in start.iter_mut() {
            *e /= sn;
        }
    }
    0.0
}

fn lanczos_top_sigma(a: &ComplexMatrix, start: &[Complex64]) -> Option<f64> {
    let n = a.cols();
    let kmax = LANCZOS_MAX_ITERS.min(n.max(1));
    let mut vs: Vec<Vec<Complex64>> = vec![start.to_vec()];
    let mut us: Vec<Vec<Complex64>> = Vec::new();
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut sigma_prev = 0.0f64;
    let mut hits = 0usize;

    let mut u = a.matvec(vs.last().unwrap());
    let alpha = vec_norm(&u);
    if alpha == 0.0 {
        return None; // start vector in the nullspace
    }
    for e in u.iter_mut() {
        *e /= alpha;
    }
    alphas.push(alpha);
    us.push(u);

    for k in 0..kmax {
        // w = A* u_k - alpha_k v_k, reorthogonalized against V
        let mut w = a.adjoint_matvec(&us[k]);
        for (i, e) in vs[k].iter().enumerate() {
            w[i] -= alphas[k] * e;
        }
        reorthogonalize(&mut w, &vs);
        let beta = vec_norm(&w);

        // Ritz value from the small bidiagonal
        let sigma = sigma_from(&alphas, &betas);
        if (sigma - sigma_prev).abs() <= 1e-11 * sigma.max(f64::MIN_POSITIVE) {
            hits += 1;
            if hits >= 2 {
                return Some(sigma);
            }
        } else {
            hits = 0;
        }
        sigma_prev = sigma;

        if beta <= 1e-14 * alphas[0].max(1.0) {
            return Some(sigma); // exact invariant subspace
        }
        for e in w.iter_mut() {
            *e /= beta;
        }
        betas.push(beta);
        vs.push(w);

        let mut unew = a.matvec(vs.last().unwrap());
        for (i, e) in us[k].iter().enumerate() {
            unew[i] -= beta * e;
        }
        reorthogonalize(&mut unew, &us);
        let alpha = vec_norm(&unew);
        if alpha <= 1e-14 * alphas[0].max(1.0) {
            return Some(sigma_prev.max(sigma_from(&alphas, &betas)));
        }
        for e in unew.iter_mut() {
            *e /= alpha;
        }
        alphas.push(alpha);
        us.push(unew);
    }
    Some(sigma_from(&alphas, &betas))
}

/// Largest singular value of the Lanczos bidiagonal. Handles both the square
/// stage (betas one shorter than alphas) and the stage with a trailing beta
/// (equal lengths) by a Givens reduction to square upper-bidiagonal form.
fn sigma_from(alphas: &[f64], betas: &[f64]) -> f64 {
    let m = alphas.len();
    let (mut d, mut e) = if betas.len() + 1 == m {
        (alphas.to_vec(), betas.to_vec())
    } else {
        debug_assert_eq!(betas.len(), m);
        // treat (alphas, betas) as a lower bidiagonal with one extra row and
        // fold the subdiagonal away without changing singular values
        let mut d = alphas.to_vec();
        let mut e = vec![0.0f64; m.saturating_sub(1)];
        for i in 0..betas.len() {
            let r = d[i].hypot(betas[i]);
            if r == 0.0 {
                continue;
            }
            let c = d[i] / r;
            let s = betas[i] / r;
            d[i] = r;
            if i + 1 < m {
                e[i] = s * d[i + 1];
                d[i + 1] *= c;
            }
        }
        (d, e)
    };
    bidiagonal_svd_values(&mut d, &mut e);
    d.into_iter().fold(0.0f64, f64::max)
}

/// Two-pass modified Gram-Schmidt against the stored basis.
fn reorthogonalize(w: &mut [Complex64], basis: &[Vec<Complex64>]) {
    for _ in 0..2 {
        for b in basis {
            let c: Complex64 = b.iter().zip(w.iter()).map(|(x, y)| x.conj() * y).sum();
            if c.norm_sqr() > 0.0 {
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= c * bi;
                }
            }
        }
    }
}

/// Householder bidiagonalization, values only. Returns the moduli of the
/// diagonal and superdiagonal; phase factors drop out of the singular values.
pub fn bidiagonalize_values(a: &ComplexMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = a.rows();
    assert!(a.is_square());
    let mut m = a.clone();
    let mut d = vec![0.0f64; n];
    let mut e = vec![0.0f64; n.saturating_sub(1)];
    for k in 0..n {
        // left reflector: zero below the diagonal in column k
        let mut x: Vec<Complex64> = (k..n).map(|i| m.get(i, k)).collect();
        let xn = vec_norm(&x);
        if xn > 0.0 {
            let phase = if x[0].norm() > 0.0 {
                x[0] / x[0].norm()
            } else {
                Complex64::new(1.0, 0.0)
            };
            let alpha = -phase * xn;
            x[0] -= alpha;
            let vn = vec_norm(&x);
            if vn > 0.0 {
                for el in x.iter_mut() {
                    *el /= vn;
                }
                for j in k..n {
                    let mut s = Complex64::new(0.0, 0.0);
                    for (i, v) in x.iter().enumerate() {
                        s += v.conj() * m.get(k + i, j);
                    }
                    let s = 2.0 * s;
                    for (i, v) in x.iter().enumerate() {
                        let cur = m.get(k + i, j);
                        m.set(k + i, j, cur - s * v);
                    }
                }
            }
        }
        d[k] = m.get(k, k).norm();
        if k + 2 <= n {
            // right reflector: zero to the right of the superdiagonal in row k.
            // Right-multiplication by I - 2vv* acts on the transposed row as a
            // left reflector with conj(v), so v is the conjugated Householder
            // vector of the row.
            let mut y: Vec<Complex64> = (k + 1..n).map(|j| m.get(k, j)).collect();
            let yn = vec_norm(&y);
            if yn > 0.0 {
                let phase = if y[0].norm() > 0.0 {
                    y[0] / y[0].norm()
                } else {
                    Complex64::new(1.0, 0.0)
                };
                let alpha = -phase * yn;
                y[0] -= alpha;
                let vn = vec_norm(&y);
                if vn > 0.0 {
                    let v: Vec<Complex64> = y.iter().map(|z| (z / vn).conj()).collect();
                    for i in k..n {
                        let mut s = Complex64::new(0.0, 0.0);
                        for (j, vj) in v.iter().enumerate() {
                            s += m.get(i, k + 1 + j) * vj;
                        }
                        let s = 2.0 * s;
                        for (j, vj) in v.iter().enumerate() {
                            let cur = m.get(i, k + 1 + j);
                            m.set(i, k + 1 + j, cur - s * vj.conj());
                        }
                    }
                }
            }
            e[k] = m.get(k, k + 1).norm();
        }
    }
    (d, e)
}

/// Singular values of a real bidiagonal matrix (diagonal `d`, superdiagonal
/// `e`), implicit-shift QR. On return `d` holds the singular values.
pub fn bidiagonal_svd_values(d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    if n == 0 {
        return;
    }
    debug_assert_eq!(e.len(), n.saturating_sub(1));
    let eps = f64::EPSILON;
    let tiny = f64::MIN_POSITIVE / eps;
    let mut p = n;
    let mut iter = 0usize;
    let max_iter = 75 * n.max(4);
    while p > 0 {
        if iter > max_iter {
            break; // accept current values; deflation has stalled
        }
        let mut k = p as isize - 2;
        while k >= 0 {
            let ku = k as usize;
            if e[ku].abs() <= tiny + eps * (d[ku].abs() + d[ku + 1].abs()) {
                e[ku] = 0.0;
                break;
            }
            k -= 1;
        }
        let kase;
        let mut ks_hold = 0usize;
        if k == p as isize - 2 {
            kase = 4;
        } else {
            let mut ks = p as isize - 1;
            while ks > k {
                let ksu = ks as usize;
                let t = if ks != p as isize - 1 { e[ksu].abs() } else { 0.0 }
                    + if ks != k + 1 { e[ksu - 1].abs() } else { 0.0 };
                if d[ksu].abs() <= tiny + eps * t {
                    d[ksu] = 0.0;
                    break;
                }
                ks -= 1;
            }
            if ks == k {
                kase = 3;
            } else if ks == p as isize - 1 {
                kase = 1;
            } else {
                kase = 2;
                ks_hold = ks as usize;
            }
        }
        let k = (k + 1) as usize;

        match kase {
            1 => {
                // annihilate e[p-2] when d[p-1] vanished
                let mut f = e[p - 2];
                e[p - 2] = 0.0;
                for j in (k..p - 1).rev() {
                    let t = d[j].hypot(f);
                    let cs = d[j] / t;
                    let sn = f / t;
                    d[j] = t;
                    if j != k {
                        f = -sn * e[j - 1];
                        e[j - 1] *= cs;
                    }
                }
            }
            2 => {
                // annihilate e[ks-1] when d[ks] vanished
                let ks = ks_hold;
                let mut f = e[ks - 1];
                e[ks - 1] = 0.0;
                for j in ks..p {
                    let t = d[j].hypot(f);
                    let cs = d[j] / t;
                    let sn = f / t;
                    d[j] = t;
                    f = -sn * e[j];
                    e[j] *= cs;
                }
            }
            3 => {
                // one implicit-shift QR sweep on the block [k, p-1]
                iter += 1;
                let scale = d[p - 1]
                    .abs()
                    .max(d[p - 2].abs())
                    .max(e[p - 2].abs())
                    .max(d[k].abs())
                    .max(e[k].abs())
                    .max(f64::MIN_POSITIVE);
                let sp = d[p - 1] / scale;
                let spm1 = d[p - 2] / scale;
                let epm1 = e[p - 2] / scale;
                let sk = d[k] / scale;
                let ek = e[k] / scale;
                let b = ((spm1 + sp) * (spm1 - sp) + epm1 * epm1) / 2.0;
                let c = (sp * epm1) * (sp * epm1);
                let shift = if b != 0.0 || c != 0.0 {
                    let mut s = (b * b + c).sqrt();
                    if b < 0.0 {
                        s = -s;
                    }
                    c / (b + s)
                } else {
                    0.0
                };
                let mut f = (sk + sp) * (sk - sp) + shift;
                let mut g = sk * ek;
                for j in k..p - 1 {
                    let t = f.hypot(g);
                    let cs = f / t;
                    let sn = g / t;
                    if j != k {
                        e[j - 1] = t;
                    }
                    f = cs * d[j] + sn * e[j];
                    e[j] = cs * e[j] - sn * d[j];
                    g = sn * d[j + 1];
                    d[j + 1] *= cs;
                    let t2 = f.hypot(g);
                    let cs2 = f / t2;
                    let sn2 = g / t2;
                    d[j] = t2;
                    f = cs2 * e[j] + sn2 * d[j + 1];
                    d[j + 1] = -sn2 * e[j] + cs2 * d[j + 1];
                    if j < p - 2 {
                        g = sn2 * e[j + 1];
                        e[j + 1] *= cs2;
                    }
                }
                e[p - 2] = f;
            }
            _ => {
                d[p - 1] = d[p - 1].abs();
                p -= 1;
            }
        }
    }
    for v in d.iter_mut() {
        *v = v.abs();
    }
}
