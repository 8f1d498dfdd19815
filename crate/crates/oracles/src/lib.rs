//! Independent reference routines for cross-checking the main library.
//!
//! Nothing here shares code with the implementation paths it checks: the SVD
//! is one-sided Jacobi (the library uses inverse iteration and bidiagonal QR),
//! quadrature is Gauss-Hermite (the library assembles matrices by ladder
//! algebra), and the maximizer is golden-section search.

use num_complex::Complex64;

/// All singular values of a dense complex matrix by one-sided Jacobi
/// rotations on the columns. Slow and simple; test use only.
pub fn jacobi_svd_values(rows: usize, cols: usize, data: &[Complex64]) -> Vec<f64> {
    assert_eq!(data.len(), rows * cols);
    // column-major copy for cheap column ops
    let mut a: Vec<Vec<Complex64>> = (0..cols)
        .map(|j| (0..rows).map(|i| data[i * cols + j]).collect())
        .collect();
    let n = cols;
    let tol = 1e-14;
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                let app: f64 = a[p].iter().map(|z| z.norm_sqr()).sum();
                let aqq: f64 = a[q].iter().map(|z| z.norm_sqr()).sum();
                let apq: Complex64 = a[p]
                    .iter()
                    .zip(a[q].iter())
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                let mag = apq.norm();
                if mag <= tol * (app * aqq).sqrt().max(f64::MIN_POSITIVE) {
                    continue;
                }
                off = off.max(mag / (app * aqq).sqrt().max(f64::MIN_POSITIVE));
                // rotate columns p, q to annihilate the off-diagonal Gram entry:
                // with apq = |apq| e^{i phi}, the rotation
                //   [cos t,  -sin t e^{i phi}; sin t e^{-i phi}, cos t]
                // applied on the right zeroes Re/Im of the new Gram entry.
                let phi = apq.arg();
                let theta = 0.5 * (2.0 * mag).atan2(aqq - app);
                let (s, c) = theta.sin_cos();
                let eip = Complex64::from_polar(1.0, phi);
                for i in 0..rows {
                    let cp = a[p][i];
                    let cq = a[q][i];
                    a[p][i] = c * cp - s * (eip.conj() * cq);
                    a[q][i] = s * (eip * cp) + c * cq;
                }
            }
        }
        if off < tol {
            break;
        }
    }
    let mut sv: Vec<f64> = (0..n)
        .map(|j| a[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|x, y| y.partial_cmp(x).unwrap());
    sv
}

/// Singular values of [[a, b], [c, d]] in closed form (largest first).
pub fn singular_values_2x2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (f64, f64) {
    // eigenvalues of the 2x2 Gram matrix
    let g11 = a.norm_sqr() + c.norm_sqr();
    let g22 = b.norm_sqr() + d.norm_sqr();
    let g12 = a.conj() * b + c.conj() * d;
    let tr = g11 + g22;
    let det = g11 * g22 - g12.norm_sqr();
    let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
    let l1 = tr / 2.0 + disc;
    let l2 = (tr / 2.0 - disc).max(0.0);
    (l1.sqrt(), l2.sqrt())
}

/// Nodes and weights of n-point Gauss-Hermite quadrature (weight e^{-x^2}),
/// by Newton iteration on the recurrence-evaluated Hermite polynomial.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0f64; n];
    let mut weights = vec![0.0f64; n];
    let m = (n + 1) / 2;
    let mut z = 0.0f64;
    for i in 0..m {
        // initial guesses from standard asymptotics
        z = match i {
            0 => (2.0 * n as f64 + 1.0).sqrt() - 1.85575 * (2.0 * n as f64 + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * (n as f64).powf(0.426) / z,
            2 => 1.86 * z - 0.86 * nodes[0],
            3 => 1.91 * z - 0.91 * nodes[1],
            _ => 2.0 * z - nodes[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            // physicists' Hermite via the orthonormal recurrence
            let mut p1 = std::f64::consts::PI.powf(-0.25);
            let mut p2 = 0.0f64;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = z * (2.0 / (j as f64 + 1.0)).sqrt() * p2
                    - (j as f64 / (j as f64 + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * n as f64).sqrt() * p2;
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = z;
        nodes[n - 1 - i] = -z;
        weights[i] = 2.0 / (pp * pp);
        weights[n - 1 - i] = weights[i];
    }
    // ascending order
    nodes.reverse();
    weights.reverse();
    (nodes, weights)
}

/// Orthonormal Hermite function h_k(x) = H_k(x) e^{-x^2/2} / sqrt(2^k k! sqrt(pi)).
pub fn hermite_function(k: usize, x: f64) -> f64 {
    let mut h0 = std::f64::consts::PI.powf(-0.25) * (-0.5 * x * x).exp();
    if k == 0 {
        return h0;
    }
    let mut h1 = (2.0f64).sqrt() * x * h0;
    for j in 1..k {
        let h2 = (2.0 / (j as f64 + 1.0)).sqrt() * x * h1 - (j as f64 / (j as f64 + 1.0)).sqrt() * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

/// Golden-section search for the maximum of a unimodal function on [a, b].
pub fn golden_section_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Exact action of the Dirichlet discrete-Laplacian heat semigroup on a grid
/// function: eigen-expansion in the discrete sine basis (O(N^2), test use).
pub fn discrete_heat_evolution(values: &[f64], l: f64, t: f64) -> Vec<f64> {
    let n = values.len();
    let h = 2.0 * l / (n as f64 + 1.0);
    let mut coef = vec![0.0f64; n];
    for k in 1..=n {
        let mut s = 0.0;
        for (j, v) in values.iter().enumerate() {
            s += v * (k as f64 * (j as f64 + 1.0) * std::f64::consts::PI / (n as f64 + 1.0)).sin();
        }
        coef[k - 1] = s * 2.0 / (n as f64 + 1.0);
    }
    let mut out = vec![0.0f64; n];
    for k in 1..=n {
        let lambda = 2.0 / (h * h)
            * (1.0 - (k as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos());
        let decay = (-lambda * t).exp();
        for (j, o) in out.iter_mut().enumerate() {
            *o += coef[k - 1]
                * decay
                * (k as f64 * (j as f64 + 1.0) * std::f64::consts::PI / (n as f64 + 1.0)).sin();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_matches_closed_form_2x2() {
        let a = Complex64::new(1.0, 0.0);
        let b = Complex64::new(-1.0, 0.0);
        let z = Complex64::new(0.0, 0.0);
        let sv = jacobi_svd_values(2, 2, &[a, b, z, z]);
        let (s1, s2) = singular_values_2x2(a, b, z, z);
        assert!((sv[0] - s1).abs() < 1e-12 && (sv[0] - 2.0f64.sqrt()).abs() < 1e-12);
        assert!((sv[1] - s2).abs() < 1e-12);
    }

    #[test]
    fn gauss_hermite_integrates_polynomials() {
        let (x, w) = gauss_hermite(8);
        // integral of x^2 e^{-x^2} = sqrt(pi)/2
        let s: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi * xi).sum();
        assert!((s - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-12);
        // integral of e^{-x^2} = sqrt(pi)
        let s0: f64 = w.iter().sum();
        assert!((s0 - std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn hermite_functions_are_orthonormal_under_gh() {
        // integral h_j h_k dx via GH quadrature with the e^{x^2} reweighting
        let (x, w) = gauss_hermite(40);
        for (j, k, expect) in [(0usize, 0usize, 1.0), (1, 1, 1.0), (0, 2, 0.0), (3, 3, 1.0)] {
            let s: f64 = x
                .iter()
                .zip(&w)
                .map(|(xi, wi)| wi * (xi * xi).exp() * hermite_function(j, *xi) * hermite_function(k, *xi))
                .sum();
            assert!((s - expect).abs() < 1e-9, "({j},{k}) -> {s}");
        }
    }

    #[test]
    fn golden_section_finds_quadratic_max() {
        let (x, v) = golden_section_max(|t| 1.0 - (t - 0.7) * (t - 0.7), 0.0, 2.0, 1e-12);
        assert!((x - 0.7).abs() < 1e-6);
        assert!((v - 1.0).abs() < 1e-10);
    }
}
