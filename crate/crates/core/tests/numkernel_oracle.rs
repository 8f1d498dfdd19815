//! Cross-checks of the linear-algebra kernel against independent oracles.

use num_complex::Complex64;
use proptest::prelude::*;
use pseudospec::numkernel::{
    eigen_with_vectors, eigenvalues, matrix_exp, operator_norm, smallest_singular_value,
    solve_linear, ComplexMatrix,
};
use pseudospec_oracles::jacobi_svd_values;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
    .unwrap()
}

#[test]
fn sigma_min_matches_jacobi_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for trial in 0..60 {
        let n = 2 + (trial % 7);
        let a = random_matrix(&mut rng, n);
        let mine = smallest_singular_value(&a);
        let sv = jacobi_svd_values(n, n, a.data());
        let oracle = *sv.last().unwrap();
        let tol = 1e-8 * oracle.max(1e-30);
        assert!(
            (mine - oracle).abs() <= tol,
            "trial {trial}, n {n}: {mine} vs oracle {oracle}"
        );
    }
}

#[test]
fn operator_norm_matches_jacobi_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for trial in 0..60 {
        let n = 2 + (trial % 7);
        let a = random_matrix(&mut rng, n);
        let mine = operator_norm(&a);
        let oracle = jacobi_svd_values(n, n, a.data())[0];
        assert!(
            (mine - oracle).abs() <= 1e-8 * oracle,
            "trial {trial}: {mine} vs {oracle}"
        );
    }
}

#[test]
fn sigma_min_vanishes_exactly_at_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for trial in 0..25 {
        let n = 2 + (trial % 7);
        let a = random_matrix(&mut rng, n);
        let norm = operator_norm(&a);
        let eig = eigenvalues(&a).unwrap();
        for &lambda in &eig.values {
            let s = smallest_singular_value(&a.shifted_from(lambda));
            assert!(
                s <= 1e-8 * norm,
                "sigma_min {s} at eigenvalue {lambda}, norm {norm}"
            );
        }
        // far from the spectrum the resolvent argument is well conditioned
        let z = Complex64::new(3.0 * norm + 1.0, 0.0);
        let s = smallest_singular_value(&a.shifted_from(z));
        assert!(s > 1e-8 * norm);
    }
}

#[test]
fn eigenvector_residuals_within_contract() {
    let mut rng = ChaCha8Rng::seed_from_u64(45);
    for _ in 0..10 {
        let n = 3 + (rng.gen::<u32>() % 6) as usize;
        let a = random_matrix(&mut rng, n);
        let r = eigen_with_vectors(&a).unwrap();
        let v = r.vectors.unwrap();
        let norm = operator_norm(&a);
        for (j, &lambda) in r.values.iter().enumerate() {
            let col = v.column(j);
            let av = a.matvec(&col);
            let res: f64 = av
                .iter()
                .zip(&col)
                .map(|(x, y)| (x - lambda * y).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(res <= 1e-8 * norm, "residual {res} vs norm {norm}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn solve_multiply_back_residual(seed in 0u64..2000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 2 + (seed % 6) as usize;
        // diagonally dominated to keep condition numbers moderate
        let a = ComplexMatrix::from_fn(n, n, |i, j| {
            let base = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            if i == j { base + Complex64::new(4.0, 0.0) } else { base }
        }).unwrap();
        let b = ComplexMatrix::from_fn(n, 2, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        }).unwrap();
        let x = solve_linear(&a, &b).unwrap();
        let res = a.matmul(&x).sub(&b).frobenius_norm();
        prop_assert!(res <= 1e-9 * b.frobenius_norm().max(1e-12));
    }

    #[test]
    fn matrix_exp_semigroup_property(seed in 0u64..2000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 2 + (seed % 5) as usize;
        let a = ComplexMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        }).unwrap();
        let s = rng.gen_range(0.1..2.0);
        let t = rng.gen_range(0.1..2.0);
        let whole = matrix_exp(&a, s + t).unwrap();
        let parts = matrix_exp(&a, s).unwrap().matmul(&matrix_exp(&a, t).unwrap());
        let rel = whole.sub(&parts).frobenius_norm() / whole.frobenius_norm();
        prop_assert!(rel <= 1e-8, "relative defect {rel}");
    }
}
