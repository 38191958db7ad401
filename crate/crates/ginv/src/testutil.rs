//! Small helpers shared by the unit tests.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::numkit::{block_2x2, svd, ComplexMatrix, Tolerance};

/// Dense complex matrix with entries uniform in `[-2, 2]^2`, seeded.
pub fn random_matrix(rows: usize, cols: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ComplexMatrix::new(
        rows,
        cols,
        (0..rows * cols)
            .map(|_| Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
            .collect(),
    )
    .unwrap()
}

/// Random unitary from the left factor of a generic matrix's SVD.
pub fn random_unitary(n: usize, seed: u64) -> ComplexMatrix {
    if n == 0 {
        return ComplexMatrix::zeros(0, 0);
    }
    svd(&random_matrix(n, n, seed), &Tolerance::default())
        .unwrap()
        .u
}

/// Random group matrix of size `n` and rank `r`, built in the block shape
/// `u [[t, s], [0, 0]] u^*` with `t` nonsingular.
pub fn group_matrix(n: usize, r: usize, seed: u64) -> ComplexMatrix {
    assert!(r <= n);
    let u = random_unitary(n, seed);
    let t = &random_matrix(r, r, seed ^ 0x5bd1e995) + &ComplexMatrix::from_diag(&vec![3.0; r]);
    let s = random_matrix(r, n - r, seed ^ 0x9e3779b9);
    let inner = block_2x2(
        &t,
        &s,
        &ComplexMatrix::zeros(n - r, r),
        &ComplexMatrix::zeros(n - r, n - r),
    );
    &(&u * &inner) * &u.adjoint()
}
