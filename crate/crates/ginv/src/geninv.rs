//! Moore-Penrose inverses, orthogonal projectors, and g-inverse sampling.
//!
//! [`pinv`] goes through the SVD; the block-formula routes
//! ([`pinv_stacked_columns`], [`pinv_stacked_rows`], [`pinv_upper_triangular`])
//! exist so they can be cross-validated against it.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::numkit::{self, solve_hpd, svd, ComplexMatrix, Tolerance};
use crate::{Error, Result};

/// Moore-Penrose inverse via the SVD: `a^+ = v * diag(1/sigma, 0) * u^*`.
pub fn pinv(a: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    let f = svd(a, tol)?;
    let (m, n) = a.shape();
    let mut s_inv = ComplexMatrix::zeros(n, m);
    for (i, &sv) in f.sigma.iter().enumerate() {
        s_inv.set(i, i, Complex64::new(1.0 / sv, 0.0));
    }
    Ok(&(&f.v * &s_inv) * &f.u.adjoint())
}

/// The four orthogonal projectors attached to a matrix.
#[derive(Debug, Clone)]
pub struct Projectors {
    /// `a a^+`, projector onto `R(a)`.
    pub p: ComplexMatrix,
    /// `a^+ a`, projector onto `R(a^*)`.
    pub q: ComplexMatrix,
    /// `I - p`, projector onto `N(a^*)`.
    pub p_bar: ComplexMatrix,
    /// `I - q`, projector onto `N(a)`.
    pub q_bar: ComplexMatrix,
}

pub fn projectors(a: &ComplexMatrix, tol: &Tolerance) -> Result<Projectors> {
    let a_pinv = pinv(a, tol)?;
    let p = a * &a_pinv;
    let q = &a_pinv * a;
    let p_bar = &ComplexMatrix::identity(a.rows()) - &p;
    let q_bar = &ComplexMatrix::identity(a.cols()) - &q;
    Ok(Projectors { p, q, p_bar, q_bar })
}

/// Moore-Penrose inverse of `[[0, p], [0, q]]` by the block formula
/// `[[0, 0], [(p^*p + q^*q)^+ p^*, (p^*p + q^*q)^+ q^*]]`.
///
/// The zero blocks are taken as wide as `p` has columns.
pub fn pinv_stacked_columns(
    p: &ComplexMatrix,
    q: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<ComplexMatrix> {
    if p.cols() != q.cols() {
        return Err(Error::dim(format!(
            "stacked-column blocks need equal column counts, got {} and {}",
            p.cols(),
            q.cols()
        )));
    }
    let gram = &(&p.adjoint() * p) + &(&q.adjoint() * q);
    let gram_pinv = pinv(&gram, tol)?;
    let lower_left = &gram_pinv * &p.adjoint();
    let lower_right = &gram_pinv * &q.adjoint();
    let zero_w = p.cols();
    let top = ComplexMatrix::zeros(zero_w, p.rows() + q.rows());
    Ok(top.vcat(&lower_left.hcat(&lower_right)))
}

/// Moore-Penrose inverse of `[[0, 0], [p, q]]` by the block formula
/// `[[0, p^*(pp^* + qq^*)^+], [0, q^*(pp^* + qq^*)^+]]`.
///
/// The zero blocks are as tall as `p` has rows.
pub fn pinv_stacked_rows(
    p: &ComplexMatrix,
    q: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<ComplexMatrix> {
    if p.rows() != q.rows() {
        return Err(Error::dim(format!(
            "stacked-row blocks need equal row counts, got {} and {}",
            p.rows(),
            q.rows()
        )));
    }
    let gram = &(p * &p.adjoint()) + &(q * &q.adjoint());
    let gram_pinv = pinv(&gram, tol)?;
    let upper_right = &p.adjoint() * &gram_pinv;
    let lower_right = &q.adjoint() * &gram_pinv;
    let zero_h = p.rows();
    let left = ComplexMatrix::zeros(p.cols() + q.cols(), zero_h);
    Ok(left.hcat(&upper_right.vcat(&lower_right)))
}

/// Block upper-triangular presentation `a = u [[a1, a2], [0, a3]] v^*` with a
/// nonsingular leading block, plus the derived quantities the Moore-Penrose
/// formula needs: `omega = a2 (I - Q_{a3})` and
/// `delta = (a1 a1^* + omega omega^*)^{-1}`.
#[derive(Debug, Clone)]
pub struct TriangularBlockForm {
    pub u: ComplexMatrix,
    pub v: ComplexMatrix,
    pub a1: ComplexMatrix,
    pub a2: ComplexMatrix,
    pub a3: ComplexMatrix,
    pub omega: ComplexMatrix,
    pub delta: ComplexMatrix,
}

impl TriangularBlockForm {
    pub fn new(
        u: ComplexMatrix,
        v: ComplexMatrix,
        a1: ComplexMatrix,
        a2: ComplexMatrix,
        a3: ComplexMatrix,
        tol: &Tolerance,
    ) -> Result<Self> {
        let t = a1.rows();
        if !a1.is_square() {
            return Err(Error::dim("a1 must be square"));
        }
        if a2.rows() != t || a3.cols() != a2.cols() {
            return Err(Error::dim("triangular blocks are not conformal"));
        }
        if u.rows() != t + a3.rows() || v.rows() != t + a2.cols() {
            return Err(Error::dim("unitary factors do not match block sizes"));
        }
        if numkit::rank(&a1, tol)? != t {
            return Err(Error::SingularBlock(
                "leading block a1 is numerically singular".into(),
            ));
        }
        let q3 = projectors(&a3, tol)?.q;
        let omega = &a2 * &(&ComplexMatrix::identity(a3.cols()) - &q3);
        let gram = &(&a1 * &a1.adjoint()) + &(&omega * &omega.adjoint());
        let delta = solve_hpd(&gram, &ComplexMatrix::identity(t))?;
        Ok(TriangularBlockForm {
            u,
            v,
            a1,
            a2,
            a3,
            omega,
            delta,
        })
    }

    /// The represented matrix `u [[a1, a2], [0, a3]] v^*`.
    pub fn assemble(&self) -> ComplexMatrix {
        let zero = ComplexMatrix::zeros(self.a3.rows(), self.a1.cols());
        let inner = crate::numkit::block_2x2(&self.a1, &self.a2, &zero, &self.a3);
        &(&self.u * &inner) * &self.v.adjoint()
    }
}

/// Moore-Penrose inverse from a triangular block form:
/// `v [[a1^* d, -a1^* d a2 a3^+], [omega^* d, a3^+ - omega^* d a2 a3^+]] u^*`
/// with `d = delta`.
pub fn pinv_upper_triangular(form: &TriangularBlockForm, tol: &Tolerance) -> Result<ComplexMatrix> {
    let a3_pinv = pinv(&form.a3, tol)?;
    let a1h_d = &form.a1.adjoint() * &form.delta;
    let omegah_d = &form.omega.adjoint() * &form.delta;
    let a2_a3p = &form.a2 * &a3_pinv;
    let tl = a1h_d.clone();
    let tr = -&(&a1h_d * &a2_a3p);
    let bl = omegah_d.clone();
    let br = &a3_pinv - &(&omegah_d * &a2_a3p);
    let inner = crate::numkit::block_2x2(&tl, &tr, &bl, &br);
    Ok(&(&form.v * &inner) * &form.u.adjoint())
}

/// A pseudorandom g-inverse `g = a^+ + w - a^+ a w a a^+` with `w` drawn
/// entrywise from the complex unit square, deterministic per `(a, seed)`.
/// Every such `g` satisfies `a g a = a`, and the parametrization reaches
/// all of `a{1}` as `w` varies.
pub fn sample_g_inverse(a: &ComplexMatrix, seed: u64, tol: &Tolerance) -> Result<ComplexMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (m, n) = a.shape();
    let w = ComplexMatrix::new(
        n,
        m,
        (0..n * m)
            .map(|_| Complex64::new(rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)))
            .collect(),
    )?;
    let a_pinv = pinv(a, tol)?;
    let q = &a_pinv * a;
    let p = a * &a_pinv;
    Ok(&(&a_pinv + &w) - &(&(&q * &w) * &p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::is_zero;

    fn m(rows: &[&[f64]]) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(rows).unwrap()
    }

    fn penrose_residual(a: &ComplexMatrix, x: &ComplexMatrix) -> f64 {
        let axa = &(a * x) * a;
        let xax = &(x * a) * x;
        let ax = a * x;
        let xa = x * a;
        let scale = 1.0 + a.norm_fro() * x.norm_fro();
        [
            (&axa - a).norm_fro(),
            (&xax - x).norm_fro(),
            (&ax.adjoint() - &ax).norm_fro(),
            (&xa.adjoint() - &xa).norm_fro(),
        ]
        .into_iter()
        .fold(0.0_f64, f64::max)
            / scale
    }

    #[test]
    fn pinv_identity_and_zero() {
        let tol = Tolerance::default();
        let i3 = ComplexMatrix::identity(3);
        assert!(pinv(&i3, &tol).unwrap().approx_eq(&i3, 1e-13));
        let z = ComplexMatrix::zeros(2, 3);
        assert_eq!(pinv(&z, &tol).unwrap(), ComplexMatrix::zeros(3, 2));
    }

    #[test]
    fn pinv_rank_one_example() {
        // Oracle: a^+ = a^*(a a^*)^+ with a a^* = [[2, 0], [0, 0]].
        let tol = Tolerance::default();
        let a = m(&[&[1.0, 1.0], &[0.0, 0.0]]);
        let expected = m(&[&[0.5, 0.0], &[0.5, 0.0]]);
        assert!(pinv(&a, &tol).unwrap().approx_eq(&expected, 1e-13));
    }

    #[test]
    fn penrose_equations_on_randoms() {
        let tol = Tolerance::default();
        for seed in 0..40 {
            let a = crate::testutil::random_matrix(5, 4, seed);
            let x = pinv(&a, &tol).unwrap();
            assert!(penrose_residual(&a, &x) <= 1e-11, "seed {seed}");
            // Involution and adjoint commutation.
            let back = pinv(&x, &tol).unwrap();
            assert!((&back - &a).norm_fro() <= 1e-9 * (1.0 + a.norm_fro()));
            let lhs = pinv(&a.adjoint(), &tol).unwrap();
            assert!((&lhs - &x.adjoint()).norm_fro() <= 1e-9 * (1.0 + x.norm_fro()));
        }
    }

    #[test]
    fn projector_examples() {
        let tol = Tolerance::default();
        let i2 = ComplexMatrix::identity(2);
        let pr = projectors(&i2, &tol).unwrap();
        assert!(pr.p.approx_eq(&i2, 1e-13) && pr.q.approx_eq(&i2, 1e-13));

        let a = m(&[&[1.0, 1.0], &[0.0, 0.0]]);
        let pr = projectors(&a, &tol).unwrap();
        assert!(pr.p.approx_eq(&m(&[&[1.0, 0.0], &[0.0, 0.0]]), 1e-13));
        assert!(pr.q.approx_eq(&m(&[&[0.5, 0.5], &[0.5, 0.5]]), 1e-13));
        // Projector identities.
        assert!((&(&pr.p * &pr.p) - &pr.p).norm_fro() <= 1e-13);
        assert!((&pr.p.adjoint() - &pr.p).norm_fro() <= 1e-13);
        assert!((&(&pr.p * &a) - &a).norm_fro() <= 1e-13);
        assert!((&(&a * &pr.q) - &a).norm_fro() <= 1e-13);

        let z = ComplexMatrix::zeros(2, 2);
        let pr = projectors(&z, &tol).unwrap();
        assert_eq!(pr.p, z);
        assert_eq!(pr.q, z);
    }

    #[test]
    fn range_kernel_of_pinv() {
        let tol = Tolerance::default();
        for seed in 0..20 {
            let a = crate::testutil::random_matrix(4, 3, 100 + seed);
            let x = pinv(&a, &tol).unwrap();
            // R(a^+) = R(a^*) both ways.
            assert!(numkit::range_contains(&x, &a.adjoint(), &tol).unwrap());
            assert!(numkit::range_contains(&a.adjoint(), &x, &tol).unwrap());
        }
    }

    #[test]
    fn stacked_columns_examples() {
        let tol = Tolerance::default();
        let z = ComplexMatrix::zeros(2, 2);
        assert_eq!(
            pinv_stacked_columns(&z, &z, &tol).unwrap(),
            ComplexMatrix::zeros(4, 4)
        );

        // (p^*p + q^*q)^+ = 1/2 for scalar blocks p = q = 1.
        let one = m(&[&[1.0]]);
        let got = pinv_stacked_columns(&one, &one, &tol).unwrap();
        let expected = m(&[&[0.0, 0.0], &[0.5, 0.5]]);
        assert!(got.approx_eq(&expected, 1e-13));

        for seed in 0..10 {
            let p = crate::testutil::random_matrix(2, 2, 200 + seed);
            let q = crate::testutil::random_matrix(2, 2, 300 + seed);
            let assembled = ComplexMatrix::zeros(2, 2)
                .hcat(&p)
                .vcat(&ComplexMatrix::zeros(2, 2).hcat(&q));
            let direct = pinv(&assembled, &tol).unwrap();
            let block = pinv_stacked_columns(&p, &q, &tol).unwrap();
            assert!(
                (&block - &direct).norm_fro() <= 1e-9 * (1.0 + direct.norm_fro()),
                "seed {seed}"
            );
        }
    }

    #[test]
    fn stacked_rows_examples() {
        let tol = Tolerance::default();
        let z = ComplexMatrix::zeros(2, 2);
        assert_eq!(
            pinv_stacked_rows(&z, &z, &tol).unwrap(),
            ComplexMatrix::zeros(4, 4)
        );

        let one = m(&[&[1.0]]);
        let got = pinv_stacked_rows(&one, &one, &tol).unwrap();
        let expected = m(&[&[0.0, 0.5], &[0.0, 0.5]]);
        assert!(got.approx_eq(&expected, 1e-13));

        for seed in 0..10 {
            let p = crate::testutil::random_matrix(2, 3, 400 + seed);
            let q = crate::testutil::random_matrix(2, 2, 500 + seed);
            let top = ComplexMatrix::zeros(2, 5);
            let assembled = top.vcat(&p.hcat(&q));
            let direct = pinv(&assembled, &tol).unwrap();
            let block = pinv_stacked_rows(&p, &q, &tol).unwrap();
            assert!(
                (&block - &direct).norm_fro() <= 1e-9 * (1.0 + direct.norm_fro()),
                "seed {seed}"
            );
        }
    }

    #[test]
    fn triangular_reduces_to_diagonal_case() {
        let tol = Tolerance::default();
        let sigma = ComplexMatrix::from_diag(&[2.0, 0.5]);
        let form = TriangularBlockForm::new(
            ComplexMatrix::identity(3),
            ComplexMatrix::identity(4),
            sigma,
            ComplexMatrix::zeros(2, 2),
            ComplexMatrix::zeros(1, 2),
            &tol,
        )
        .unwrap();
        let got = pinv_upper_triangular(&form, &tol).unwrap();
        let direct = pinv(&form.assemble(), &tol).unwrap();
        assert!(got.approx_eq(&direct, 1e-12));
    }

    #[test]
    fn triangular_nonsingular_example() {
        // [[1, 1], [0, 1]] is invertible with inverse [[1, -1], [0, 1]].
        let tol = Tolerance::default();
        let one = m(&[&[1.0]]);
        let form = TriangularBlockForm::new(
            ComplexMatrix::identity(2),
            ComplexMatrix::identity(2),
            one.clone(),
            one.clone(),
            one,
            &tol,
        )
        .unwrap();
        let got = pinv_upper_triangular(&form, &tol).unwrap();
        assert!(got.approx_eq(&m(&[&[1.0, -1.0], &[0.0, 1.0]]), 1e-13));
    }

    #[test]
    fn triangular_rank_deficient_trailing_block() {
        // a1 = 2, a2 = 1, a3 = 0: omega = 1, delta = 1/5.
        let tol = Tolerance::default();
        let form = TriangularBlockForm::new(
            ComplexMatrix::identity(2),
            ComplexMatrix::identity(2),
            m(&[&[2.0]]),
            m(&[&[1.0]]),
            m(&[&[0.0]]),
            &tol,
        )
        .unwrap();
        assert!(form.omega.approx_eq(&m(&[&[1.0]]), 1e-14));
        assert!(form.delta.approx_eq(&m(&[&[0.2]]), 1e-14));
        let got = pinv_upper_triangular(&form, &tol).unwrap();
        let direct = pinv(&m(&[&[2.0, 1.0], &[0.0, 0.0]]), &tol).unwrap();
        assert!(got.approx_eq(&direct, 1e-12));
    }

    #[test]
    fn triangular_rejects_singular_leading_block() {
        let tol = Tolerance::default();
        let got = TriangularBlockForm::new(
            ComplexMatrix::identity(2),
            ComplexMatrix::identity(2),
            m(&[&[0.0]]),
            m(&[&[1.0]]),
            m(&[&[1.0]]),
            &tol,
        );
        assert!(matches!(got, Err(Error::SingularBlock(_))));
    }

    #[test]
    fn g_inverse_of_nonsingular_is_unique() {
        let tol = Tolerance::default();
        let a = m(&[&[2.0, 1.0], &[1.0, 1.0]]);
        let inv = pinv(&a, &tol).unwrap();
        for seed in [0, 1, 99] {
            let g = sample_g_inverse(&a, seed, &tol).unwrap();
            assert!(g.approx_eq(&inv, 1e-12));
        }
    }

    #[test]
    fn g_inverse_of_zero_is_anything() {
        let tol = Tolerance::default();
        let z = ComplexMatrix::zeros(2, 3);
        let g = sample_g_inverse(&z, 5, &tol).unwrap();
        assert_eq!(g.shape(), (3, 2));
        // a g a = 0 = a trivially; w itself comes back.
        assert!(g.norm_fro() > 0.0);
    }

    #[test]
    fn g_inverses_vary_but_stay_inner() {
        let tol = Tolerance::default();
        let a = m(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let g1 = sample_g_inverse(&a, 1, &tol).unwrap();
        let g2 = sample_g_inverse(&a, 2, &tol).unwrap();
        assert!(!g1.approx_eq(&g2, 1e-6));
        for g in [&g1, &g2] {
            let aga = &(&a * g) * &a;
            assert!(is_zero(&(&aga - &a), a.norm_fro(), &tol));
        }
        // Deterministic per seed.
        let again = sample_g_inverse(&a, 1, &tol).unwrap();
        assert_eq!(g1, again);
    }
}
