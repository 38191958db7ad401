//! Matrix index, core-EP decomposition, and the core inverse.
//!
//! A square matrix has a core inverse exactly when its index is at most 1
//! (a *group matrix*). The core inverse is computed through the core-EP
//! decomposition: with `a = u [[t, s], [0, 0]] u^*` and `t` nonsingular,
//! the core inverse is `u [[t^{-1}, 0], [0, 0]] u^*`.

use crate::numkit::{self, block_2x2, solve_general, svd, ComplexMatrix, Tolerance};
use crate::{Error, Result};

/// Unitary block form `a = u [[t, s], [0, n]] u^*` of a square matrix with
/// `t` nonsingular of size `rank(a^k)` and `n` nilpotent of index `k`.
#[derive(Debug, Clone)]
pub struct CoreEpFactors {
    pub u: ComplexMatrix,
    /// Nonsingular `t x t` block.
    pub t_block: ComplexMatrix,
    /// `t x (n - t)` coupling block.
    pub s_block: ComplexMatrix,
    /// Nilpotent `(n - t) x (n - t)` block; zero for a group matrix.
    pub n_block: ComplexMatrix,
    /// `rank(a^k)`.
    pub t: usize,
    /// The index of the matrix.
    pub k: usize,
}

impl CoreEpFactors {
    /// `u [[t, s], [0, n]] u^*`.
    pub fn assemble(&self) -> ComplexMatrix {
        let zero = ComplexMatrix::zeros(self.n_block.rows(), self.t);
        let inner = block_2x2(&self.t_block, &self.s_block, &zero, &self.n_block);
        &(&self.u * &inner) * &self.u.adjoint()
    }

    /// The group part `u [[t, s], [0, 0]] u^*` of the splitting.
    pub fn group_part(&self) -> ComplexMatrix {
        let n = self.u.rows();
        let zero_bl = ComplexMatrix::zeros(n - self.t, self.t);
        let zero_br = ComplexMatrix::zeros(n - self.t, n - self.t);
        let inner = block_2x2(&self.t_block, &self.s_block, &zero_bl, &zero_br);
        &(&self.u * &inner) * &self.u.adjoint()
    }

    /// The nilpotent part `u [[0, 0], [0, n]] u^*` of the splitting.
    pub fn nilpotent_part(&self) -> ComplexMatrix {
        let n = self.u.rows();
        let zero_tl = ComplexMatrix::zeros(self.t, self.t);
        let zero_tr = ComplexMatrix::zeros(self.t, n - self.t);
        let zero_bl = ComplexMatrix::zeros(n - self.t, self.t);
        let inner = block_2x2(&zero_tl, &zero_tr, &zero_bl, &self.n_block);
        &(&self.u * &inner) * &self.u.adjoint()
    }
}

/// The index: the smallest `k >= 0` with `rank(a^k) = rank(a^{k+1})`,
/// with the convention `a^0 = I`. Never exceeds the dimension.
pub fn index(a: &ComplexMatrix, tol: &Tolerance) -> Result<usize> {
    if !a.is_square() {
        return Err(Error::dim(format!(
            "index needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let mut power = ComplexMatrix::identity(n);
    let mut prev_rank = n;
    for k in 0..n {
        power = &power * a;
        let r = numkit::rank(&power, tol)?;
        if r == prev_rank {
            return Ok(k);
        }
        prev_rank = r;
    }
    Ok(n)
}

/// Core-EP decomposition of a square matrix.
///
/// The first `t = rank(a^k)` columns of `u` are an orthonormal basis of
/// `R(a^k)` taken from the SVD of `a^k`; since `R(a^k)` is invariant under
/// `a`, the similarity `u^* a u` is block upper triangular and the blocks
/// are read off directly.
pub fn core_ep_decompose(a: &ComplexMatrix, tol: &Tolerance) -> Result<CoreEpFactors> {
    if !a.is_square() {
        return Err(Error::dim(format!(
            "core_ep_decompose needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let k = index(a, tol)?;
    let f = svd(&a.pow(k), tol)?;
    let t = f.rank();
    let u = f.u;
    let m = &(&u.adjoint() * a) * &u;
    let t_block = m.submatrix(0, t, 0, t);
    let s_block = m.submatrix(0, t, t, n);
    let n_block = m.submatrix(t, n, t, n);
    // The (2,1) block vanishes in exact arithmetic; anything beyond the
    // zero threshold means the similarity basis was bad.
    let lower = m.submatrix(t, n, 0, t);
    if !numkit::is_zero(&lower, a.norm_fro(), tol) {
        return Err(Error::SingularBlock(format!(
            "core-EP similarity left a lower block of norm {:.3e}",
            lower.norm_fro()
        )));
    }
    Ok(CoreEpFactors {
        u,
        t_block,
        s_block,
        n_block,
        t,
        k,
    })
}

/// Whether the index is at most 1, i.e. the core inverse exists.
pub fn is_group_matrix(a: &ComplexMatrix, tol: &Tolerance) -> Result<bool> {
    Ok(index(a, tol)? <= 1)
}

/// The core inverse of a group matrix, `u [[t^{-1}, 0], [0, 0]] u^*`.
pub fn core_inverse(a: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    let idx = index(a, tol)?;
    if idx > 1 {
        return Err(Error::not_group("matrix", idx));
    }
    let f = core_ep_decompose(a, tol)?;
    let n = a.rows();
    let t_inv = solve_general(&f.t_block, &ComplexMatrix::identity(f.t))?;
    let inner = block_2x2(
        &t_inv,
        &ComplexMatrix::zeros(f.t, n - f.t),
        &ComplexMatrix::zeros(n - f.t, f.t),
        &ComplexMatrix::zeros(n - f.t, n - f.t),
    );
    Ok(&(&f.u * &inner) * &f.u.adjoint())
}

/// Outcome of a block core-inverse lemma: either the assembled inverse or
/// the clause of the hypothesis that failed.
#[derive(Debug, Clone)]
pub enum BlockCoreInverse {
    Applicable(ComplexMatrix),
    NotApplicable(BlockFailure),
}

/// Which hypothesis of a block core-inverse lemma failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockFailure {
    /// A diagonal block has no core inverse; carries the block name.
    DiagonalNotGroup(&'static str),
    /// The coupling condition `(I - X X^⊕) Q = 0` does not hold.
    CouplingNonzero,
}

impl BlockCoreInverse {
    pub fn applicable(&self) -> Option<&ComplexMatrix> {
        match self {
            BlockCoreInverse::Applicable(m) => Some(m),
            BlockCoreInverse::NotApplicable(_) => None,
        }
    }
}

/// Core inverse of `[[p, 0], [q, r]]` via the block lemma: applicable when
/// `p` and `r` are group matrices and `(I - r r^⊕) q = 0`, in which case the
/// inverse is `[[p^⊕, 0], [-r^⊕ q p^⊕, r^⊕]]`.
pub fn core_inverse_lower_block(
    p: &ComplexMatrix,
    q: &ComplexMatrix,
    r: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<BlockCoreInverse> {
    check_block_shapes(p, q, r, true)?;
    if !is_group_matrix(p, tol)? {
        return Ok(BlockCoreInverse::NotApplicable(
            BlockFailure::DiagonalNotGroup("p"),
        ));
    }
    if !is_group_matrix(r, tol)? {
        return Ok(BlockCoreInverse::NotApplicable(
            BlockFailure::DiagonalNotGroup("r"),
        ));
    }
    let p_core = core_inverse(p, tol)?;
    let r_core = core_inverse(r, tol)?;
    let coupling = &(&ComplexMatrix::identity(r.rows()) - &(r * &r_core)) * q;
    if !numkit::is_zero(&coupling, q.norm_fro(), tol) {
        return Ok(BlockCoreInverse::NotApplicable(BlockFailure::CouplingNonzero));
    }
    let bl = -&(&(&r_core * q) * &p_core);
    let out = block_2x2(
        &p_core,
        &ComplexMatrix::zeros(p.rows(), r.cols()),
        &bl,
        &r_core,
    );
    Ok(BlockCoreInverse::Applicable(out))
}

/// Core inverse of `[[p, q], [0, r]]` via the block lemma: applicable when
/// `p` and `r` are group matrices and `(I - p p^⊕) q = 0`, in which case the
/// inverse is `[[p^⊕, -p^⊕ q r^⊕], [0, r^⊕]]`.
pub fn core_inverse_upper_block(
    p: &ComplexMatrix,
    q: &ComplexMatrix,
    r: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<BlockCoreInverse> {
    check_block_shapes(p, q, r, false)?;
    if !is_group_matrix(p, tol)? {
        return Ok(BlockCoreInverse::NotApplicable(
            BlockFailure::DiagonalNotGroup("p"),
        ));
    }
    if !is_group_matrix(r, tol)? {
        return Ok(BlockCoreInverse::NotApplicable(
            BlockFailure::DiagonalNotGroup("r"),
        ));
    }
    let p_core = core_inverse(p, tol)?;
    let r_core = core_inverse(r, tol)?;
    let coupling = &(&ComplexMatrix::identity(p.rows()) - &(p * &p_core)) * q;
    if !numkit::is_zero(&coupling, q.norm_fro(), tol) {
        return Ok(BlockCoreInverse::NotApplicable(BlockFailure::CouplingNonzero));
    }
    let tr = -&(&(&p_core * q) * &r_core);
    let out = block_2x2(
        &p_core,
        &tr,
        &ComplexMatrix::zeros(r.rows(), p.cols()),
        &r_core,
    );
    Ok(BlockCoreInverse::Applicable(out))
}

fn check_block_shapes(
    p: &ComplexMatrix,
    q: &ComplexMatrix,
    r: &ComplexMatrix,
    lower: bool,
) -> Result<()> {
    if !p.is_square() || !r.is_square() {
        return Err(Error::dim("diagonal blocks must be square"));
    }
    let ok = if lower {
        q.rows() == r.rows() && q.cols() == p.cols()
    } else {
        q.rows() == p.rows() && q.cols() == r.cols()
    };
    if !ok {
        return Err(Error::dim(format!(
            "coupling block {}x{} does not conform to {}x{} and {}x{}",
            q.rows(),
            q.cols(),
            p.rows(),
            p.cols(),
            r.rows(),
            r.cols()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geninv;
    use crate::numkit::is_zero;
    use crate::testutil::random_matrix;

    fn m(rows: &[&[f64]]) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(rows).unwrap()
    }

    #[test]
    fn index_examples() {
        let tol = Tolerance::default();
        assert_eq!(index(&ComplexMatrix::identity(3), &tol).unwrap(), 0);
        // rank sequence 2, 1, 0, 0 stabilizes at k = 2.
        assert_eq!(index(&m(&[&[0.0, 0.0], &[1.0, 0.0]]), &tol).unwrap(), 2);
        // a^2 = a, rank stabilizes at 1.
        assert_eq!(index(&m(&[&[1.0, 1.0], &[0.0, 0.0]]), &tol).unwrap(), 1);
    }

    #[test]
    fn core_ep_of_nilpotent_has_no_group_part() {
        let tol = Tolerance::default();
        let a = m(&[&[0.0, 0.0], &[1.0, 0.0]]);
        let f = core_ep_decompose(&a, &tol).unwrap();
        assert_eq!(f.t, 0);
        assert_eq!(f.k, 2);
        assert!((&f.assemble() - &a).norm_fro() <= 1e-12);
        // n is unitarily similar to a, hence nilpotent of the same index.
        assert!(f.n_block.pow(2).norm_fro() <= 1e-12);
        assert!(f.n_block.pow(1).norm_fro() > 0.5);
    }

    #[test]
    fn core_ep_of_matrix_already_in_shape() {
        let tol = Tolerance::default();
        let a = m(&[&[1.0, 1.0], &[0.0, 0.0]]);
        let f = core_ep_decompose(&a, &tol).unwrap();
        assert_eq!((f.t, f.k), (1, 1));
        assert!((&f.assemble() - &a).norm_fro() <= 1e-12);
        assert!(f.n_block.norm_fro() <= 1e-12);
    }

    #[test]
    fn core_ep_of_nonsingular_matrix() {
        let tol = Tolerance::default();
        let a = m(&[&[2.0, 1.0], &[1.0, 1.0]]);
        let f = core_ep_decompose(&a, &tol).unwrap();
        assert_eq!((f.t, f.k), (2, 0));
        assert!(f.n_block.is_empty());
        assert!((&f.assemble() - &a).norm_fro() <= 1e-12 * (1.0 + a.norm_fro()));
    }

    #[test]
    fn core_ep_split_properties() {
        let tol = Tolerance::default();
        for seed in 0..25 {
            // Mix of generic (index 0), rank-deficient (index 1), and
            // genuinely higher-index matrices conjugated away from the axes.
            let a = match seed % 3 {
                0 => random_matrix(4, 4, 900 + seed),
                1 => {
                    let f = random_matrix(4, 2, 900 + seed);
                    let g = random_matrix(2, 4, 950 + seed);
                    &f * &g
                }
                _ => {
                    let t = &random_matrix(2, 2, 900 + seed)
                        + &ComplexMatrix::from_diag(&[3.0, 3.0]);
                    let s = random_matrix(2, 2, 950 + seed);
                    let nilp = m(&[&[0.0, 1.0], &[0.0, 0.0]]);
                    let inner = block_2x2(&t, &s, &ComplexMatrix::zeros(2, 2), &nilp);
                    let u = svd(&random_matrix(4, 4, 970 + seed), &tol).unwrap().u;
                    &(&u * &inner) * &u.adjoint()
                }
            };
            let f = core_ep_decompose(&a, &tol).unwrap();
            let a1 = f.group_part();
            let a2 = f.nilpotent_part();
            let scale = a.norm_fro() * a.norm_fro();
            assert!((&(&a1 + &a2) - &a).norm_fro() <= 1e-10 * (1.0 + a.norm_fro()));
            assert!(is_zero(&(&a1.adjoint() * &a2), scale, &tol));
            assert!(is_zero(&(&a2 * &a1), scale, &tol));
            assert!(is_group_matrix(&a1, &tol).unwrap());
            assert!(is_zero(&a2.pow(f.k.max(1)), scale, &tol));
            if seed % 3 == 2 {
                assert_eq!(f.k, 2, "seed {seed}");
            }
        }
    }

    #[test]
    fn group_matrix_examples() {
        let tol = Tolerance::default();
        assert!(is_group_matrix(&m(&[&[1.0, 1.0], &[0.0, 0.0]]), &tol).unwrap());
        assert!(!is_group_matrix(&m(&[&[0.0, 0.0], &[1.0, 0.0]]), &tol).unwrap());
        assert!(is_group_matrix(&ComplexMatrix::zeros(3, 3), &tol).unwrap());
    }

    #[test]
    fn core_inverse_examples() {
        let tol = Tolerance::default();
        // Solving a x = p_a with R(x) within R(a) = span(e1) by hand.
        let a = m(&[&[1.0, 1.0], &[0.0, 0.0]]);
        let x = core_inverse(&a, &tol).unwrap();
        assert!(x.approx_eq(&m(&[&[1.0, 0.0], &[0.0, 0.0]]), 1e-12));

        let b = ComplexMatrix::from_diag(&[-1.0, 0.0]);
        assert!(core_inverse(&b, &tol).unwrap().approx_eq(&b, 1e-12));

        let c = m(&[&[2.0, 1.0], &[1.0, 1.0]]);
        let c_inv = geninv::pinv(&c, &tol).unwrap();
        assert!(core_inverse(&c, &tol).unwrap().approx_eq(&c_inv, 1e-12));
    }

    #[test]
    fn core_inverse_of_zero_matrix() {
        let tol = Tolerance::default();
        let z = ComplexMatrix::zeros(2, 2);
        assert_eq!(core_inverse(&z, &tol).unwrap(), z);
    }

    #[test]
    fn core_inverse_rejects_higher_index() {
        let tol = Tolerance::default();
        let a = m(&[&[0.0, 0.0], &[1.0, 0.0]]);
        match core_inverse(&a, &tol) {
            Err(Error::NotGroupMatrix { index, .. }) => assert_eq!(index, 2),
            other => panic!("expected NotGroupMatrix, got {other:?}"),
        }
    }

    #[test]
    fn core_inverse_defining_pair() {
        let tol = Tolerance::default();
        let a = m(&[&[1.0, 1.0], &[0.0, 0.0]]);
        let x = core_inverse(&a, &tol).unwrap();
        let p = geninv::projectors(&a, &tol).unwrap().p;
        assert!((&(&a * &x) - &p).norm_fro() <= 1e-12);
        assert!(crate::numkit::range_contains(&a, &x, &tol).unwrap());
    }

    #[test]
    fn lower_block_examples() {
        let tol = Tolerance::default();
        // q = 0, both blocks nonsingular: block diagonal of inverses.
        let p = m(&[&[2.0]]);
        let r = m(&[&[4.0]]);
        let got = core_inverse_lower_block(&p, &ComplexMatrix::zeros(1, 1), &r, &tol).unwrap();
        assert!(got
            .applicable()
            .unwrap()
            .approx_eq(&ComplexMatrix::from_diag(&[0.5, 0.25]), 1e-13));

        // Exact inverse of [[1, 0], [1, 1]].
        let one = m(&[&[1.0]]);
        let got = core_inverse_lower_block(&one, &one, &one, &tol).unwrap();
        assert!(got
            .applicable()
            .unwrap()
            .approx_eq(&m(&[&[1.0, 0.0], &[-1.0, 1.0]]), 1e-13));

        // (I - r r^⊕) q = q != 0 when r = 0.
        let got = core_inverse_lower_block(&one, &one, &m(&[&[0.0]]), &tol).unwrap();
        match got {
            BlockCoreInverse::NotApplicable(BlockFailure::CouplingNonzero) => {}
            other => panic!("expected coupling failure, got {other:?}"),
        }
    }

    #[test]
    fn upper_block_examples() {
        let tol = Tolerance::default();
        let p = m(&[&[2.0]]);
        let r = m(&[&[4.0]]);
        let got = core_inverse_upper_block(&p, &ComplexMatrix::zeros(1, 1), &r, &tol).unwrap();
        assert!(got
            .applicable()
            .unwrap()
            .approx_eq(&ComplexMatrix::from_diag(&[0.5, 0.25]), 1e-13));

        let one = m(&[&[1.0]]);
        let got = core_inverse_upper_block(&one, &one, &one, &tol).unwrap();
        assert!(got
            .applicable()
            .unwrap()
            .approx_eq(&m(&[&[1.0, -1.0], &[0.0, 1.0]]), 1e-13));

        let got = core_inverse_upper_block(&m(&[&[0.0]]), &one, &one, &tol).unwrap();
        match got {
            BlockCoreInverse::NotApplicable(BlockFailure::CouplingNonzero) => {}
            other => panic!("expected coupling failure, got {other:?}"),
        }
    }

    #[test]
    fn block_lemma_flags_non_group_diagonal() {
        let tol = Tolerance::default();
        let nilp = m(&[&[0.0, 0.0], &[1.0, 0.0]]);
        let got = core_inverse_lower_block(
            &nilp,
            &ComplexMatrix::zeros(2, 2),
            &ComplexMatrix::identity(2),
            &tol,
        )
        .unwrap();
        match got {
            BlockCoreInverse::NotApplicable(BlockFailure::DiagonalNotGroup("p")) => {}
            other => panic!("expected p flagged, got {other:?}"),
        }
    }

    #[test]
    fn block_routes_agree_with_direct_core_inverse() {
        let tol = Tolerance::default();
        // Nonsingular diagonal blocks keep the assembled matrix a group matrix.
        for seed in 0..15 {
            let p = &random_matrix(2, 2, 700 + seed) + &ComplexMatrix::from_diag(&[4.0, 4.0]);
            let r = &random_matrix(2, 2, 800 + seed) + &ComplexMatrix::from_diag(&[4.0, 4.0]);
            let q = random_matrix(2, 2, 850 + seed);
            let assembled = block_2x2(&p, &ComplexMatrix::zeros(2, 2), &q, &r);
            let direct = core_inverse(&assembled, &tol).unwrap();
            let block = core_inverse_lower_block(&p, &q, &r, &tol).unwrap();
            let block = block.applicable().expect("nonsingular blocks are group");
            assert!(
                (block - &direct).norm_fro() <= 1e-9 * (1.0 + direct.norm_fro()),
                "seed {seed}"
            );

            let assembled = block_2x2(&p, &q, &ComplexMatrix::zeros(2, 2), &r);
            let direct = core_inverse(&assembled, &tol).unwrap();
            let block = core_inverse_upper_block(&p, &q, &r, &tol).unwrap();
            let block = block.applicable().unwrap();
            assert!(
                (block - &direct).norm_fro() <= 1e-9 * (1.0 + direct.norm_fro()),
                "seed {seed}"
            );
        }
    }
}
