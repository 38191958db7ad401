//! One-sided star- and core-orthogonality and canonical pair forms.
//!
//! For rectangular `a`, `b` of equal shape, `a` is *left star-orthogonal*
//! to `b` when `a^* b = 0` and *right star-orthogonal* when `b a^* = 0`.
//! For square group matrices the conjugate transpose is replaced by the
//! core inverse, giving the one-sided core-orthogonality relations. Each
//! relation admits a simultaneous block form of the pair, produced here by
//! the `factor_*` functions and cross-checked by the verification
//! campaigns in [`crate::harness`].

use crate::coreinv::{self, core_inverse, is_group_matrix};
use crate::geninv::{pinv, projectors};
use crate::numkit::{self, block_2x2, is_zero, svd, ComplexMatrix, Tolerance};
use crate::{Error, Result};

/// Which one-sided relation a canonical pair was built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

fn check_same_shape(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(Error::dim(format!(
            "operands must share a shape, got {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(())
}

/// `a^* b = 0`. Symmetric in its arguments.
pub fn left_star_orth(a: &ComplexMatrix, b: &ComplexMatrix, tol: &Tolerance) -> Result<bool> {
    check_same_shape(a, b)?;
    Ok(is_zero(
        &(&a.adjoint() * b),
        a.norm_fro() * b.norm_fro(),
        tol,
    ))
}

/// `b a^* = 0`. Symmetric in its arguments.
pub fn right_star_orth(a: &ComplexMatrix, b: &ComplexMatrix, tol: &Tolerance) -> Result<bool> {
    check_same_shape(a, b)?;
    Ok(is_zero(
        &(b * &a.adjoint()),
        a.norm_fro() * b.norm_fro(),
        tol,
    ))
}

/// Two-sided star-orthogonality: both one-sided relations at once.
pub fn star_orth(a: &ComplexMatrix, b: &ComplexMatrix, tol: &Tolerance) -> Result<bool> {
    Ok(left_star_orth(a, b, tol)? && right_star_orth(a, b, tol)?)
}

/// `R(a)` perpendicular to `R(b)`, decided as `P_a P_b = 0`; equivalent to
/// left star-orthogonality.
pub fn range_perpendicular(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<bool> {
    if a.rows() != b.rows() {
        return Err(Error::dim("range_perpendicular needs equal row counts"));
    }
    let pa = projectors(a, tol)?.p;
    let pb = projectors(b, tol)?.p;
    Ok(is_zero(&(&pa * &pb), pa.norm_fro() * pb.norm_fro(), tol))
}

/// Simultaneous block form of a star-orthogonal pair:
/// `a = u [[sigma, 0], [0, 0]] v^*` and, depending on the side,
/// `b = u [[0, b2], [0, b4]] v^*` (right) or `b = u [[0, 0], [b3, b4]] v^*`
/// (left).
#[derive(Debug, Clone)]
pub struct StarCanonicalPair {
    pub u: ComplexMatrix,
    pub v: ComplexMatrix,
    /// `r x r` nonsingular positive diagonal.
    pub sigma: ComplexMatrix,
    pub side: Side,
    /// `r x (n - r)`, right case only.
    pub b2: Option<ComplexMatrix>,
    /// `(m - r) x r`, left case only.
    pub b3: Option<ComplexMatrix>,
    /// `(m - r) x (n - r)`.
    pub b4: ComplexMatrix,
}

impl StarCanonicalPair {
    pub fn rank(&self) -> usize {
        self.sigma.rows()
    }

    pub fn assemble_a(&self) -> ComplexMatrix {
        let m = self.u.rows();
        let n = self.v.rows();
        let r = self.rank();
        let inner = block_2x2(
            &self.sigma,
            &ComplexMatrix::zeros(r, n - r),
            &ComplexMatrix::zeros(m - r, r),
            &ComplexMatrix::zeros(m - r, n - r),
        );
        &(&self.u * &inner) * &self.v.adjoint()
    }

    pub fn assemble_b(&self) -> ComplexMatrix {
        let m = self.u.rows();
        let n = self.v.rows();
        let r = self.rank();
        let inner = match self.side {
            Side::Right => block_2x2(
                &ComplexMatrix::zeros(r, r),
                self.b2.as_ref().expect("right pair carries b2"),
                &ComplexMatrix::zeros(m - r, r),
                &self.b4,
            ),
            Side::Left => block_2x2(
                &ComplexMatrix::zeros(r, r),
                &ComplexMatrix::zeros(r, n - r),
                self.b3.as_ref().expect("left pair carries b3"),
                &self.b4,
            ),
        };
        &(&self.u * &inner) * &self.v.adjoint()
    }

    /// The Moore-Penrose inverse of `b` by the block formula attached to
    /// the canonical form: for the right case
    /// `v [[0, 0], [g b2^*, g b4^*]] u^*` with `g = (b2^* b2 + b4^* b4)^+`,
    /// and the mirrored expression for the left case.
    pub fn pinv_b(&self, tol: &Tolerance) -> Result<ComplexMatrix> {
        let m = self.u.rows();
        let n = self.v.rows();
        let r = self.rank();
        let inner = match self.side {
            Side::Right => {
                let b2 = self.b2.as_ref().unwrap();
                let gram = &(&b2.adjoint() * b2) + &(&self.b4.adjoint() * &self.b4);
                let g = pinv(&gram, tol)?;
                block_2x2(
                    &ComplexMatrix::zeros(r, r),
                    &ComplexMatrix::zeros(r, m - r),
                    &(&g * &b2.adjoint()),
                    &(&g * &self.b4.adjoint()),
                )
            }
            Side::Left => {
                let b3 = self.b3.as_ref().unwrap();
                let gram = &(b3 * &b3.adjoint()) + &(&self.b4 * &self.b4.adjoint());
                let h = pinv(&gram, tol)?;
                block_2x2(
                    &ComplexMatrix::zeros(r, r),
                    &(&b3.adjoint() * &h),
                    &ComplexMatrix::zeros(n - r, r),
                    &(&self.b4.adjoint() * &h),
                )
            }
        };
        Ok(&(&self.v * &inner) * &self.u.adjoint())
    }
}

/// Factor a right star-orthogonal pair through the SVD of `a`.
pub fn factor_right_star_pair(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<StarCanonicalPair> {
    if !right_star_orth(a, b, tol)? {
        return Err(Error::PredicateFailed(
            "factor_right_star_pair requires b a^* = 0".into(),
        ));
    }
    factor_star_pair(a, b, Side::Right, tol)
}

/// Factor a left star-orthogonal pair through the SVD of `a`.
pub fn factor_left_star_pair(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<StarCanonicalPair> {
    if !left_star_orth(a, b, tol)? {
        return Err(Error::PredicateFailed(
            "factor_left_star_pair requires a^* b = 0".into(),
        ));
    }
    factor_star_pair(a, b, Side::Left, tol)
}

fn factor_star_pair(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    side: Side,
    tol: &Tolerance,
) -> Result<StarCanonicalPair> {
    let (m, n) = a.shape();
    let f = svd(a, tol)?;
    let r = f.rank();
    let c = &(&f.u.adjoint() * b) * &f.v;
    let b1 = c.submatrix(0, r, 0, r);
    let b2 = numkit::snap_to_zero(c.submatrix(0, r, r, n), b.norm_fro());
    let b3 = numkit::snap_to_zero(c.submatrix(r, m, 0, r), b.norm_fro());
    let b4 = numkit::snap_to_zero(c.submatrix(r, m, r, n), b.norm_fro());
    // The orthogonality relation forces specific blocks of u^* b v to
    // vanish; verify rather than silently zeroing real mass.
    let must_vanish: &[(&ComplexMatrix, &str)] = match side {
        Side::Right => &[(&b1, "b1"), (&b3, "b3")],
        Side::Left => &[(&b1, "b1"), (&b2, "b2")],
    };
    for (block, name) in must_vanish {
        if !is_zero(block, b.norm_fro(), tol) {
            return Err(Error::PredicateFailed(format!(
                "canonical {name} block has norm {:.3e}, expected 0",
                block.norm_fro()
            )));
        }
    }
    let sigma = f.sigma_block();
    Ok(StarCanonicalPair {
        u: f.u,
        v: f.v,
        sigma,
        side,
        b2: matches!(side, Side::Right).then_some(b2),
        b3: matches!(side, Side::Left).then_some(b3),
        b4,
    })
}

/// `a^⊕ b = 0`; requires `a` to be a group matrix. Symmetric on group
/// matrices.
pub fn left_core_orth(a: &ComplexMatrix, b: &ComplexMatrix, tol: &Tolerance) -> Result<bool> {
    check_same_shape(a, b)?;
    let a_core = core_inverse_of("a", a, tol)?;
    Ok(is_zero(
        &(&a_core * b),
        a_core.norm_fro() * b.norm_fro(),
        tol,
    ))
}

/// `b a^⊕ = 0`; requires `a` to be a group matrix. Not symmetric.
pub fn right_core_orth(a: &ComplexMatrix, b: &ComplexMatrix, tol: &Tolerance) -> Result<bool> {
    check_same_shape(a, b)?;
    let a_core = core_inverse_of("a", a, tol)?;
    Ok(is_zero(
        &(b * &a_core),
        a_core.norm_fro() * b.norm_fro(),
        tol,
    ))
}

/// Core-orthogonality: both one-sided core relations.
pub fn core_orth(a: &ComplexMatrix, b: &ComplexMatrix, tol: &Tolerance) -> Result<bool> {
    Ok(left_core_orth(a, b, tol)? && right_core_orth(a, b, tol)?)
}

/// Strong core-orthogonality: `a^⊕ b = 0`, `b a^⊕ = 0`, and `a b^⊕ = 0`.
/// Both operands must be group matrices.
pub fn strongly_core_orth(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<bool> {
    check_same_shape(a, b)?;
    let a_core = core_inverse_of("a", a, tol)?;
    let b_core = core_inverse_of("b", b, tol)?;
    let scale_a = a_core.norm_fro() * b.norm_fro();
    let scale_b = b_core.norm_fro() * a.norm_fro();
    Ok(is_zero(&(&a_core * b), scale_a, tol)
        && is_zero(&(b * &a_core), scale_a, tol)
        && is_zero(&(a * &b_core), scale_b, tol))
}

fn core_inverse_of(name: &str, a: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    let idx = coreinv::index(a, tol)?;
    if idx > 1 {
        return Err(Error::not_group(name, idx));
    }
    core_inverse(a, tol)
}

/// Simultaneous block form of a core-orthogonal pair in a common unitary
/// basis: `a = u [[t, s], [0, 0]] u^*` and `b = u [[0, 0], [b3, b4]] u^*`
/// (left case, with `(I - b4 b4^⊕) b3 = 0`) or `b = u [[0, 0], [0, b4]] u^*`
/// (right case); `b4` is itself a group matrix.
#[derive(Debug, Clone)]
pub struct CoreCanonicalPair {
    pub u: ComplexMatrix,
    /// `r x r` nonsingular.
    pub t_block: ComplexMatrix,
    /// `r x (n - r)`.
    pub s_block: ComplexMatrix,
    pub side: Side,
    /// `(n - r) x r`, left case only.
    pub b3: Option<ComplexMatrix>,
    /// `(n - r) x (n - r)` group matrix.
    pub b4: ComplexMatrix,
}

impl CoreCanonicalPair {
    pub fn rank(&self) -> usize {
        self.t_block.rows()
    }

    pub fn assemble_a(&self) -> ComplexMatrix {
        let n = self.u.rows();
        let r = self.rank();
        let inner = block_2x2(
            &self.t_block,
            &self.s_block,
            &ComplexMatrix::zeros(n - r, r),
            &ComplexMatrix::zeros(n - r, n - r),
        );
        &(&self.u * &inner) * &self.u.adjoint()
    }

    pub fn assemble_b(&self) -> ComplexMatrix {
        let n = self.u.rows();
        let r = self.rank();
        let b3 = match (&self.b3, self.side) {
            (Some(b3), Side::Left) => b3.clone(),
            _ => ComplexMatrix::zeros(n - r, r),
        };
        let inner = block_2x2(
            &ComplexMatrix::zeros(r, r),
            &ComplexMatrix::zeros(r, n - r),
            &b3,
            &self.b4,
        );
        &(&self.u * &inner) * &self.u.adjoint()
    }

    /// The core inverse of `b` read off the form: `u [[0, 0], [0, b4^⊕]] u^*`.
    pub fn core_inverse_b(&self, tol: &Tolerance) -> Result<ComplexMatrix> {
        let n = self.u.rows();
        let r = self.rank();
        let b4_core = core_inverse(&self.b4, tol)?;
        let inner = block_2x2(
            &ComplexMatrix::zeros(r, r),
            &ComplexMatrix::zeros(r, n - r),
            &ComplexMatrix::zeros(n - r, r),
            &b4_core,
        );
        Ok(&(&self.u * &inner) * &self.u.adjoint())
    }
}

/// Factor a left core-orthogonal pair of group matrices through the
/// core-EP decomposition of `a`, verifying the `b4` coupling condition and
/// that the block expression for `b^⊕` matches the direct core inverse.
pub fn factor_left_core_pair(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<CoreCanonicalPair> {
    if !left_core_orth(a, b, tol)? {
        return Err(Error::PredicateFailed(
            "factor_left_core_pair requires a^⊕ b = 0".into(),
        ));
    }
    factor_core_pair(a, b, Side::Left, tol)
}

/// Factor a right core-orthogonal pair of group matrices. The simultaneous
/// form requires the `b2` block of `u^* b u` to vanish as well, which the
/// right relation alone does not force; such pairs are reported as
/// `PredicateFailed` rather than silently mis-factored.
pub fn factor_right_core_pair(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<CoreCanonicalPair> {
    if !right_core_orth(a, b, tol)? {
        return Err(Error::PredicateFailed(
            "factor_right_core_pair requires b a^⊕ = 0".into(),
        ));
    }
    factor_core_pair(a, b, Side::Right, tol)
}

fn factor_core_pair(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    side: Side,
    tol: &Tolerance,
) -> Result<CoreCanonicalPair> {
    let idx_b = coreinv::index(b, tol)?;
    if idx_b > 1 {
        return Err(Error::not_group("b", idx_b));
    }
    let n = a.rows();
    let f = coreinv::core_ep_decompose(a, tol)?;
    if f.k > 1 {
        return Err(Error::not_group("a", f.k));
    }
    let r = f.t;
    let c = &(&f.u.adjoint() * b) * &f.u;
    let b1 = c.submatrix(0, r, 0, r);
    let b2 = c.submatrix(0, r, r, n);
    let b3 = c.submatrix(r, n, 0, r);
    let b4 = c.submatrix(r, n, r, n);
    let must_vanish: &[(&ComplexMatrix, &str)] = match side {
        Side::Left => &[(&b1, "b1"), (&b2, "b2")],
        Side::Right => &[(&b1, "b1"), (&b2, "b2"), (&b3, "b3")],
    };
    for (block, name) in must_vanish {
        if !is_zero(block, b.norm_fro(), tol) {
            return Err(Error::PredicateFailed(format!(
                "canonical {name} block has norm {:.3e}, expected 0",
                block.norm_fro()
            )));
        }
    }
    if !is_group_matrix(&b4, tol)? {
        return Err(Error::not_group("b4", coreinv::index(&b4, tol)?));
    }
    let b4_core = core_inverse(&b4, tol)?;
    if matches!(side, Side::Left) {
        let coupling = &(&ComplexMatrix::identity(n - r) - &(&b4 * &b4_core)) * &b3;
        if !is_zero(&coupling, b3.norm_fro(), tol) {
            return Err(Error::PredicateFailed(format!(
                "(I - b4 b4^⊕) b3 has norm {:.3e}, expected 0",
                coupling.norm_fro()
            )));
        }
    }
    let pair = CoreCanonicalPair {
        u: f.u,
        t_block: f.t_block,
        s_block: f.s_block,
        side,
        b3: matches!(side, Side::Left).then_some(b3),
        b4,
    };
    // The block expression for b^⊕ must reproduce the direct core inverse.
    let direct = core_inverse(b, tol)?;
    let via_form = pair.core_inverse_b(tol)?;
    if !is_zero(&(&via_form - &direct), direct.norm_fro().max(1.0), tol) {
        return Err(Error::PredicateFailed(format!(
            "block core inverse of b deviates from the direct one by {:.3e}",
            (&via_form - &direct).norm_fro()
        )));
    }
    Ok(pair)
}
