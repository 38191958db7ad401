//! Dense complex matrices, SVD, tolerance-based rank, and range utilities.

mod matrix;
mod solve;
mod svd;

pub use matrix::{block_2x2, ComplexMatrix};
pub use solve::{solve_general, solve_hpd};
pub use svd::{svd, SvdFactors};

use crate::{Error, Result};

/// Relative thresholds used by every numerical decision in the crate.
///
/// The same value is passed everywhere so that a matrix and the blocks
/// extracted from it are judged consistently.
#[derive(Debug, Clone, PartialEq)]
pub struct Tolerance {
    /// Rank cutoff: a singular value is retained iff it exceeds
    /// `sigma_max * max(m, n) * rank_rel`.
    pub rank_rel: f64,
    /// Zero test: `is_zero(a, scale)` holds iff `||a||_F <= zero_rel * (1 + scale)`.
    pub zero_rel: f64,
    /// Equality test threshold for matrix identities.
    pub eq_rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rank_rel: 1e-10,
            zero_rel: 1e-9,
            eq_rel: 1e-9,
        }
    }
}

impl Tolerance {
    pub fn new(rank_rel: f64, zero_rel: f64, eq_rel: f64) -> Result<Self> {
        for (name, v) in [("rank_rel", rank_rel), ("zero_rel", zero_rel), ("eq_rel", eq_rel)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidTolerance(format!(
                    "{name} must be a finite nonnegative float, got {v}"
                )));
            }
        }
        Ok(Tolerance {
            rank_rel,
            zero_rel,
            eq_rel,
        })
    }

    /// Derive all three thresholds from a single scalar, preserving the
    /// ratio of the defaults (`rank_rel` one decade below the others).
    pub fn uniform(t: f64) -> Result<Self> {
        Tolerance::new(t / 10.0, t, t)
    }
}

/// Numerical rank: the number of singular values retained at `tol`.
pub fn rank(a: &ComplexMatrix, tol: &Tolerance) -> Result<usize> {
    Ok(svd(a, tol)?.sigma.len())
}

/// Tolerance zero test against a caller-supplied context magnitude.
///
/// Every "= 0" assertion in the predicate modules goes through here, with
/// `scale` chosen as the natural magnitude of the product being tested
/// (for example `||A||_F * ||B||_F` for a product `A * B`), so the tests
/// are homogeneous under scalar scaling of the inputs.
pub fn is_zero(a: &ComplexMatrix, scale: f64, tol: &Tolerance) -> bool {
    a.norm_fro() <= tol.zero_rel * (1.0 + scale)
}

/// Replace a computed matrix by exact zero when its whole mass sits at the
/// arithmetic noise floor of the given context scale. Extracted blocks and
/// projector products that are zero in exact arithmetic otherwise carry
/// junk of order `eps * scale` whose numerical rank (relative to its own
/// largest entry) is full, which would poison range decisions downstream.
pub(crate) fn snap_to_zero(m: ComplexMatrix, context_scale: f64) -> ComplexMatrix {
    if m.norm_fro() <= 100.0 * f64::EPSILON * (1.0 + context_scale) {
        ComplexMatrix::zeros(m.rows(), m.cols())
    } else {
        m
    }
}

/// Whether the column space of `b` is contained in the column space of `a`,
/// i.e. `(I - P_a) b = 0` up to `eq_rel`.
pub fn range_contains(a: &ComplexMatrix, b: &ComplexMatrix, tol: &Tolerance) -> Result<bool> {
    if a.rows() != b.rows() {
        return Err(Error::dim(format!(
            "range_contains needs equal row counts, got {} and {}",
            a.rows(),
            b.rows()
        )));
    }
    // Project b onto R(a) with an orthonormal basis from the SVD; no
    // pseudoinverse needed.
    let f = svd(a, tol)?;
    let r = f.sigma.len();
    let u1 = f.u.submatrix(0, a.rows(), 0, r);
    let proj = &u1 * &(&u1.adjoint() * b);
    let resid = b - &proj;
    Ok(resid.norm_fro() <= tol.eq_rel * (1.0 + b.norm_fro()))
}

/// Whether `R(a)` and `R(b)` intersect only in the zero vector, decided by
/// `rank([a | b]) = rank(a) + rank(b)`.
pub fn ranges_disjoint(a: &ComplexMatrix, b: &ComplexMatrix, tol: &Tolerance) -> Result<bool> {
    if a.rows() != b.rows() {
        return Err(Error::dim(format!(
            "ranges_disjoint needs equal row counts, got {} and {}",
            a.rows(),
            b.rows()
        )));
    }
    let stacked = a.hcat(b);
    Ok(rank(&stacked, tol)? == rank(a, tol)? + rank(b, tol)?)
}
