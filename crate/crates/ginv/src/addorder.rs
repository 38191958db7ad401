//! Star and core partial orders, additivity of the Moore-Penrose and core
//! inverses, and the related criteria.
//!
//! *Dagger additivity* means `(a+b)^+ = a^+ + b^+`; *rank additivity*
//! means `rank(a+b) = rank(a) + rank(b)`. Under one-sided star
//! orthogonality these reduce to one block of the canonical form
//! vanishing, which is what the `*_additivity_criterion` functions test
//! without ever factoring the pair.

use std::collections::BTreeMap;

use crate::coreinv::{core_inverse, index, is_group_matrix};
use crate::geninv::{pinv, projectors};
use crate::numkit::{self, is_zero, ComplexMatrix, Tolerance};
use crate::ortho::{left_star_orth, right_star_orth, star_orth};
use crate::{Error, Result};

/// Outcome of the additivity battery for one pair.
#[derive(Debug, Clone)]
pub struct AdditivityReport {
    pub dagger_additive: bool,
    pub rank_additive: bool,
    /// Only populated for square pairs whose core inverses all exist;
    /// `None` otherwise.
    pub core_additive: Option<bool>,
    /// Named residuals backing the booleans.
    pub criterion_residuals: BTreeMap<String, f64>,
}

/// Star partial order `a <=* b`: `a^* a = a^* b` and `a a^* = b a^*`.
pub fn star_leq(a: &ComplexMatrix, b: &ComplexMatrix, tol: &Tolerance) -> Result<bool> {
    if a.shape() != b.shape() {
        return Err(Error::dim("star_leq needs equal shapes"));
    }
    let scale = a.norm_fro() * (a.norm_fro() + b.norm_fro());
    let left = &(&a.adjoint() * a) - &(&a.adjoint() * b);
    let right = &(a * &a.adjoint()) - &(b * &a.adjoint());
    Ok(is_zero(&left, scale, tol) && is_zero(&right, scale, tol))
}

/// The two halves of the star-order characterization: rank subtractivity
/// `rank(b - a) = rank(b) - rank(a)` and dagger subtractivity
/// `(b - a)^+ = b^+ - a^+`.
pub fn star_characterization_check(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<(bool, bool)> {
    if a.shape() != b.shape() {
        return Err(Error::dim("star_characterization_check needs equal shapes"));
    }
    let diff = b - a;
    let rank_sub = numkit::rank(&diff, tol)? as i64
        == numkit::rank(b, tol)? as i64 - numkit::rank(a, tol)? as i64;
    let a_pinv = pinv(a, tol)?;
    let b_pinv = pinv(b, tol)?;
    let dagger_sub = is_zero(
        &(&pinv(&diff, tol)? - &(&b_pinv - &a_pinv)),
        a_pinv.norm_fro() + b_pinv.norm_fro(),
        tol,
    );
    Ok((rank_sub, dagger_sub))
}

/// Test dagger and rank additivity directly, plus core additivity when the
/// inputs are square group matrices.
pub fn dagger_additivity(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<AdditivityReport> {
    if a.shape() != b.shape() {
        return Err(Error::dim("dagger_additivity needs equal shapes"));
    }
    let sum = a + b;
    let a_pinv = pinv(a, tol)?;
    let b_pinv = pinv(b, tol)?;
    let sum_pinv = pinv(&sum, tol)?;
    let pinv_scale = a_pinv.norm_fro() + b_pinv.norm_fro();
    let dagger_resid = (&sum_pinv - &(&a_pinv + &b_pinv)).norm_fro();
    let dagger_additive = dagger_resid <= tol.eq_rel * (1.0 + pinv_scale);
    let rank_additive =
        numkit::rank(&sum, tol)? == numkit::rank(a, tol)? + numkit::rank(b, tol)?;

    let mut residuals = BTreeMap::new();
    residuals.insert("dagger".to_string(), dagger_resid);
    // The one-sided criteria quantities, recorded for every pair.
    let pra = projectors(a, tol)?;
    let right_crit = &(&a.adjoint() * b) * &pra.q_bar;
    let left_crit = &(&pra.p_bar * b) * &a.adjoint();
    residuals.insert("right_criterion".to_string(), right_crit.norm_fro());
    residuals.insert("left_criterion".to_string(), left_crit.norm_fro());

    let core_additive = core_additivity_value(a, b, &sum, tol, &mut residuals)?;

    Ok(AdditivityReport {
        dagger_additive,
        rank_additive,
        core_additive,
        criterion_residuals: residuals,
    })
}

fn core_additivity_value(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    sum: &ComplexMatrix,
    tol: &Tolerance,
    residuals: &mut BTreeMap<String, f64>,
) -> Result<Option<bool>> {
    if !a.is_square() || !is_group_matrix(a, tol)? || !is_group_matrix(b, tol)? {
        return Ok(None);
    }
    // A failed membership of the sum counts as not additive rather than an
    // error; the equivalences this feeds must stay checkable. No residual
    // is recorded because there is no core inverse to compare against.
    if !is_group_matrix(sum, tol)? {
        return Ok(Some(false));
    }
    let a_core = core_inverse(a, tol)?;
    let b_core = core_inverse(b, tol)?;
    let sum_core = core_inverse(sum, tol)?;
    let resid = (&sum_core - &(&a_core + &b_core)).norm_fro();
    residuals.insert("core".to_string(), resid);
    Ok(Some(
        resid <= tol.eq_rel * (1.0 + a_core.norm_fro() + b_core.norm_fro()),
    ))
}

/// For a right star-orthogonal pair: dagger additive iff
/// `a^* b (I - Q_a) = 0`.
pub fn right_additivity_criterion(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<bool> {
    if !right_star_orth(a, b, tol)? {
        return Err(Error::PredicateFailed(
            "right_additivity_criterion requires b a^* = 0".into(),
        ));
    }
    let q_bar = projectors(a, tol)?.q_bar;
    let crit = &(&a.adjoint() * b) * &q_bar;
    Ok(is_zero(&crit, a.norm_fro() * b.norm_fro(), tol))
}

/// For a left star-orthogonal pair: dagger additive iff
/// `(I - P_a) b a^* = 0`.
pub fn left_additivity_criterion(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<bool> {
    if !left_star_orth(a, b, tol)? {
        return Err(Error::PredicateFailed(
            "left_additivity_criterion requires a^* b = 0".into(),
        ));
    }
    let p_bar = projectors(a, tol)?.p_bar;
    let crit = &(&p_bar * b) * &a.adjoint();
    Ok(is_zero(&crit, a.norm_fro() * b.norm_fro(), tol))
}

/// For a star-orthogonal pair, dagger additivity always holds; returns the
/// observed value so the suite can treat `false` as a theorem violation.
pub fn star_orth_implies_additive(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<bool> {
    if !star_orth(a, b, tol)? {
        return Err(Error::PredicateFailed(
            "star_orth_implies_additive requires a^* b = 0 and b a^* = 0".into(),
        ));
    }
    Ok(dagger_additivity(a, b, tol)?.dagger_additive)
}

/// The identities `a b^* + b b^* = 0` and `b^* a + b^* b = 0`, equivalent
/// to `b <=* -a` and sufficient for dagger additivity.
pub fn neg_star_conditions(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<bool> {
    if a.shape() != b.shape() {
        return Err(Error::dim("neg_star_conditions needs equal shapes"));
    }
    let scale = (a.norm_fro() + b.norm_fro()) * b.norm_fro();
    let first = &(a * &b.adjoint()) + &(b * &b.adjoint());
    let second = &(&b.adjoint() * a) + &(&b.adjoint() * b);
    Ok(is_zero(&first, scale, tol) && is_zero(&second, scale, tol))
}

/// `(a+b)^+` for a right star-orthogonal pair with disjoint ranges, via
/// `(a+b)^* ([(Pbar_a b)(Pbar_a b)^*]^+ + [(Pbar_b a)(Pbar_b a)^*]^+)`.
pub fn disjoint_range_pinv_sum_right(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<ComplexMatrix> {
    if !right_star_orth(a, b, tol)? {
        return Err(Error::PredicateFailed(
            "disjoint_range_pinv_sum_right requires b a^* = 0".into(),
        ));
    }
    if !numkit::ranges_disjoint(a, b, tol)? {
        return Err(Error::PredicateFailed(
            "disjoint_range_pinv_sum_right requires R(a) and R(b) disjoint".into(),
        ));
    }
    let pa_bar = projectors(a, tol)?.p_bar;
    let pb_bar = projectors(b, tol)?.p_bar;
    let pb_part = gram_pinv(&(&pa_bar * b), tol)?;
    let pa_part = gram_pinv(&(&pb_bar * a), tol)?;
    Ok(&(a + b).adjoint() * &(&pb_part + &pa_part))
}

/// `(a+b)^+` for a left star-orthogonal pair whose adjoint ranges are
/// disjoint; the mirrored formula multiplies `(a+b)^*` from the right.
pub fn disjoint_range_pinv_sum_left(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<ComplexMatrix> {
    if !left_star_orth(a, b, tol)? {
        return Err(Error::PredicateFailed(
            "disjoint_range_pinv_sum_left requires a^* b = 0".into(),
        ));
    }
    if !numkit::ranges_disjoint(&a.adjoint(), &b.adjoint(), tol)? {
        return Err(Error::PredicateFailed(
            "disjoint_range_pinv_sum_left requires R(a^*) and R(b^*) disjoint".into(),
        ));
    }
    let pa_bar = projectors(&a.adjoint(), tol)?.p_bar;
    let pb_bar = projectors(&b.adjoint(), tol)?.p_bar;
    let pb_part = gram_pinv(&(&pa_bar * &b.adjoint()), tol)?;
    let pa_part = gram_pinv(&(&pb_bar * &a.adjoint()), tol)?;
    Ok(&(&pb_part + &pa_part) * &(a + b).adjoint())
}

fn gram_pinv(x: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    pinv(&(x * &x.adjoint()), tol)
}

/// Core partial order `a <=⊕ b`: `a^⊕ a = a^⊕ b` and `a a^⊕ = b a^⊕`.
/// Needs the core inverse of `a` only.
pub fn core_leq(a: &ComplexMatrix, b: &ComplexMatrix, tol: &Tolerance) -> Result<bool> {
    if a.shape() != b.shape() {
        return Err(Error::dim("core_leq needs equal shapes"));
    }
    let idx = index(a, tol)?;
    if idx > 1 {
        return Err(Error::not_group("a", idx));
    }
    let a_core = core_inverse(a, tol)?;
    let scale = a_core.norm_fro() * (a.norm_fro() + b.norm_fro());
    let left = &(&a_core * a) - &(&a_core * b);
    let right = &(a * &a_core) - &(b * &a_core);
    Ok(is_zero(&left, scale, tol) && is_zero(&right, scale, tol))
}

/// Result of the core-additivity equivalence for a left core-orthogonal
/// pair: additivity holds iff both right relations do.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoreAdditivityCheck {
    pub core_additive: bool,
    pub a_right_core_orth_b: bool,
    pub b_right_core_orth_a: bool,
}

/// Evaluate the three sides of the core-additivity equivalence for group
/// matrices with `a^⊕ b = 0`.
pub fn core_additivity_theorem(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<CoreAdditivityCheck> {
    for (name, mtx) in [("a", a), ("b", b)] {
        let idx = index(mtx, tol)?;
        if idx > 1 {
            return Err(Error::not_group(name, idx));
        }
    }
    if !crate::ortho::left_core_orth(a, b, tol)? {
        return Err(Error::PredicateFailed(
            "core_additivity_theorem requires a^⊕ b = 0".into(),
        ));
    }
    let sum = a + b;
    let core_additive = if is_group_matrix(&sum, tol)? {
        let a_core = core_inverse(a, tol)?;
        let b_core = core_inverse(b, tol)?;
        let sum_core = core_inverse(&sum, tol)?;
        is_zero(
            &(&sum_core - &(&a_core + &b_core)),
            a_core.norm_fro() + b_core.norm_fro(),
            tol,
        )
    } else {
        false
    };
    Ok(CoreAdditivityCheck {
        core_additive,
        a_right_core_orth_b: crate::ortho::right_core_orth(a, b, tol)?,
        b_right_core_orth_a: crate::ortho::right_core_orth(b, a, tol)?,
    })
}

/// The paired identities `a^⊕ b + a^⊕ a = 0` and `b a^⊕ + a a^⊕ = 0`,
/// equivalent to `(a+b) a = 0 and a^* (a+b) = 0` and to `a <=⊕ -b`.
pub fn n1_conditions(a: &ComplexMatrix, b: &ComplexMatrix, tol: &Tolerance) -> Result<bool> {
    if a.shape() != b.shape() {
        return Err(Error::dim("n1_conditions needs equal shapes"));
    }
    let idx = index(a, tol)?;
    if idx > 1 {
        return Err(Error::not_group("a", idx));
    }
    let a_core = core_inverse(a, tol)?;
    let scale = a_core.norm_fro() * (a.norm_fro() + b.norm_fro());
    let first = &(&a_core * b) + &(&a_core * a);
    let second = &(b * &a_core) + &(a * &a_core);
    Ok(is_zero(&first, scale, tol) && is_zero(&second, scale, tol))
}

/// For a pair satisfying the N1 identities, both provable inclusions must
/// hold: `R(a)` inside `R(b)` and `R(a^*)` inside `R(b^*)`. Returns their
/// conjunction; `false` is a theorem violation.
pub fn theorem_sb7_check(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<bool> {
    if !n1_conditions(a, b, tol)? {
        return Err(Error::PredicateFailed(
            "theorem_sb7_check requires the N1 identities".into(),
        ));
    }
    Ok(numkit::range_contains(b, a, tol)?
        && numkit::range_contains(&b.adjoint(), &a.adjoint(), tol)?)
}

/// The five equivalent statements for an N1 pair of group matrices:
/// commutation, `a^2 = -ab`, `a^2 <=⊕ b^2`, `a+b <=⊕ b`, and core
/// additivity. All five agree on every N1 pair.
pub fn theorem_sb11_equivalences(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<[bool; 5]> {
    for (name, mtx) in [("a", a), ("b", b)] {
        let idx = index(mtx, tol)?;
        if idx > 1 {
            return Err(Error::not_group(name, idx));
        }
    }
    if !n1_conditions(a, b, tol)? {
        return Err(Error::PredicateFailed(
            "theorem_sb11_equivalences requires the N1 identities".into(),
        ));
    }
    let prod_scale = a.norm_fro() * b.norm_fro();
    let commute = is_zero(&(&(a * b) - &(b * a)), prod_scale, tol);
    let sq_identity = is_zero(
        &(&(a * a) + &(a * b)),
        a.norm_fro() * (a.norm_fro() + b.norm_fro()),
        tol,
    );

    let a2 = a * a;
    let b2 = b * b;
    let idx_a2 = index(&a2, tol)?;
    if idx_a2 > 1 {
        return Err(Error::not_group("a^2", idx_a2));
    }
    let order_squares = core_leq(&a2, &b2, tol)?;

    let sum = a + b;
    let idx_sum = index(&sum, tol)?;
    if idx_sum > 1 {
        return Err(Error::not_group("a+b", idx_sum));
    }
    let order_sum = core_leq(&sum, b, tol)?;

    let a_core = core_inverse(a, tol)?;
    let b_core = core_inverse(b, tol)?;
    let sum_core = core_inverse(&sum, tol)?;
    let core_additive = is_zero(
        &(&sum_core - &(&a_core + &b_core)),
        a_core.norm_fro() + b_core.norm_fro(),
        tol,
    );

    Ok([commute, sq_identity, order_squares, order_sum, core_additive])
}
