//! Parallel summability, the parallel sum, and its invariance oracle.
//!
//! Two matrices are *parallel summable* when `a (a+b)^- b` does not depend
//! on the choice of g-inverse `(a+b)^-`; the common value is the parallel
//! sum `a : b = a (a+b)^+ b`. Summability is decided by the projector
//! identities `P_{a+b} a = a` and `a Q_{a+b} = a` (the range-inclusion
//! characterization); sampling g-inverses can only falsify invariance, so
//! the oracle here is a falsification check, not the decision procedure.

use crate::geninv::{pinv, projectors, sample_g_inverse};
use crate::numkit::{self, is_zero, ComplexMatrix, Tolerance};
use crate::ortho::{left_star_orth, right_star_orth, Side, StarCanonicalPair};
use crate::{Error, Result};

/// Verdict of a parallel-summability test.
#[derive(Debug, Clone)]
pub struct PsumVerdict {
    pub summable: bool,
    /// `a : b`, present exactly when `summable`.
    pub sum: Option<ComplexMatrix>,
    /// Which range inclusion failed, when one did.
    pub witness: Option<String>,
    /// Worst relative deviation seen by the invariance oracle, when run.
    pub max_ginv_deviation: Option<f64>,
}

/// Decide parallel summability of `a` and `b` and compute `a : b` when it
/// exists. At least one operand must be non-null.
pub fn is_parallel_summable(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<PsumVerdict> {
    if a.shape() != b.shape() {
        return Err(Error::dim(format!(
            "parallel sum needs equal shapes, got {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    if is_zero(a, 1.0, tol) && is_zero(b, 1.0, tol) {
        return Err(Error::BothZero);
    }
    let s = a + b;
    let pr = projectors(&s, tol)?;
    let row_ok = is_zero(&(&(&pr.p * a) - a), a.norm_fro(), tol);
    let col_ok = is_zero(&(&(a * &pr.q) - a), a.norm_fro(), tol);
    let witness = match (row_ok, col_ok) {
        (false, _) => Some("R(a) is not contained in R(a+b)".to_string()),
        (true, false) => Some("R(a^*) is not contained in R(a^* + b^*)".to_string()),
        _ => None,
    };
    let summable = row_ok && col_ok;
    let sum = if summable {
        Some(&(a * &pinv(&s, tol)?) * b)
    } else {
        None
    };
    Ok(PsumVerdict {
        summable,
        sum,
        witness,
        max_ginv_deviation: None,
    })
}

/// Worst relative deviation of `a g b` from `a (a+b)^+ b` over `trials`
/// seeded g-inverses `g` of `a+b`. Deterministic per `(inputs, seed)`;
/// per-trial seeds are derived by counter splitting so the result does not
/// depend on evaluation order.
pub fn ginverse_invariance_oracle(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    trials: usize,
    seed: u64,
    tol: &Tolerance,
) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::dim("invariance oracle needs equal shapes"));
    }
    let s = a + b;
    let reference = &(a * &pinv(&s, tol)?) * b;
    let scale = 1.0 + a.norm_fro() * b.norm_fro();
    let mut worst = 0.0_f64;
    for trial in 0..trials {
        let g = sample_g_inverse(&s, split_seed(seed, trial as u64), tol)?;
        let dev = (&(&(a * &g) * b) - &reference).norm_fro() / scale;
        worst = worst.max(dev);
    }
    Ok(worst)
}

pub(crate) fn split_seed(seed: u64, counter: u64) -> u64 {
    // SplitMix64 step keyed by the counter.
    let mut z = seed ^ counter.wrapping_mul(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Block criterion for a right star-orthogonal pair in canonical form:
/// summable iff `R(b2^*)` is contained in `R(b4^*)`.
pub fn right_block_psum_criterion(pair: &StarCanonicalPair, tol: &Tolerance) -> Result<bool> {
    let b2 = match (pair.side, &pair.b2) {
        (Side::Right, Some(b2)) => b2,
        _ => {
            return Err(Error::PredicateFailed(
                "right_block_psum_criterion needs a right-side canonical pair".into(),
            ))
        }
    };
    numkit::range_contains(&pair.b4.adjoint(), &b2.adjoint(), tol)
}

/// Block criterion for a left star-orthogonal pair in canonical form:
/// summable iff `R(b3)` is contained in `R(b4)`.
pub fn left_block_psum_criterion(pair: &StarCanonicalPair, tol: &Tolerance) -> Result<bool> {
    let b3 = match (pair.side, &pair.b3) {
        (Side::Left, Some(b3)) => b3,
        _ => {
            return Err(Error::PredicateFailed(
                "left_block_psum_criterion needs a left-side canonical pair".into(),
            ))
        }
    };
    numkit::range_contains(&pair.b4, b3, tol)
}

/// Projector criterion for a right star-orthogonal pair:
/// summable iff `R(Qbar_a b^* a)` is contained in `R(Qbar_a b^* Pbar_a)`,
/// in which case `a : b = 0`.
pub fn right_orth_psum_criterion(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<bool> {
    if !right_star_orth(a, b, tol)? {
        return Err(Error::PredicateFailed(
            "right_orth_psum_criterion requires b a^* = 0".into(),
        ));
    }
    let pr = projectors(a, tol)?;
    let qbar_bh = &pr.q_bar * &b.adjoint();
    let contained_target =
        numkit::snap_to_zero(&qbar_bh * a, a.norm_fro() * b.norm_fro());
    let container = numkit::snap_to_zero(&qbar_bh * &pr.p_bar, b.norm_fro());
    numkit::range_contains(&container, &contained_target, tol)
}

/// Projector criterion for a left star-orthogonal pair:
/// summable iff `R(Pbar_a b a^*)` is contained in `R(Pbar_a b Qbar_a)`,
/// in which case `a : b = 0`.
pub fn left_orth_psum_criterion(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<bool> {
    if !left_star_orth(a, b, tol)? {
        return Err(Error::PredicateFailed(
            "left_orth_psum_criterion requires a^* b = 0".into(),
        ));
    }
    let pr = projectors(a, tol)?;
    let pbar_b = &pr.p_bar * b;
    let contained_target =
        numkit::snap_to_zero(&pbar_b * &a.adjoint(), a.norm_fro() * b.norm_fro());
    let container = numkit::snap_to_zero(&pbar_b * &pr.q_bar, b.norm_fro());
    numkit::range_contains(&container, &contained_target, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ortho::{factor_left_star_pair, factor_right_star_pair};
    use crate::testutil::random_matrix;

    fn m(rows: &[&[f64]]) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(rows).unwrap()
    }

    #[test]
    fn sum_with_zero_is_zero() {
        let tol = Tolerance::default();
        let a = random_matrix(3, 3, 1);
        let z = ComplexMatrix::zeros(3, 3);
        let v = is_parallel_summable(&a, &z, &tol).unwrap();
        assert!(v.summable);
        assert!(v.sum.unwrap().norm_fro() <= 1e-12 * (1.0 + a.norm_fro()));
    }

    #[test]
    fn sum_with_self_is_half() {
        let tol = Tolerance::default();
        for seed in 0..10 {
            let a = random_matrix(3, 4, 60 + seed);
            let v = is_parallel_summable(&a, &a, &tol).unwrap();
            assert!(v.summable);
            let half = a.scale_re(0.5);
            assert!(
                (&v.sum.unwrap() - &half).norm_fro() <= 1e-10 * (1.0 + a.norm_fro()),
                "seed {seed}"
            );
        }
    }

    #[test]
    fn non_summable_pair_with_witness() {
        // R(a^*) = span(e1) escapes R(a^* + b^*) = span(e1 + e2).
        let tol = Tolerance::default();
        let a = m(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let b = m(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let v = is_parallel_summable(&a, &b, &tol).unwrap();
        assert!(!v.summable);
        assert!(v.sum.is_none());
        assert!(v.witness.unwrap().contains("a^*"));
    }

    #[test]
    fn both_zero_rejected() {
        let tol = Tolerance::default();
        let z = ComplexMatrix::zeros(2, 2);
        assert!(matches!(
            is_parallel_summable(&z, &z, &tol),
            Err(Error::BothZero)
        ));
    }

    #[test]
    fn oracle_is_quiet_on_summable_pairs() {
        let tol = Tolerance::default();
        let a = random_matrix(3, 3, 77);
        let dev = ginverse_invariance_oracle(&a, &a, 25, 42, &tol).unwrap();
        assert!(dev <= 1e-9, "deviation {dev}");
    }

    #[test]
    fn oracle_catches_non_summable_pairs() {
        let tol = Tolerance::default();
        let a = m(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let b = m(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let dev = ginverse_invariance_oracle(&a, &b, 25, 42, &tol).unwrap();
        assert!(dev > 1e-4, "deviation {dev}");
    }

    #[test]
    fn oracle_zero_product() {
        let tol = Tolerance::default();
        let a = random_matrix(2, 2, 5);
        let z = ComplexMatrix::zeros(2, 2);
        let dev = ginverse_invariance_oracle(&a, &z, 10, 3, &tol).unwrap();
        assert!(dev <= 1e-12);
    }

    #[test]
    fn oracle_deterministic_per_seed() {
        let tol = Tolerance::default();
        let a = m(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let b = m(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let d1 = ginverse_invariance_oracle(&a, &b, 7, 9, &tol).unwrap();
        let d2 = ginverse_invariance_oracle(&a, &b, 7, 9, &tol).unwrap();
        assert_eq!(d1, d2);
    }

    #[test]
    fn right_block_criterion_examples() {
        let tol = Tolerance::default();
        let a = m(&[&[1.0, 0.0], &[0.0, 0.0]]);

        // b2 = 0: trivially summable.
        let b = ComplexMatrix::from_diag(&[0.0, 2.0]);
        let pair = factor_right_star_pair(&a, &b, &tol).unwrap();
        assert!(right_block_psum_criterion(&pair, &tol).unwrap());

        // b2 = b4 = 1: spans equal.
        let b = m(&[&[0.0, 1.0], &[0.0, 1.0]]);
        let pair = factor_right_star_pair(&a, &b, &tol).unwrap();
        assert!(right_block_psum_criterion(&pair, &tol).unwrap());

        // b4 = 0 with b2 nonzero: R(b4^*) = 0 cannot contain R(b2^*).
        let b = m(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let pair = factor_right_star_pair(&a, &b, &tol).unwrap();
        assert!(!right_block_psum_criterion(&pair, &tol).unwrap());
    }

    #[test]
    fn right_block_criterion_matches_summability() {
        let tol = Tolerance::default();
        let a = m(&[&[1.0, 0.0], &[0.0, 0.0]]);
        for (b, expected) in [
            (m(&[&[0.0, 1.0], &[0.0, 1.0]]), true),
            (m(&[&[0.0, 1.0], &[0.0, 0.0]]), false),
        ] {
            let pair = factor_right_star_pair(&a, &b, &tol).unwrap();
            let crit = right_block_psum_criterion(&pair, &tol).unwrap();
            let verdict = is_parallel_summable(&a, &b, &tol).unwrap();
            assert_eq!(crit, verdict.summable);
            assert_eq!(crit, expected);
        }
    }

    #[test]
    fn left_block_criterion_examples() {
        let tol = Tolerance::default();
        let a = m(&[&[1.0, 0.0], &[0.0, 0.0]]);

        let b = ComplexMatrix::from_diag(&[0.0, 2.0]);
        let pair = factor_left_star_pair(&a, &b, &tol).unwrap();
        assert!(left_block_psum_criterion(&pair, &tol).unwrap());

        let b = m(&[&[0.0, 0.0], &[1.0, 1.0]]);
        let pair = factor_left_star_pair(&a, &b, &tol).unwrap();
        assert!(left_block_psum_criterion(&pair, &tol).unwrap());

        let b = m(&[&[0.0, 0.0], &[1.0, 0.0]]);
        let pair = factor_left_star_pair(&a, &b, &tol).unwrap();
        assert!(!left_block_psum_criterion(&pair, &tol).unwrap());
    }

    #[test]
    fn criterion_side_checks() {
        let tol = Tolerance::default();
        let a = m(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let b = ComplexMatrix::from_diag(&[0.0, 2.0]);
        let right = factor_right_star_pair(&a, &b, &tol).unwrap();
        let left = factor_left_star_pair(&a, &b, &tol).unwrap();
        assert!(left_block_psum_criterion(&right, &tol).is_err());
        assert!(right_block_psum_criterion(&left, &tol).is_err());
    }

    #[test]
    fn right_orth_criterion_examples() {
        let tol = Tolerance::default();
        let a = m(&[&[1.0, 0.0], &[0.0, 0.0]]);

        // (a+b)^{-1} = [[1, -1], [0, 1]] gives a : b = 0 by hand.
        let b = m(&[&[0.0, 1.0], &[0.0, 1.0]]);
        assert!(right_orth_psum_criterion(&a, &b, &tol).unwrap());
        let v = is_parallel_summable(&a, &b, &tol).unwrap();
        assert!(v.summable);
        assert!(is_zero(
            &v.sum.unwrap(),
            a.norm_fro() * b.norm_fro(),
            &tol
        ));

        let b = m(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(!right_orth_psum_criterion(&a, &b, &tol).unwrap());

        let z = ComplexMatrix::zeros(2, 2);
        assert!(right_orth_psum_criterion(&a, &z, &tol).unwrap());
    }

    #[test]
    fn right_orth_criterion_needs_predicate() {
        let tol = Tolerance::default();
        let a = m(&[&[1.0, 1.0], &[0.0, 0.0]]);
        let b = m(&[&[0.0, 0.0], &[1.0, 0.0]]);
        // Only the left relation holds for this pair.
        assert!(matches!(
            right_orth_psum_criterion(&a, &b, &tol),
            Err(Error::PredicateFailed(_))
        ));
    }

    #[test]
    fn left_orth_criterion_examples() {
        let tol = Tolerance::default();
        // Transposed mirrors of the right-criterion cases.
        let a = m(&[&[1.0, 0.0], &[0.0, 0.0]]);

        let b = m(&[&[0.0, 0.0], &[1.0, 1.0]]);
        assert!(left_orth_psum_criterion(&a, &b, &tol).unwrap());
        let v = is_parallel_summable(&a, &b, &tol).unwrap();
        assert!(v.summable);
        assert!(is_zero(&v.sum.unwrap(), a.norm_fro() * b.norm_fro(), &tol));

        let b = m(&[&[0.0, 0.0], &[1.0, 0.0]]);
        assert!(!left_orth_psum_criterion(&a, &b, &tol).unwrap());

        let z = ComplexMatrix::zeros(2, 2);
        assert!(left_orth_psum_criterion(&a, &z, &tol).unwrap());

        // The running left-orthogonal pair: criterion agrees with the
        // summability decision, whatever it is.
        let a31 = m(&[&[1.0, 1.0], &[0.0, 0.0]]);
        let b31 = m(&[&[0.0, 0.0], &[1.0, 0.0]]);
        let crit = left_orth_psum_criterion(&a31, &b31, &tol).unwrap();
        let verdict = is_parallel_summable(&a31, &b31, &tol).unwrap();
        assert_eq!(crit, verdict.summable);
    }
}
