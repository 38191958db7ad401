//! Seeded generators for every structured matrix family the campaigns use.
//!
//! Pairs are built directly in their canonical coordinates and conjugated
//! by random unitaries, so membership in the requested family holds by
//! construction, not by rejection sampling. All structured blocks have
//! singular values in `[1e-2, 1e2]`, keeping every instance far from the
//! rank cutoff.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::numkit::{block_2x2, ComplexMatrix};
use crate::{Error, Result};

/// The structured families the harness can produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Single `m x n` matrix of prescribed rank.
    RankR,
    /// Single square group matrix of prescribed rank.
    GroupMatrix,
    /// `b a^* = 0` by construction.
    RightStarPair,
    /// `a^* b = 0` by construction.
    LeftStarPair,
    /// `a^⊕ b = 0`, both group matrices.
    LeftCorePair,
    /// `b a^⊕ = 0` with `b` block-diagonal against `a`, both group.
    RightCorePair,
    /// `a^* b = 0` and `b a^* = 0`.
    StarOrthPair,
    /// `(a+b) a = 0` and `a^* (a+b) = 0`, both group.
    N1Pair,
    /// Right star-orthogonal with `R(a)` and `R(b)` disjoint.
    DisjointRangePair,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::RankR => "rank_r",
            Family::GroupMatrix => "group_matrix",
            Family::RightStarPair => "right_star_pair",
            Family::LeftStarPair => "left_star_pair",
            Family::LeftCorePair => "left_core_pair",
            Family::RightCorePair => "right_core_pair",
            Family::StarOrthPair => "star_orth_pair",
            Family::N1Pair => "n1_pair",
            Family::DisjointRangePair => "disjoint_range_pair",
        }
    }

    pub fn from_name(s: &str) -> Option<Family> {
        Some(match s {
            "rank_r" => Family::RankR,
            "group_matrix" => Family::GroupMatrix,
            "right_star_pair" => Family::RightStarPair,
            "left_star_pair" => Family::LeftStarPair,
            "left_core_pair" => Family::LeftCorePair,
            "right_core_pair" => Family::RightCorePair,
            "star_orth_pair" => Family::StarOrthPair,
            "n1_pair" => Family::N1Pair,
            "disjoint_range_pair" => Family::DisjointRangePair,
            _ => return None,
        })
    }

    pub fn is_pair(self) -> bool {
        !matches!(self, Family::RankR | Family::GroupMatrix)
    }

    pub fn needs_square(self) -> bool {
        matches!(
            self,
            Family::GroupMatrix | Family::LeftCorePair | Family::RightCorePair | Family::N1Pair
        )
    }
}

/// Request for one deterministic draw from a family.
///
/// `rank_params` is interpreted per family:
///
/// * `rank_r`, `group_matrix`: `[r]`
/// * `right_star_pair`: `[r, rank_b4, rank_b2]`
/// * `left_star_pair`: `[r, rank_b4, rank_b3]`
/// * `star_orth_pair`: `[r, rank_b4]`
/// * `left_core_pair`: `[r, rank_b4, couple_b3, zero_s]` (flags 0/1)
/// * `right_core_pair`: `[r, rank_b4, zero_s]`
/// * `n1_pair`: `[r, rank_d4, zero_s]`
/// * `disjoint_range_pair`: `[r, rank_b4]`
#[derive(Debug, Clone)]
pub struct GenSpec {
    pub family: Family,
    pub rows: usize,
    pub cols: usize,
    pub rank_params: Vec<usize>,
    pub seed: u64,
}

/// One or two matrices, depending on the family.
#[derive(Debug, Clone)]
pub enum Generated {
    Single(ComplexMatrix),
    Pair(ComplexMatrix, ComplexMatrix),
}

impl Generated {
    pub fn single(self) -> ComplexMatrix {
        match self {
            Generated::Single(a) => a,
            Generated::Pair(..) => panic!("expected a single matrix"),
        }
    }

    pub fn pair(self) -> (ComplexMatrix, ComplexMatrix) {
        match self {
            Generated::Pair(a, b) => (a, b),
            Generated::Single(_) => panic!("expected a pair"),
        }
    }
}

const DIM_LIMIT: usize = 12;

/// Default log10 range for block singular values.
const DEFAULT_BAND: (f64, f64) = (-2.0, 2.0);

/// Draw from the requested family; deterministic per `GenSpec`.
pub fn generate(spec: &GenSpec) -> Result<Generated> {
    generate_in_band(spec, DEFAULT_BAND)
}

/// Like [`generate`], with block singular values confined to
/// `10^band.0 ..= 10^band.1`; campaigns narrow the band so that boolean
/// decisions stay decades away from tolerance thresholds.
pub(crate) fn generate_in_band(spec: &GenSpec, band: (f64, f64)) -> Result<Generated> {
    assert!(-2.0 <= band.0 && band.0 <= band.1 && band.1 <= 2.0);
    validate(spec)?;
    let mut rng = Draw {
        rng: ChaCha8Rng::seed_from_u64(spec.seed),
        band,
    };
    let rng = &mut rng;
    let (m, n) = (spec.rows, spec.cols);
    let p = &spec.rank_params;
    let r = p[0];

    let out = match spec.family {
        Family::RankR => Generated::Single(structured_rank(m, n, r, rng)),
        Family::GroupMatrix => {
            let (a, _u) = group_in_basis(n, r, false, rng);
            Generated::Single(a)
        }
        Family::RightStarPair => {
            let u = random_unitary_draw(m, rng);
            let v = random_unitary_draw(n, rng);
            let a = conj_uv(&u, &sigma_block(m, n, r, rng), &v);
            let b2 = structured_rank(r, n - r, p[2], rng);
            let b4 = structured_rank(m - r, n - r, p[1], rng);
            let inner = block_2x2(
                &ComplexMatrix::zeros(r, r),
                &b2,
                &ComplexMatrix::zeros(m - r, r),
                &b4,
            );
            Generated::Pair(a, conj_uv(&u, &inner, &v))
        }
        Family::LeftStarPair => {
            let u = random_unitary_draw(m, rng);
            let v = random_unitary_draw(n, rng);
            let a = conj_uv(&u, &sigma_block(m, n, r, rng), &v);
            let b3 = structured_rank(m - r, r, p[2], rng);
            let b4 = structured_rank(m - r, n - r, p[1], rng);
            let inner = block_2x2(
                &ComplexMatrix::zeros(r, r),
                &ComplexMatrix::zeros(r, n - r),
                &b3,
                &b4,
            );
            Generated::Pair(a, conj_uv(&u, &inner, &v))
        }
        Family::StarOrthPair => {
            let u = random_unitary_draw(m, rng);
            let v = random_unitary_draw(n, rng);
            let a = conj_uv(&u, &sigma_block(m, n, r, rng), &v);
            let b4 = structured_rank(m - r, n - r, p[1], rng);
            let inner = block_2x2(
                &ComplexMatrix::zeros(r, r),
                &ComplexMatrix::zeros(r, n - r),
                &ComplexMatrix::zeros(m - r, r),
                &b4,
            );
            Generated::Pair(a, conj_uv(&u, &inner, &v))
        }
        Family::LeftCorePair => {
            let couple = p[2] != 0;
            let zero_s = p[3] != 0;
            let u = random_unitary_draw(n, rng);
            let a = group_against(&u, n, r, zero_s, rng);
            let b4 = group_block(n - r, p[1], rng);
            // b3 = b4 c keeps R(b3) inside R(b4), which is exactly what
            // membership of b in the group matrices requires.
            let b3 = if couple {
                &b4 * &gaussian(n - r, r, rng)
            } else {
                ComplexMatrix::zeros(n - r, r)
            };
            let inner = block_2x2(
                &ComplexMatrix::zeros(r, r),
                &ComplexMatrix::zeros(r, n - r),
                &b3,
                &b4,
            );
            Generated::Pair(a, conj_u(&u, &inner))
        }
        Family::RightCorePair => {
            let zero_s = p[2] != 0;
            let u = random_unitary_draw(n, rng);
            let a = group_against(&u, n, r, zero_s, rng);
            let b4 = group_block(n - r, p[1], rng);
            let inner = block_2x2(
                &ComplexMatrix::zeros(r, r),
                &ComplexMatrix::zeros(r, n - r),
                &ComplexMatrix::zeros(n - r, r),
                &b4,
            );
            Generated::Pair(a, conj_u(&u, &inner))
        }
        Family::N1Pair => {
            let zero_s = p[2] != 0;
            let u = random_unitary_draw(n, rng);
            let t = structured_rank(r, r, r, rng);
            let s = if zero_s {
                ComplexMatrix::zeros(r, n - r)
            } else {
                gaussian(r, n - r, rng)
            };
            let d4 = group_block(n - r, p[1], rng);
            let a_inner = block_2x2(
                &t,
                &s,
                &ComplexMatrix::zeros(n - r, r),
                &ComplexMatrix::zeros(n - r, n - r),
            );
            // b = -a + diag(0, d4) satisfies (a+b) a = 0 and a^* (a+b) = 0
            // because a+b acts only on the trailing block.
            let b_inner = block_2x2(&(-&t), &(-&s), &ComplexMatrix::zeros(n - r, r), &d4);
            Generated::Pair(conj_u(&u, &a_inner), conj_u(&u, &b_inner))
        }
        Family::DisjointRangePair => {
            let u = random_unitary_draw(m, rng);
            let v = random_unitary_draw(n, rng);
            let a = conj_uv(&u, &sigma_block(m, n, r, rng), &v);
            let b4 = structured_rank(m - r, n - r, p[1], rng);
            // b2 = e b4 forces N(b4) inside N(b2), so no nonzero column of
            // b can fall into the leading block alone.
            let b2 = &gaussian(r, m - r, rng) * &b4;
            let inner = block_2x2(
                &ComplexMatrix::zeros(r, r),
                &b2,
                &ComplexMatrix::zeros(m - r, r),
                &b4,
            );
            Generated::Pair(a, conj_uv(&u, &inner, &v))
        }
    };
    Ok(out)
}

fn validate(spec: &GenSpec) -> Result<()> {
    let (m, n) = (spec.rows, spec.cols);
    let fam = spec.family;
    if m == 0 || n == 0 || m > DIM_LIMIT || n > DIM_LIMIT {
        return Err(Error::InvalidGenSpec(format!(
            "dims {m}x{n} outside [1, {DIM_LIMIT}]"
        )));
    }
    if fam.needs_square() && m != n {
        return Err(Error::InvalidGenSpec(format!(
            "{} needs a square shape, got {m}x{n}",
            fam.name()
        )));
    }
    let expected_params = match fam {
        Family::RankR | Family::GroupMatrix => 1,
        Family::StarOrthPair | Family::DisjointRangePair => 2,
        Family::RightStarPair | Family::LeftStarPair | Family::RightCorePair | Family::N1Pair => 3,
        Family::LeftCorePair => 4,
    };
    if spec.rank_params.len() != expected_params {
        return Err(Error::InvalidGenSpec(format!(
            "{} takes {expected_params} rank parameters, got {}",
            fam.name(),
            spec.rank_params.len()
        )));
    }
    let r = spec.rank_params[0];
    if r > m.min(n) {
        return Err(Error::InvalidGenSpec(format!(
            "leading rank {r} exceeds min(dims) = {}",
            m.min(n)
        )));
    }
    let check_block = |name: &str, rank: usize, rows: usize, cols: usize| -> Result<()> {
        if rank > rows.min(cols) {
            return Err(Error::InvalidGenSpec(format!(
                "{name} rank {rank} exceeds its {rows}x{cols} block"
            )));
        }
        Ok(())
    };
    match fam {
        Family::RightStarPair => {
            check_block("b4", spec.rank_params[1], m - r, n - r)?;
            check_block("b2", spec.rank_params[2], r, n - r)?;
        }
        Family::LeftStarPair => {
            check_block("b4", spec.rank_params[1], m - r, n - r)?;
            check_block("b3", spec.rank_params[2], m - r, r)?;
        }
        Family::StarOrthPair | Family::DisjointRangePair => {
            check_block("b4", spec.rank_params[1], m - r, n - r)?;
        }
        Family::LeftCorePair | Family::RightCorePair | Family::N1Pair => {
            check_block("trailing block", spec.rank_params[1], n - r, n - r)?;
        }
        _ => {}
    }
    Ok(())
}

/// Seeded randomness plus the singular-value band for structured blocks.
struct Draw {
    rng: ChaCha8Rng,
    band: (f64, f64),
}

fn gaussian(rows: usize, cols: usize, rng: &mut Draw) -> ComplexMatrix {
    let entries = (0..rows * cols)
        .map(|_| {
            let re: f64 = rng.rng.sample(StandardNormal);
            let im: f64 = rng.rng.sample(StandardNormal);
            Complex64::new(re, im)
        })
        .collect();
    ComplexMatrix::new(rows, cols, entries).expect("gaussian entries are finite")
}

fn gaussian_raw(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let entries = (0..rows * cols)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        })
        .collect();
    ComplexMatrix::new(rows, cols, entries).expect("gaussian entries are finite")
}

fn random_unitary_draw(n: usize, rng: &mut Draw) -> ComplexMatrix {
    let seed = rng.rng.gen::<u64>();
    let mut inner = ChaCha8Rng::seed_from_u64(seed);
    random_unitary(n, &mut inner)
}

/// Unitary factor from Householder QR of a seeded Gaussian matrix.
pub(crate) fn random_unitary(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let mut a = gaussian_raw(n, n, rng);
    let mut q = ComplexMatrix::identity(n);
    for k in 0..n.saturating_sub(1) {
        // Householder vector for column k below the diagonal.
        let mut v: Vec<Complex64> = (k..n).map(|i| a.get(i, k)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = v[0];
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        v[0] += phase * norm;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // a <- (I - 2 v v^*) a on rows k.., q <- q (I - 2 v v^*).
        for j in 0..n {
            let dot: Complex64 = v
                .iter()
                .enumerate()
                .map(|(i, vi)| vi.conj() * a.get(k + i, j))
                .sum();
            for (i, vi) in v.iter().enumerate() {
                let val = a.get(k + i, j) - 2.0 * dot * vi;
                a.set(k + i, j, val);
            }
        }
        for i in 0..n {
            let dot: Complex64 = v
                .iter()
                .enumerate()
                .map(|(jj, vj)| q.get(i, k + jj) * *vj)
                .sum();
            for (jj, vj) in v.iter().enumerate() {
                let val = q.get(i, k + jj) - 2.0 * dot * vj.conj();
                q.set(i, k + jj, val);
            }
        }
    }
    q
}

/// `rows x cols` matrix of exact rank `rank` with singular values drawn
/// log-uniformly from `[1e-2, 1e2]`.
fn structured_rank(rows: usize, cols: usize, rank: usize, rng: &mut Draw) -> ComplexMatrix {
    let u = random_unitary_draw(rows, rng);
    let v = random_unitary_draw(cols, rng);
    let mut s = ComplexMatrix::zeros(rows, cols);
    for i in 0..rank {
        s.set(i, i, Complex64::new(log_uniform(rng), 0.0));
    }
    conj_uv(&u, &s, &v)
}

fn log_uniform(rng: &mut Draw) -> f64 {
    let (lo, hi) = rng.band;
    if lo == hi {
        return 10f64.powf(lo);
    }
    10f64.powf(rng.rng.gen_range(lo..hi))
}

fn sigma_block(m: usize, n: usize, r: usize, rng: &mut Draw) -> ComplexMatrix {
    let mut sigma: Vec<f64> = (0..r).map(|_| log_uniform(rng)).collect();
    sigma.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut s = ComplexMatrix::zeros(m, n);
    for (i, &sv) in sigma.iter().enumerate() {
        s.set(i, i, Complex64::new(sv, 0.0));
    }
    s
}

/// Group matrix of prescribed rank in its own random basis.
fn group_block(n: usize, rank: usize, rng: &mut Draw) -> ComplexMatrix {
    let (a, _u) = group_in_basis(n, rank, false, rng);
    a
}

fn group_in_basis(
    n: usize,
    rank: usize,
    zero_s: bool,
    rng: &mut Draw,
) -> (ComplexMatrix, ComplexMatrix) {
    let u = random_unitary_draw(n, rng);
    let a = group_against(&u, n, rank, zero_s, rng);
    (a, u)
}

/// Group matrix `u [[t, s], [0, 0]] u^*` against a caller-fixed basis.
fn group_against(
    u: &ComplexMatrix,
    n: usize,
    rank: usize,
    zero_s: bool,
    rng: &mut Draw,
) -> ComplexMatrix {
    let t = structured_rank(rank, rank, rank, rng);
    let s = if zero_s {
        ComplexMatrix::zeros(rank, n - rank)
    } else {
        gaussian(rank, n - rank, rng)
    };
    let inner = block_2x2(
        &t,
        &s,
        &ComplexMatrix::zeros(n - rank, rank),
        &ComplexMatrix::zeros(n - rank, n - rank),
    );
    conj_u(u, &inner)
}

fn conj_u(u: &ComplexMatrix, inner: &ComplexMatrix) -> ComplexMatrix {
    &(u * inner) * &u.adjoint()
}

fn conj_uv(u: &ComplexMatrix, inner: &ComplexMatrix, v: &ComplexMatrix) -> ComplexMatrix {
    &(u * inner) * &v.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::{is_zero, rank, Tolerance};
    use crate::{coreinv, ortho};

    fn spec(family: Family, rows: usize, cols: usize, params: &[usize], seed: u64) -> GenSpec {
        GenSpec {
            family,
            rows,
            cols,
            rank_params: params.to_vec(),
            seed,
        }
    }

    #[test]
    fn deterministic_per_spec() {
        let s = spec(Family::RightStarPair, 4, 5, &[2, 1, 1], 7);
        let (a1, b1) = generate(&s).unwrap().pair();
        let (a2, b2) = generate(&s).unwrap().pair();
        assert_eq!(a1, a2);
        assert_eq!(b1, b2);
    }

    #[test]
    fn rank_r_hits_requested_rank() {
        let tol = Tolerance::default();
        let a = generate(&spec(Family::RankR, 4, 3, &[2], 7)).unwrap().single();
        assert_eq!(rank(&a, &tol).unwrap(), 2);
        let z = generate(&spec(Family::GroupMatrix, 3, 3, &[0], 0))
            .unwrap()
            .single();
        assert_eq!(z.norm_fro(), 0.0);
    }

    #[test]
    fn unitary_factor_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [1, 2, 5, 8] {
            let q = random_unitary(n, &mut rng);
            let err = (&(&q.adjoint() * &q) - &ComplexMatrix::identity(n)).norm_fro();
            assert!(err <= 1e-13 * n as f64, "n = {n}, err = {err}");
        }
    }

    #[test]
    fn families_satisfy_their_predicates() {
        let tol = Tolerance::default();
        for seed in 0..12 {
            let (a, b) = generate(&spec(Family::RightStarPair, 4, 4, &[2, 1, 1], seed))
                .unwrap()
                .pair();
            let residual = (&b * &a.adjoint()).norm_fro();
            assert!(residual <= 1e-10, "right star residual {residual}");

            let (a, b) = generate(&spec(Family::LeftStarPair, 4, 4, &[2, 2, 1], seed))
                .unwrap()
                .pair();
            assert!((&a.adjoint() * &b).norm_fro() <= 1e-10);

            let (a, b) = generate(&spec(Family::StarOrthPair, 4, 3, &[2, 1], seed))
                .unwrap()
                .pair();
            assert!(ortho::star_orth(&a, &b, &tol).unwrap());

            let (a, b) = generate(&spec(Family::LeftCorePair, 4, 4, &[2, 1, 1, 0], seed))
                .unwrap()
                .pair();
            assert!(coreinv::is_group_matrix(&a, &tol).unwrap());
            assert!(coreinv::is_group_matrix(&b, &tol).unwrap());
            assert!(ortho::left_core_orth(&a, &b, &tol).unwrap());

            let (a, b) = generate(&spec(Family::RightCorePair, 4, 4, &[2, 2, 0], seed))
                .unwrap()
                .pair();
            assert!(coreinv::is_group_matrix(&b, &tol).unwrap());
            assert!(ortho::right_core_orth(&a, &b, &tol).unwrap());

            let (a, b) = generate(&spec(Family::N1Pair, 4, 4, &[2, 1, 0], seed))
                .unwrap()
                .pair();
            let sum = &a + &b;
            let scale = a.norm_fro() * (a.norm_fro() + b.norm_fro());
            assert!(is_zero(&(&sum * &a), scale, &tol));
            assert!(is_zero(&(&a.adjoint() * &sum), scale, &tol));
            assert!(coreinv::is_group_matrix(&b, &tol).unwrap());

            let (a, b) = generate(&spec(Family::DisjointRangePair, 5, 4, &[2, 1], seed))
                .unwrap()
                .pair();
            assert!(ortho::right_star_orth(&a, &b, &tol).unwrap());
            assert!(crate::numkit::ranges_disjoint(&a, &b, &tol).unwrap());
        }
    }

    #[test]
    fn rejects_inconsistent_params() {
        assert!(generate(&spec(Family::RankR, 3, 3, &[4], 0)).is_err());
        assert!(generate(&spec(Family::RankR, 3, 3, &[1, 1], 0)).is_err());
        assert!(generate(&spec(Family::GroupMatrix, 3, 4, &[1], 0)).is_err());
        assert!(generate(&spec(Family::RightStarPair, 4, 4, &[2, 3, 1], 0)).is_err());
        assert!(generate(&spec(Family::RankR, 13, 3, &[1], 0)).is_err());
    }
}
