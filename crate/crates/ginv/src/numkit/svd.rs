use num_complex::Complex64;

use super::{ComplexMatrix, Tolerance};
use crate::{Error, Result};

/// Singular value decomposition `a = u * diag(sigma, 0) * v^*` with full
/// unitary factors and only the singular values above the rank cutoff kept.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    /// Unitary, `m x m`.
    pub u: ComplexMatrix,
    /// Unitary, `n x n`.
    pub v: ComplexMatrix,
    /// Retained singular values, strictly positive and nonincreasing.
    pub sigma: Vec<f64>,
}

impl SvdFactors {
    /// `diag(sigma, 0)` padded to the original shape.
    pub fn sigma_matrix(&self) -> ComplexMatrix {
        let m = self.u.rows();
        let n = self.v.rows();
        let mut s = ComplexMatrix::zeros(m, n);
        for (i, &sv) in self.sigma.iter().enumerate() {
            s.set(i, i, Complex64::new(sv, 0.0));
        }
        s
    }

    /// The `r x r` leading diagonal block alone.
    pub fn sigma_block(&self) -> ComplexMatrix {
        ComplexMatrix::from_diag(&self.sigma)
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        &(&self.u * &self.sigma_matrix()) * &self.v.adjoint()
    }

    pub fn rank(&self) -> usize {
        self.sigma.len()
    }
}

// Convergence threshold for the Jacobi sweep, relative to the product of
// column norms, and a generous sweep bound (convergence is quadratic).
const JACOBI_EPS: f64 = 1e-15;
const MAX_SWEEPS: usize = 128;

/// One-sided Jacobi SVD.
///
/// Columns of a working copy of `a` are repeatedly rotated in pairs until
/// mutually orthogonal; their norms are the singular values and the
/// accumulated rotations form `v`. Left vectors for the retained singular
/// values are the normalized columns, completed greedily to a full unitary
/// basis. The rank cutoff keeps `sigma_i > sigma_max * max(m, n) * rank_rel`.
pub fn svd(a: &ComplexMatrix, tol: &Tolerance) -> Result<SvdFactors> {
    let (m, n) = a.shape();
    if m < n {
        // a = u s v^*  <=>  a^* = v s u^*
        let f = svd(&a.adjoint(), tol)?;
        return Ok(SvdFactors {
            u: f.v,
            v: f.u,
            sigma: f.sigma,
        });
    }

    let mut w = a.clone();
    let mut v = ComplexMatrix::identity(n);

    // Columns whose norm falls this far below the matrix scale are
    // numerically zero: rotating them only churns rounding noise and the
    // relative pair tolerance can never be met against a live column. The
    // rank cutoff discards them regardless.
    let zero_floor = a.norm_fro() * 1e-14;

    let mut converged = n < 2;
    let mut sweeps = 0;
    while !converged {
        if sweeps >= MAX_SWEEPS {
            return Err(Error::SvdNonConvergence { sweeps });
        }
        sweeps += 1;
        converged = true;
        for p in 0..n {
            for q in (p + 1)..n {
                let (alpha, beta, gamma) = column_gram(&w, p, q);
                let g = gamma.norm();
                if g == 0.0
                    || g <= JACOBI_EPS * (alpha * beta).sqrt()
                    || alpha.sqrt() <= zero_floor
                    || beta.sqrt() <= zero_floor
                {
                    continue;
                }
                converged = false;
                // Unitary 2x2 rotation J = [[c, s*e^{i phi}], [-s*e^{-i phi}, c]]
                // with gamma = g * e^{i phi}, chosen to orthogonalize the pair.
                let phase = gamma / g;
                let tau = (beta - alpha) / (2.0 * g);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_columns(&mut w, p, q, c, s, phase);
                rotate_columns(&mut v, p, q, c, s, phase);
            }
        }
    }

    // Column norms in descending order.
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n).map(|j| column_norm(&w, j)).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());

    let sigma_max = order.first().map_or(0.0, |&j| norms[j]);
    let cutoff = sigma_max * (m.max(n) as f64) * tol.rank_rel;
    let r = order.iter().filter(|&&j| norms[j] > cutoff).count();

    let sigma: Vec<f64> = order[..r].iter().map(|&j| norms[j]).collect();

    let mut v_sorted = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            v_sorted.set(i, dst, v.get(i, src));
        }
    }

    // Left vectors: normalized retained columns, then a greedy completion.
    let mut u_cols: Vec<Vec<Complex64>> = Vec::with_capacity(m);
    for (dst, &src) in order[..r].iter().enumerate() {
        let inv = 1.0 / sigma[dst];
        u_cols.push((0..m).map(|i| w.get(i, src) * inv).collect());
    }
    complete_basis(&mut u_cols, m);
    let mut u = ComplexMatrix::zeros(m, m);
    for (j, col) in u_cols.iter().enumerate() {
        for i in 0..m {
            u.set(i, j, col[i]);
        }
    }

    Ok(SvdFactors {
        u,
        v: v_sorted,
        sigma,
    })
}

fn column_gram(w: &ComplexMatrix, p: usize, q: usize) -> (f64, f64, Complex64) {
    let mut alpha = 0.0;
    let mut beta = 0.0;
    let mut gamma = Complex64::new(0.0, 0.0);
    for i in 0..w.rows() {
        let wp = w.get(i, p);
        let wq = w.get(i, q);
        alpha += wp.norm_sqr();
        beta += wq.norm_sqr();
        gamma += wp.conj() * wq;
    }
    (alpha, beta, gamma)
}

fn rotate_columns(w: &mut ComplexMatrix, p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
    for i in 0..w.rows() {
        let wp = w.get(i, p);
        let wq = w.get(i, q);
        w.set(i, p, wp * c - wq * (s * phase.conj()));
        w.set(i, q, wp * (s * phase) + wq * c);
    }
}

fn column_norm(w: &ComplexMatrix, j: usize) -> f64 {
    (0..w.rows())
        .map(|i| w.get(i, j).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Extend an orthonormal set of length-`m` columns to a full basis by
/// repeatedly appending the standard basis vector with the largest residual
/// after projection (two Gram-Schmidt passes keep the set orthonormal to
/// machine precision).
fn complete_basis(cols: &mut Vec<Vec<Complex64>>, m: usize) {
    while cols.len() < m {
        let mut best: Option<(f64, Vec<Complex64>)> = None;
        for k in 0..m {
            let mut cand = vec![Complex64::new(0.0, 0.0); m];
            cand[k] = Complex64::new(1.0, 0.0);
            for _ in 0..2 {
                for col in cols.iter() {
                    let dot: Complex64 = col
                        .iter()
                        .zip(cand.iter())
                        .map(|(u, x)| u.conj() * x)
                        .sum();
                    for (x, u) in cand.iter_mut().zip(col.iter()) {
                        *x -= dot * u;
                    }
                }
            }
            let norm = cand.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if best.as_ref().map_or(true, |(bn, _)| norm > *bn) {
                best = Some((norm, cand));
            }
        }
        let (norm, mut col) = best.expect("m > 0 when completing");
        let inv = 1.0 / norm;
        for z in col.iter_mut() {
            *z *= inv;
        }
        cols.push(col);
    }
}
