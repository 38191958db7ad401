use num_complex::Complex64;

use super::ComplexMatrix;
use crate::{Error, Result};

/// Solve `a x = b` for square nonsingular `a` by LU with partial pivoting.
pub fn solve_general(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.rows();
    if !a.is_square() {
        return Err(Error::dim(format!(
            "solve_general needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if b.rows() != n {
        return Err(Error::dim(format!(
            "solve_general rhs has {} rows, expected {}",
            b.rows(),
            n
        )));
    }
    if n == 0 {
        return Ok(ComplexMatrix::zeros(0, b.cols()));
    }

    let mut lu = a.clone();
    let mut x = b.clone();
    let scale = a.max_abs().max(1.0);
    for k in 0..n {
        let (piv, piv_abs) = (k..n)
            .map(|i| (i, lu.get(i, k).norm()))
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        if piv_abs <= 1e-14 * scale {
            return Err(Error::SingularBlock(format!(
                "pivot {piv_abs:.3e} at step {k} of LU solve"
            )));
        }
        if piv != k {
            swap_rows(&mut lu, k, piv);
            swap_rows(&mut x, k, piv);
        }
        let inv = Complex64::new(1.0, 0.0) / lu.get(k, k);
        for i in (k + 1)..n {
            let factor = lu.get(i, k) * inv;
            if factor.norm_sqr() == 0.0 {
                continue;
            }
            for j in k..n {
                let v = lu.get(i, j) - factor * lu.get(k, j);
                lu.set(i, j, v);
            }
            for j in 0..x.cols() {
                let v = x.get(i, j) - factor * x.get(k, j);
                x.set(i, j, v);
            }
        }
    }
    // Back substitution.
    for k in (0..n).rev() {
        let inv = Complex64::new(1.0, 0.0) / lu.get(k, k);
        for j in 0..x.cols() {
            let mut acc = x.get(k, j);
            for i in (k + 1)..n {
                acc -= lu.get(k, i) * x.get(i, j);
            }
            x.set(k, j, acc * inv);
        }
    }
    Ok(x)
}

/// Solve `a x = b` for Hermitian positive definite `a` by Cholesky.
///
/// Used wherever the paper's formulas invert Gram-type matrices such as
/// `A1 A1^* + Omega Omega^*`; a linear solve against the HPD structure is
/// better conditioned than inverting a general matrix.
pub fn solve_hpd(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.rows();
    if !a.is_square() || b.rows() != n {
        return Err(Error::dim("solve_hpd shape mismatch"));
    }
    if n == 0 {
        return Ok(ComplexMatrix::zeros(0, b.cols()));
    }

    // Lower Cholesky factor.
    let mut l = ComplexMatrix::zeros(n, n);
    let scale = a.max_abs().max(1.0);
    for j in 0..n {
        let mut diag = a.get(j, j).re;
        for k in 0..j {
            diag -= l.get(j, k).norm_sqr();
        }
        if diag <= 1e-14 * scale {
            return Err(Error::SingularBlock(format!(
                "non-positive pivot {diag:.3e} in Cholesky at step {j}"
            )));
        }
        let d = diag.sqrt();
        l.set(j, j, Complex64::new(d, 0.0));
        for i in (j + 1)..n {
            let mut acc = a.get(i, j);
            for k in 0..j {
                acc -= l.get(i, k) * l.get(j, k).conj();
            }
            l.set(i, j, acc / d);
        }
    }

    // Forward then backward substitution with L and L^*.
    let mut y = b.clone();
    for k in 0..n {
        let inv = Complex64::new(1.0, 0.0) / l.get(k, k);
        for j in 0..y.cols() {
            let mut acc = y.get(k, j);
            for i in 0..k {
                acc -= l.get(k, i) * y.get(i, j);
            }
            y.set(k, j, acc * inv);
        }
    }
    for k in (0..n).rev() {
        let inv = Complex64::new(1.0, 0.0) / l.get(k, k);
        for j in 0..y.cols() {
            let mut acc = y.get(k, j);
            for i in (k + 1)..n {
                acc -= l.get(i, k).conj() * y.get(i, j);
            }
            y.set(k, j, acc * inv);
        }
    }
    Ok(y)
}

fn swap_rows(m: &mut ComplexMatrix, a: usize, b: usize) {
    for j in 0..m.cols() {
        let tmp = m.get(a, j);
        m.set(a, j, m.get(b, j));
        m.set(b, j, tmp);
    }
}
