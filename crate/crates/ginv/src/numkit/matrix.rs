use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::{Error, Result};

/// Dense row-major complex matrix, the carrier type of the whole crate.
///
/// Dimensions of zero are allowed so that block formulas degrade cleanly
/// to empty blocks (a rank-0 factor has an empty `Sigma`, a nonsingular
/// matrix has an empty nilpotent part, and so on). File ingestion and the
/// CLI only ever construct matrices with at least one row and column.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Build from a row-major entry list, validating length and finiteness.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries for a {}x{} matrix, got {}",
                rows * cols,
                rows,
                cols,
                entries.len()
            )));
        }
        if let Some(idx) = entries
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InvalidMatrix(format!(
                "non-finite entry at flat index {idx}"
            )));
        }
        Ok(ComplexMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            entries: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidMatrix("ragged row lengths".to_string()));
        }
        ComplexMatrix::new(r, c, rows.concat())
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidMatrix("ragged row lengths".to_string()));
        }
        let entries = rows
            .iter()
            .flat_map(|row| row.iter().map(|&x| Complex64::new(x, 0.0)))
            .collect();
        ComplexMatrix::new(r, c, entries)
    }

    /// Square diagonal matrix from real diagonal entries.
    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = ComplexMatrix::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, Complex64::new(d, 0.0));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = ComplexMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn scale(&self, k: Complex64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z * k).collect(),
        }
    }

    pub fn scale_re(&self, k: f64) -> Self {
        self.scale(Complex64::new(k, 0.0))
    }

    pub fn norm_fro(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Entrywise comparison with an absolute threshold; shapes must match.
    pub fn approx_eq(&self, other: &Self, tol_abs: f64) -> bool {
        self.shape() == other.shape()
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| (a - b).norm() <= tol_abs)
    }

    /// Copy of the half-open row/column range `[r0, r1) x [c0, c1)`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        assert!(r0 <= r1 && r1 <= self.rows && c0 <= c1 && c1 <= self.cols);
        let mut out = ComplexMatrix::zeros(r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                out.set(i - r0, j - c0, self.get(i, j));
            }
        }
        out
    }

    pub fn hcat(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hcat row mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j));
            }
        }
        out
    }

    pub fn vcat(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vcat column mismatch");
        let mut out = ComplexMatrix::zeros(self.rows + other.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
        }
        for i in 0..other.rows {
            for j in 0..self.cols {
                out.set(self.rows + i, j, other.get(i, j));
            }
        }
        out
    }

    /// Matrix power with the convention `a^0 = I`; `self` must be square.
    pub fn pow(&self, k: usize) -> Self {
        assert!(self.is_square(), "pow needs a square matrix");
        let mut acc = ComplexMatrix::identity(self.rows);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }
}

/// Assemble `[[tl, tr], [bl, br]]`; block shapes must be conformal.
/// Empty blocks (zero rows or columns) are allowed and simply contribute
/// nothing, so degenerate splits assemble without special cases.
pub fn block_2x2(
    tl: &ComplexMatrix,
    tr: &ComplexMatrix,
    bl: &ComplexMatrix,
    br: &ComplexMatrix,
) -> ComplexMatrix {
    assert_eq!(tl.rows(), tr.rows(), "top block row mismatch");
    assert_eq!(bl.rows(), br.rows(), "bottom block row mismatch");
    assert_eq!(tl.cols(), bl.cols(), "left block column mismatch");
    assert_eq!(tr.cols(), br.cols(), "right block column mismatch");
    tl.hcat(tr).vcat(&bl.hcat(br))
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self.get(i, j);
                write!(f, "{:+.4}{:+.4}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "add shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "sub shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            self.cols, rhs.rows,
            "mul shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.get(i, j) + aik * rhs.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }
}
