//! Matrix file I/O: Matrix Market (array and coordinate, real and complex)
//! and CSV with `a+bi` cell literals.
//!
//! Writing uses the shortest float representation that round-trips, so a
//! write/read cycle of the canonical textual form is bit-exact. Ingested
//! matrices are capped at 64x64; this is a desk-scale verifier.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use crate::numkit::ComplexMatrix;
use crate::{Error, Result};

/// Supported on-disk formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFormat {
    MatrixMarket,
    Csv,
}

impl MatrixFormat {
    /// Infer the format from a file extension (`.mtx` / `.csv`).
    pub fn from_path(path: &Path) -> Result<MatrixFormat> {
        match path.extension().and_then(|e| e.to_str()) {
            Some("mtx") => Ok(MatrixFormat::MatrixMarket),
            Some("csv") => Ok(MatrixFormat::Csv),
            other => Err(Error::Io(format!(
                "cannot infer matrix format from extension {other:?} (use .mtx or .csv)"
            ))),
        }
    }
}

const SIZE_CAP: usize = 64;

/// Read a matrix file in the given format.
pub fn read_matrix(path: &Path, format: MatrixFormat) -> Result<ComplexMatrix> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_matrix(&text, format)
}

/// Parse matrix text in the given format.
pub fn parse_matrix(text: &str, format: MatrixFormat) -> Result<ComplexMatrix> {
    match format {
        MatrixFormat::MatrixMarket => parse_matrix_market(text),
        MatrixFormat::Csv => parse_csv(text),
    }
}

/// Write a matrix in the canonical textual form for the format.
pub fn write_matrix(path: &Path, m: &ComplexMatrix, format: MatrixFormat) -> Result<()> {
    std::fs::write(path, render_matrix(m, format))
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(())
}

/// Render a matrix to its canonical text: Matrix Market `array complex
/// general` (column-major) or CSV rows of `a+bi` cells.
pub fn render_matrix(m: &ComplexMatrix, format: MatrixFormat) -> String {
    let mut out = String::new();
    match format {
        MatrixFormat::MatrixMarket => {
            out.push_str("%%MatrixMarket matrix array complex general\n");
            let _ = writeln!(out, "{} {}", m.rows(), m.cols());
            for j in 0..m.cols() {
                for i in 0..m.rows() {
                    let z = m.get(i, j);
                    let _ = writeln!(out, "{} {}", z.re, z.im);
                }
            }
        }
        MatrixFormat::Csv => {
            for i in 0..m.rows() {
                let row: Vec<String> =
                    (0..m.cols()).map(|j| render_complex(m.get(i, j))).collect();
                let _ = writeln!(out, "{}", row.join(","));
            }
        }
    }
    out
}

fn render_complex(z: Complex64) -> String {
    if z.im == 0.0 && !z.im.is_sign_negative() {
        format!("{}", z.re)
    } else if z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

fn parse_matrix_market(text: &str) -> Result<ComplexMatrix> {
    let mut lines = text.lines().enumerate();

    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, 1, "empty file"))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.first() != Some(&"%%MatrixMarket") {
        return Err(Error::parse(1, 1, "missing %%MatrixMarket header"));
    }
    if tokens.get(1) != Some(&"matrix") {
        return Err(Error::parse(1, 1, "only the matrix object is supported"));
    }
    let layout = *tokens
        .get(2)
        .ok_or_else(|| Error::parse(1, 1, "missing format (array or coordinate)"))?;
    if layout != "array" && layout != "coordinate" {
        return Err(Error::parse(
            1,
            1,
            format!("unsupported format {layout:?} (array or coordinate)"),
        ));
    }
    let field = *tokens
        .get(3)
        .ok_or_else(|| Error::parse(1, 1, "missing field (real or complex)"))?;
    if field != "real" && field != "complex" {
        return Err(Error::parse(
            1,
            1,
            format!("unsupported field {field:?} (real or complex)"),
        ));
    }
    let symmetry = tokens.get(4).copied().unwrap_or("general");
    if symmetry != "general" {
        return Err(Error::parse(
            1,
            1,
            format!("unsupported symmetry {symmetry:?} (general only)"),
        ));
    }
    let complex = field == "complex";

    // Skip comments, read the size line.
    let (size_line_no, size_line) = lines
        .by_ref()
        .find(|(_, l)| !l.trim_start().starts_with('%') && !l.trim().is_empty())
        .ok_or_else(|| Error::parse(2, 1, "missing size line"))?;
    let size_tokens: Vec<&str> = size_line.split_whitespace().collect();
    let expected_sizes = if layout == "array" { 2 } else { 3 };
    if size_tokens.len() != expected_sizes {
        return Err(Error::parse(
            size_line_no + 1,
            1,
            format!("size line needs {expected_sizes} integers"),
        ));
    }
    let rows = parse_usize(size_tokens[0], size_line_no + 1)?;
    let cols = parse_usize(size_tokens[1], size_line_no + 1)?;
    check_dims(rows, cols, size_line_no + 1)?;

    let mut m = ComplexMatrix::zeros(rows, cols);
    if layout == "array" {
        // Dense array data is column-major, one entry per line.
        let mut entries = Vec::with_capacity(rows * cols);
        for (line_no, line) in lines {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('%') {
                continue;
            }
            entries.push((line_no + 1, trimmed));
        }
        if entries.len() != rows * cols {
            return Err(Error::parse(
                size_line_no + 1,
                1,
                format!("expected {} data lines, found {}", rows * cols, entries.len()),
            ));
        }
        for (k, (line_no, raw)) in entries.into_iter().enumerate() {
            let z = parse_mm_value(raw, complex, line_no)?;
            let (i, j) = (k % rows, k / rows);
            m.set(i, j, z);
        }
    } else {
        let nnz = parse_usize(size_tokens[2], size_line_no + 1)?;
        let mut seen = 0usize;
        for (line_no, line) in lines {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('%') {
                continue;
            }
            let toks: Vec<&str> = trimmed.split_whitespace().collect();
            let want = if complex { 4 } else { 3 };
            if toks.len() != want {
                return Err(Error::parse(
                    line_no + 1,
                    1,
                    format!("coordinate entry needs {want} tokens"),
                ));
            }
            let i = parse_usize(toks[0], line_no + 1)?;
            let j = parse_usize(toks[1], line_no + 1)?;
            if i < 1 || i > rows || j < 1 || j > cols {
                return Err(Error::parse(
                    line_no + 1,
                    1,
                    format!("index ({i}, {j}) outside {rows}x{cols}"),
                ));
            }
            let re = parse_float(toks[2], line_no + 1)?;
            let im = if complex {
                parse_float(toks[3], line_no + 1)?
            } else {
                0.0
            };
            m.set(i - 1, j - 1, Complex64::new(re, im));
            seen += 1;
        }
        if seen != nnz {
            return Err(Error::parse(
                size_line_no + 1,
                1,
                format!("expected {nnz} coordinate entries, found {seen}"),
            ));
        }
    }
    Ok(m)
}

fn parse_mm_value(raw: &str, complex: bool, line_no: usize) -> Result<Complex64> {
    let toks: Vec<&str> = raw.split_whitespace().collect();
    if complex {
        if toks.len() != 2 {
            return Err(Error::parse(line_no, 1, "complex entry needs two floats"));
        }
        Ok(Complex64::new(
            parse_float(toks[0], line_no)?,
            parse_float(toks[1], line_no)?,
        ))
    } else {
        if toks.len() != 1 {
            return Err(Error::parse(line_no, 1, "real entry needs one float"));
        }
        Ok(Complex64::new(parse_float(toks[0], line_no)?, 0.0))
    }
}

fn parse_csv(text: &str) -> Result<ComplexMatrix> {
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut row = Vec::new();
        let mut column = 1usize;
        for cell in line.split(',') {
            row.push(parse_complex_literal(cell.trim(), line_no + 1, column)?);
            column += cell.len() + 1;
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::parse(1, 1, "no data rows"));
    }
    let cols = rows[0].len();
    if rows.iter().any(|r| r.len() != cols) {
        return Err(Error::parse(1, 1, "ragged csv rows"));
    }
    check_dims(rows.len(), cols, 1)?;
    ComplexMatrix::from_rows(&rows)
}

/// Parse `a`, `a+bi`, `a-bi`, `bi`, `i`, `-i` with optional exponents.
fn parse_complex_literal(s: &str, line: usize, column: usize) -> Result<Complex64> {
    if s.is_empty() {
        return Err(Error::parse(line, column, "empty cell"));
    }
    if let Some(body) = s.strip_suffix(['i', 'I']) {
        // Find the sign splitting real and imaginary parts: a '+'/'-' that
        // is neither leading nor part of an exponent.
        let bytes = body.as_bytes();
        let mut split = None;
        for pos in (1..bytes.len()).rev() {
            let c = bytes[pos] as char;
            if (c == '+' || c == '-') && !matches!(bytes[pos - 1] as char, 'e' | 'E') {
                split = Some(pos);
                break;
            }
        }
        let (re_str, im_str) = match split {
            Some(pos) => (&body[..pos], &body[pos..]),
            None => ("", body),
        };
        let re = if re_str.is_empty() {
            0.0
        } else {
            parse_float_at(re_str, line, column)?
        };
        let im = match im_str {
            "" | "+" => 1.0,
            "-" => -1.0,
            _ => parse_float_at(im_str, line, column)?,
        };
        Ok(Complex64::new(re, im))
    } else {
        Ok(Complex64::new(parse_float_at(s, line, column)?, 0.0))
    }
}

fn check_dims(rows: usize, cols: usize, line: usize) -> Result<()> {
    if rows == 0 || cols == 0 {
        return Err(Error::parse(line, 1, "matrix must have at least one row and column"));
    }
    if rows > SIZE_CAP || cols > SIZE_CAP {
        return Err(Error::parse(
            line,
            1,
            format!("{rows}x{cols} exceeds the {SIZE_CAP}x{SIZE_CAP} ingestion cap"),
        ));
    }
    Ok(())
}

fn parse_usize(s: &str, line: usize) -> Result<usize> {
    s.parse()
        .map_err(|_| Error::parse(line, 1, format!("invalid integer {s:?}")))
}

fn parse_float(s: &str, line: usize) -> Result<f64> {
    parse_float_at(s, line, 1)
}

fn parse_float_at(s: &str, line: usize, column: usize) -> Result<f64> {
    let v: f64 = s
        .parse()
        .map_err(|_| Error::parse(line, column, format!("invalid float {s:?}")))?;
    if !v.is_finite() {
        return Err(Error::parse(line, column, format!("non-finite value {s:?}")));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mm_array_identity() {
        let text = "%%MatrixMarket matrix array real general\n2 2\n1\n0\n0\n1\n";
        let m = parse_matrix(text, MatrixFormat::MatrixMarket).unwrap();
        assert_eq!(m, ComplexMatrix::identity(2));
    }

    #[test]
    fn mm_coordinate_complex() {
        let text = "%%MatrixMarket matrix coordinate complex general\n% a comment\n2 3 2\n1 2 1.5 -2\n2 3 0 1\n";
        let m = parse_matrix(text, MatrixFormat::MatrixMarket).unwrap();
        assert_eq!(m.get(0, 1), Complex64::new(1.5, -2.0));
        assert_eq!(m.get(1, 2), Complex64::new(0.0, 1.0));
        assert_eq!(m.get(0, 0), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn mm_array_is_column_major() {
        let text = "%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n";
        let m = parse_matrix(text, MatrixFormat::MatrixMarket).unwrap();
        assert_eq!(m.get(0, 0).re, 1.0);
        assert_eq!(m.get(1, 0).re, 2.0);
        assert_eq!(m.get(0, 1).re, 3.0);
        assert_eq!(m.get(1, 1).re, 4.0);
    }

    #[test]
    fn csv_paper_matrix() {
        let m = parse_matrix("1,1\n0,0\n", MatrixFormat::Csv).unwrap();
        assert_eq!(
            m,
            ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 0.0]]).unwrap()
        );
    }

    #[test]
    fn csv_complex_cells() {
        let m = parse_matrix("0,1+2i\n", MatrixFormat::Csv).unwrap();
        assert_eq!(m.shape(), (1, 2));
        assert_eq!(m.get(0, 1), Complex64::new(1.0, 2.0));
        let m = parse_matrix("1-2i,-i,3e-2i,2.5e1\n", MatrixFormat::Csv).unwrap();
        assert_eq!(m.get(0, 0), Complex64::new(1.0, -2.0));
        assert_eq!(m.get(0, 1), Complex64::new(0.0, -1.0));
        assert_eq!(m.get(0, 2), Complex64::new(0.0, 3e-2));
        assert_eq!(m.get(0, 3), Complex64::new(25.0, 0.0));
    }

    #[test]
    fn parse_errors_carry_location() {
        let text = "%%MatrixMarket matrix array real general\n2 2\n1\nnope\n0\n1\n";
        match parse_matrix(text, MatrixFormat::MatrixMarket) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn size_cap_enforced() {
        let text = format!(
            "%%MatrixMarket matrix coordinate real general\n65 2 1\n1 1 1\n"
        );
        assert!(matches!(
            parse_matrix(&text, MatrixFormat::MatrixMarket),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn round_trip_is_bit_exact() {
        use crate::testutil::random_matrix;
        for seed in 0..10 {
            let m = random_matrix(3, 4, 7000 + seed);
            for fmt in [MatrixFormat::MatrixMarket, MatrixFormat::Csv] {
                let text = render_matrix(&m, fmt);
                let back = parse_matrix(&text, fmt).unwrap();
                assert_eq!(m, back, "format {fmt:?}, seed {seed}");
                // The canonical text itself is a fixed point.
                assert_eq!(render_matrix(&back, fmt), text);
            }
        }
    }

    #[test]
    fn negative_zero_survives_round_trip() {
        let m = ComplexMatrix::new(
            1,
            2,
            vec![Complex64::new(-0.0, 0.0), Complex64::new(1.0, -0.0)],
        )
        .unwrap();
        for fmt in [MatrixFormat::MatrixMarket, MatrixFormat::Csv] {
            let back = parse_matrix(&render_matrix(&m, fmt), fmt).unwrap();
            for k in 0..2 {
                let (a, b) = (m.entries()[k], back.entries()[k]);
                assert_eq!(a.re.to_bits(), b.re.to_bits());
                assert_eq!(a.im.to_bits(), b.im.to_bits());
            }
        }
    }
}
