//! Matrix text format: a `q rows cols` line, then one line of space-separated
//! element values per row. `#` starts a comment.

use std::fmt::Write;
use std::path::Path;

use super::Matrix;
use crate::error::{Error, Result};
use crate::galois::FieldSpec;

pub fn write_matrix(m: &Matrix) -> String {
    let mut out = format!("{} {} {}\n", m.field().q(), m.rows(), m.cols());
    for r in 0..m.rows() {
        let row: Vec<String> = m.row(r).iter().map(|x| x.to_string()).collect();
        writeln!(out, "{}", row.join(" ")).unwrap();
    }
    out
}

/// Parse a matrix. The field is built from q with its default modulus
/// unless `field` is given, in which case q must match.
pub fn parse_matrix(text: &str, field: Option<&FieldSpec>) -> Result<Matrix> {
    let mut lines = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| Error::Parse("matrix file is empty".into()))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad matrix header {header:?}"))))
        .collect::<Result<_>>()?;
    let [q, rows, cols] = dims[..] else {
        return Err(Error::Parse(format!("matrix header {header:?} must be `q rows cols`")));
    };
    let field = match field {
        Some(f) if f.q() as usize != q => {
            return Err(Error::invalid("matrix file", format!("declares q = {q} but the field is GF({})", f.q())));
        }
        Some(f) => f.clone(),
        None => FieldSpec::of_order(q as u32)?,
    };
    let mut values = Vec::with_capacity(rows);
    for r in 0..rows {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("matrix file ends after {r} of {rows} rows")))?;
        let row: Vec<u32> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad matrix entry {t:?} in row {r}"))))
            .collect::<Result<_>>()?;
        if row.len() != cols {
            return Err(Error::Parse(format!("row {r} has {} entries, expected {cols}", row.len())));
        }
        values.push(row);
    }
    if let Some(extra) = lines.next() {
        return Err(Error::Parse(format!("unexpected trailing line {extra:?}")));
    }
    if rows == 0 {
        return Ok(Matrix::zeros(&field, 0, cols));
    }
    Matrix::from_values(&field, &values)
}

pub fn read_matrix(path: &Path, field: Option<&FieldSpec>) -> Result<Matrix> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::invalid("matrix file", format!("{}: {e}", path.display())))?;
    parse_matrix(&text, field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::outercodes::hamming_generator;

    #[test]
    fn round_trip() {
        let g = hamming_generator(3).unwrap().generator().clone();
        let text = write_matrix(&g);
        assert_eq!(parse_matrix(&text, None).unwrap(), g);
    }

    #[test]
    fn comments_and_errors() {
        let m = parse_matrix("# repetition\n2 1 2 # header\n1 1\n", None).unwrap();
        assert_eq!((m.rows(), m.cols()), (1, 2));
        assert!(parse_matrix("2 1 2\n1 2\n", None).is_err());
        assert!(parse_matrix("2 2 2\n1 1\n", None).is_err());
        assert!(parse_matrix("6 1 1\n1\n", None).is_err());
    }
}
