//! Plain-text matrix exchange.
//!
//! A ZMAT file is a header line `ZMAT 1 <rows> <cols> <nnz>` followed
//! by `nnz` lines `row col value` with 0-indexed positions. Writers
//! emit entries sorted by row, then column; readers accept any entry
//! order but reject duplicates, explicit zeros, out-of-range
//! positions, and trailing garbage, so a file parses to exactly one
//! matrix.

use super::Matrix;
use num_bigint::BigInt;
use num_traits::Zero;
use std::io::{self, BufRead, Write};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ZmatError {
    #[error("i/o failure: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
}

fn bad(line: usize, reason: impl Into<String>) -> ZmatError {
    ZmatError::Malformed {
        line,
        reason: reason.into(),
    }
}

/// Writes `m` in ZMAT form, entries sorted by `(row, col)`.
pub fn write_zmat<W: Write>(m: &Matrix, mut w: W) -> io::Result<()> {
    let mut entries: Vec<(usize, usize, &BigInt)> = m.entries().collect();
    entries.sort_by_key(|(r, c, _)| (*r, *c));
    writeln!(w, "ZMAT 1 {} {} {}", m.rows(), m.cols(), entries.len())?;
    for (r, c, v) in entries {
        writeln!(w, "{r} {c} {v}")?;
    }
    Ok(())
}

/// Reads one matrix in ZMAT form.
pub fn read_zmat<R: BufRead>(r: R) -> Result<Matrix, ZmatError> {
    let mut lines = r.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| bad(1, "empty input, expected ZMAT header"))?;
    let header = header?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 5 || parts[0] != "ZMAT" {
        return Err(bad(1, "header must be `ZMAT 1 <rows> <cols> <nnz>`"));
    }
    if parts[1] != "1" {
        return Err(bad(1, format!("unsupported ZMAT version {}", parts[1])));
    }
    let dims: Vec<usize> = parts[2..]
        .iter()
        .map(|p| p.parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|e| bad(1, format!("bad header field: {e}")))?;
    let (rows, cols, nnz) = (dims[0], dims[1], dims[2]);

    let mut triples = Vec::with_capacity(nnz);
    let mut seen = std::collections::BTreeSet::new();
    let mut count = 0;
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            if count < nnz {
                return Err(bad(lineno, "blank line inside entry list"));
            }
            continue;
        }
        if count >= nnz {
            return Err(bad(lineno, "content after the declared entries"));
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(bad(lineno, "entry line must be `row col value`"));
        }
        let r: usize = fields[0]
            .parse()
            .map_err(|e| bad(lineno, format!("bad row index: {e}")))?;
        let c: usize = fields[1]
            .parse()
            .map_err(|e| bad(lineno, format!("bad column index: {e}")))?;
        let v: BigInt = fields[2]
            .parse()
            .map_err(|e| bad(lineno, format!("bad value: {e}")))?;
        if r >= rows || c >= cols {
            return Err(bad(
                lineno,
                format!("entry ({r}, {c}) outside {rows} x {cols}"),
            ));
        }
        if v.is_zero() {
            return Err(bad(lineno, "explicit zero entry"));
        }
        if !seen.insert((r, c)) {
            return Err(bad(lineno, format!("duplicate entry at ({r}, {c})")));
        }
        triples.push((r, c, v));
        count += 1;
    }
    if count != nnz {
        return Err(bad(
            count + 1,
            format!("expected {nnz} entries, found {count}"),
        ));
    }
    Matrix::from_entries(rows, cols, triples)
        .map_err(|e| bad(1, format!("inconsistent entries: {e}")))
}

/// Round trip through a string, for caches and fixtures.
pub fn to_zmat_string(m: &Matrix) -> String {
    let mut buf = Vec::new();
    write_zmat(m, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("ZMAT output is ASCII")
}

pub fn from_zmat_str(s: &str) -> Result<Matrix, ZmatError> {
    read_zmat(s.as_bytes())
}
