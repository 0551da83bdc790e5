//! Presentation serialization.
//!
//! A ZPRES file is the line `ZPRES 1`, a generator count, that many
//! code lines, then the relation matrix in ZMAT form. Codes must be
//! whitespace-free and listed in version order; the reader runs the
//! same validation as [`Presentation::new`].

use super::{PresentError, Presentation};
use crate::zlinalg::{read_zmat, write_zmat, ZmatError};
use std::io::{self, BufRead, Write};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ZpresError {
    #[error("i/o failure: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("relation matrix: {0}")]
    Matrix(#[from] ZmatError),
    #[error("invalid presentation: {0}")]
    Invalid(#[from] PresentError),
}

fn bad(line: usize, reason: impl Into<String>) -> ZpresError {
    ZpresError::Malformed {
        line,
        reason: reason.into(),
    }
}

pub fn write_zpres<W: Write>(p: &Presentation, mut w: W) -> io::Result<()> {
    writeln!(w, "ZPRES 1")?;
    writeln!(w, "{}", p.generator_count())?;
    for g in p.generators() {
        writeln!(w, "{g}")?;
    }
    write_zmat(p.relations(), w)
}

pub fn read_zpres<R: BufRead>(mut r: R) -> Result<Presentation, ZpresError> {
    let mut line = String::new();
    let mut lineno = 0;
    let mut next_line = |r: &mut R, lineno: &mut usize| -> Result<String, ZpresError> {
        line.clear();
        *lineno += 1;
        let n = r.read_line(&mut line)?;
        if n == 0 {
            return Err(bad(*lineno, "unexpected end of input"));
        }
        Ok(line.trim_end_matches(['\n', '\r']).to_string())
    };

    let header = next_line(&mut r, &mut lineno)?;
    if header.trim() != "ZPRES 1" {
        return Err(bad(lineno, "header must be `ZPRES 1`"));
    }
    let count_line = next_line(&mut r, &mut lineno)?;
    let count: usize = count_line
        .trim()
        .parse()
        .map_err(|e| bad(lineno, format!("bad generator count: {e}")))?;
    let mut gens = Vec::with_capacity(count);
    for _ in 0..count {
        let g = next_line(&mut r, &mut lineno)?;
        let g = g.trim();
        if g.is_empty() || g.contains(char::is_whitespace) {
            return Err(bad(lineno, format!("bad generator code {g:?}")));
        }
        gens.push(g.to_string());
    }
    let relations = read_zmat(r)?;
    Ok(Presentation::new(gens, relations)?)
}

pub fn to_zpres_string(p: &Presentation) -> String {
    let mut buf = Vec::new();
    write_zpres(p, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("ZPRES output is ASCII")
}

pub fn from_zpres_str(s: &str) -> Result<Presentation, ZpresError> {
    read_zpres(s.as_bytes())
}
