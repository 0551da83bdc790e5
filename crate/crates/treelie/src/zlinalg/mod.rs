//! Exact linear algebra over the integers.
//!
//! Matrices hold arbitrary-precision entries ([`num_bigint::BigInt`])
//! in sparse column-major form, but every operation has dense
//! semantics: a `rows x cols` matrix is the full array, with absent
//! entries equal to zero. Empty matrices (zero rows or columns) are
//! legal everywhere and behave as the corresponding trivial maps.
//!
//! The module provides column Hermite reduction, Smith normal form
//! with unimodular transforms ([`snf`]), saturated integer kernels
//! ([`kernel_lattice`]), cokernel invariants ([`cokernel_structure`]),
//! and lattice membership with an explicit witness
//! ([`lattice_member`]). All of it is fraction-free; nothing here
//! rounds.

mod elim;
mod io;
mod snf;

pub use io::{from_zmat_str, read_zmat, to_zmat_string, write_zmat, ZmatError};
pub use snf::{
    cokernel_structure, determinant, invariant_factors, kernel_lattice, lattice_member, rank, snf,
    AbelianStructure, SmithForm,
};

pub(crate) use elim::{add_scaled, col_echelon, Echelon, Track};
pub(crate) use snf::unimodular_inverse;

use num_bigint::BigInt;
use num_traits::Zero;
use std::fmt;
use thiserror::Error;

/// Sparse column: `(row, value)` pairs, sorted by row, values nonzero.
pub(crate) type SparseCol = Vec<(usize, BigInt)>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("entry ({row}, {col}) outside a {rows} x {cols} matrix")]
    OutOfBounds {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
}

/// An integer matrix with sparse storage and dense semantics.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: Vec<SparseCol>,
}

impl Matrix {
    /// The `rows x cols` zero matrix.
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols: vec![Vec::new(); cols],
        }
    }

    /// The `n x n` identity.
    pub fn identity(n: usize) -> Self {
        let cols = (0..n).map(|j| vec![(j, BigInt::from(1))]).collect();
        Matrix { rows: n, cols }
    }

    /// Builds a matrix from `(row, col, value)` triples. Triples with
    /// the same position are summed; zero sums are dropped.
    pub fn from_entries(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, BigInt)>,
    ) -> Result<Self, MatrixError> {
        let mut acc: Vec<std::collections::BTreeMap<usize, BigInt>> = vec![Default::default(); cols];
        for (r, c, v) in entries {
            if r >= rows || c >= cols {
                return Err(MatrixError::OutOfBounds {
                    row: r,
                    col: c,
                    rows,
                    cols,
                });
            }
            let slot = acc[c].entry(r).or_insert_with(BigInt::zero);
            *slot += v;
            if slot.is_zero() {
                acc[c].remove(&r);
            }
        }
        let cols = acc.into_iter().map(|m| m.into_iter().collect()).collect();
        Ok(Matrix { rows, cols })
    }

    /// Dense construction from row slices; rows must have equal length.
    /// Intended for literals in tests and docs.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(
            rows.iter().all(|r| r.len() == ncols),
            "ragged rows in Matrix::from_rows"
        );
        let mut cols = vec![Vec::new(); ncols];
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if *v != 0 {
                    cols[j].push((i, BigInt::from(*v)));
                }
            }
        }
        Matrix { rows: rows.len(), cols }
    }

    pub(crate) fn from_cols(rows: usize, cols: Vec<SparseCol>) -> Self {
        debug_assert!(cols
            .iter()
            .all(|c| c.windows(2).all(|w| w[0].0 < w[1].0)
                && c.iter().all(|(r, v)| *r < rows && !v.is_zero())));
        Matrix { rows, cols }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    /// Number of stored (nonzero) entries.
    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    /// The entry at `(r, c)`. Panics outside the matrix.
    pub fn entry(&self, r: usize, c: usize) -> BigInt {
        assert!(r < self.rows && c < self.cols.len(), "entry out of bounds");
        match self.cols[c].binary_search_by_key(&r, |e| e.0) {
            Ok(i) => self.cols[c][i].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    /// Nonzero entries of column `j`, sorted by row.
    pub fn col_entries(&self, j: usize) -> &[(usize, BigInt)] {
        &self.cols[j]
    }

    /// Column `j` as a dense vector.
    pub fn col_vec(&self, j: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.rows];
        for (r, x) in &self.cols[j] {
            v[*r] = x.clone();
        }
        v
    }

    /// All nonzero entries in column-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().map(move |(r, v)| (*r, j, v)))
    }

    pub fn transpose(&self) -> Matrix {
        let mut cols: Vec<SparseCol> = vec![Vec::new(); self.rows];
        for (j, col) in self.cols.iter().enumerate() {
            for (r, v) in col {
                cols[*r].push((j, v.clone()));
            }
        }
        Matrix {
            rows: self.cols.len(),
            cols,
        }
    }

    /// Matrix product `self * rhs`. Panics on shape mismatch.
    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(
            self.cols.len(),
            rhs.rows,
            "shape mismatch in Matrix::mul: {}x{} * {}x{}",
            self.rows,
            self.cols.len(),
            rhs.rows,
            rhs.cols.len()
        );
        let cols = rhs
            .cols
            .iter()
            .map(|rcol| {
                let mut acc: SparseCol = Vec::new();
                for (k, w) in rcol {
                    acc = elim::add_scaled(&acc, &self.cols[*k], w);
                }
                acc
            })
            .collect();
        Matrix {
            rows: self.rows,
            cols,
        }
    }

    /// Matrix-vector product. Panics on length mismatch.
    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols.len(), v.len(), "length mismatch in mul_vec");
        let mut out = vec![BigInt::zero(); self.rows];
        for (j, col) in self.cols.iter().enumerate() {
            if v[j].is_zero() {
                continue;
            }
            for (r, x) in col {
                out[*r] += x * &v[j];
            }
        }
        out
    }

    /// Horizontal concatenation. All parts must have equal row count.
    pub fn hstack(parts: &[&Matrix]) -> Matrix {
        let rows = parts.first().map_or(0, |m| m.rows);
        assert!(
            parts.iter().all(|m| m.rows == rows),
            "row mismatch in hstack"
        );
        let cols = parts
            .iter()
            .flat_map(|m| m.cols.iter().cloned())
            .collect();
        Matrix { rows, cols }
    }

    /// Negated copy.
    pub fn neg(&self) -> Matrix {
        let cols = self
            .cols
            .iter()
            .map(|c| c.iter().map(|(r, v)| (*r, -v)).collect())
            .collect();
        Matrix {
            rows: self.rows,
            cols,
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut d = vec![vec![BigInt::zero(); self.cols.len()]; self.rows];
        for (r, c, v) in self.entries() {
            d[r][c] = v.clone();
        }
        d
    }

    pub(crate) fn into_cols(self) -> Vec<SparseCol> {
        self.cols
    }

    pub(crate) fn col_slices(&self) -> &[SparseCol] {
        &self.cols
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix({}x{}, nnz={})", self.rows, self.cols.len(), self.nnz())
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows * self.cols.len() > 400 {
            return write!(f, "[{} x {} matrix, {} nonzero]", self.rows, self.cols.len(), self.nnz());
        }
        let d = self.to_dense();
        for row in d {
            let cells: Vec<String> = row.iter().map(BigInt::to_string).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}
