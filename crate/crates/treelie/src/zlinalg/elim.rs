//! Column elimination over the integers.
//!
//! [`col_echelon`] reduces a list of sparse columns to a canonical
//! column Hermite form by integer column operations only, optionally
//! tracking how each surviving column is expressed in the inputs.
//! Invariant throughout: the lattice spanned by the working columns
//! never changes, and a column that reaches zero certifies one kernel
//! relation of the inputs.
//!
//! The sweep walks rows top to bottom. Every active column keeps all
//! its support at or below the current row, so the candidates at row
//! `r` are exactly the columns whose topmost entry sits at `r`; they
//! are reduced against each other Euclid-style until one pivot
//! remains. No row index structure is needed.

use super::SparseCol;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// What to record about column provenance during elimination.
#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) enum Track {
    /// Provenance is discarded.
    None,
    /// Track coefficients on the first `t` input columns.
    Cols(usize),
}

/// Canonical column Hermite form of a set of input columns.
pub(crate) struct Echelon {
    pub rows: usize,
    /// Pivot rows, strictly increasing; `pivot_rows.len()` is the rank.
    pub pivot_rows: Vec<usize>,
    /// Basis column `i` has its topmost entry (positive) at
    /// `pivot_rows[i]`; at every other pivot row `r_j` its entry lies
    /// in `[0, pivot_j)`.
    pub basis: Vec<SparseCol>,
    /// Expression of each basis column in the tracked inputs.
    pub basis_trans: Vec<SparseCol>,
    /// Tracked expressions of the input combinations that vanished;
    /// these span the saturated kernel of the tracked block when all
    /// columns are tracked.
    pub kernel_trans: Vec<SparseCol>,
}

/// `dst + k * src` as a fresh sorted sparse column.
pub(crate) fn add_scaled(dst: &SparseCol, src: &SparseCol, k: &BigInt) -> SparseCol {
    if k.is_zero() || src.is_empty() {
        return dst.clone();
    }
    let mut out = Vec::with_capacity(dst.len() + src.len());
    let (mut i, mut j) = (0, 0);
    while i < dst.len() && j < src.len() {
        match dst[i].0.cmp(&src[j].0) {
            std::cmp::Ordering::Less => {
                out.push(dst[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push((src[j].0, k * &src[j].1));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let v = &dst[i].1 + k * &src[j].1;
                if !v.is_zero() {
                    out.push((dst[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&dst[i..]);
    out.extend(src[j..].iter().map(|(r, v)| (*r, k * v)));
    out
}

/// Rounded quotient: the integer nearest `a / b` (ties toward zero).
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    if &r.abs() * 2 > b.abs() {
        if a.sign() == b.sign() {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

struct Work {
    cols: Vec<SparseCol>,
    trans: Vec<SparseCol>,
    tracking: bool,
}

impl Work {
    fn top(&self, c: usize) -> Option<usize> {
        self.cols[c].first().map(|e| e.0)
    }

    fn lead(&self, c: usize) -> &BigInt {
        &self.cols[c][0].1
    }

    /// col[c] += k * col[p], applied to values and provenance.
    fn add_scaled_col(&mut self, c: usize, p: usize, k: &BigInt) {
        self.cols[c] = add_scaled(&self.cols[c], &self.cols[p], k);
        if self.tracking {
            self.trans[c] = add_scaled(&self.trans[c], &self.trans[p], k);
        }
    }

    fn negate_col(&mut self, c: usize) {
        for e in &mut self.cols[c] {
            e.1 = -std::mem::take(&mut e.1);
        }
        if self.tracking {
            for e in &mut self.trans[c] {
                e.1 = -std::mem::take(&mut e.1);
            }
        }
    }
}

/// Reduces `cols` (all with row indices `< rows`) to canonical column
/// Hermite form.
pub(crate) fn col_echelon(rows: usize, cols: Vec<SparseCol>, track: Track) -> Echelon {
    let input_cols = cols.len();
    let tracked = match track {
        Track::None => 0,
        Track::Cols(t) => t,
    };
    let tracking = track != Track::None;
    let trans: Vec<SparseCol> = if tracking {
        (0..input_cols)
            .map(|j| {
                if j < tracked {
                    vec![(j, BigInt::from(1))]
                } else {
                    Vec::new()
                }
            })
            .collect()
    } else {
        Vec::new()
    };
    let mut work = Work {
        cols,
        trans,
        tracking,
    };

    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); rows];
    let mut kernel_trans = Vec::new();
    for c in 0..input_cols {
        match work.top(c) {
            Some(r) => buckets[r].push(c),
            None => {
                if tracking {
                    kernel_trans.push(std::mem::take(&mut work.trans[c]));
                }
            }
        }
    }

    let mut pivot_rows = Vec::new();
    let mut pivot_cols = Vec::new();
    for r in 0..rows {
        let mut cand = std::mem::take(&mut buckets[r]);
        if cand.is_empty() {
            continue;
        }
        while cand.len() > 1 {
            // Reduce everything against the smallest lead; ties break
            // toward sparser, then earlier, columns for determinism.
            let (pi, _) = cand
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| {
                    work.lead(**a)
                        .abs()
                        .cmp(&work.lead(**b).abs())
                        .then_with(|| work.cols[**a].len().cmp(&work.cols[**b].len()))
                        .then_with(|| a.cmp(b))
                })
                .expect("nonempty candidates");
            let p = cand.swap_remove(pi);
            let mut next = Vec::with_capacity(cand.len() + 1);
            for c in cand {
                let q = -div_round(work.lead(c), work.lead(p));
                work.add_scaled_col(c, p, &q);
                match work.top(c) {
                    Some(t) if t == r => next.push(c),
                    Some(t) => buckets[t].push(c),
                    None => {
                        if tracking {
                            kernel_trans.push(std::mem::take(&mut work.trans[c]));
                        }
                    }
                }
            }
            next.push(p);
            cand = next;
        }
        let p = cand[0];
        if work.lead(p).is_negative() {
            work.negate_col(p);
        }
        pivot_rows.push(r);
        pivot_cols.push(p);
    }

    // Canonical pass: at each pivot row, entries of the other basis
    // columns are reduced into [0, pivot).
    for i in 0..pivot_cols.len() {
        let r = pivot_rows[i];
        let p = pivot_cols[i];
        let pv = work.lead(p).clone();
        for j in 0..i {
            let cj = pivot_cols[j];
            let e = match work.cols[cj].binary_search_by_key(&r, |e| e.0) {
                Ok(k) => work.cols[cj][k].1.clone(),
                Err(_) => continue,
            };
            let q = -e.div_floor(&pv);
            if !q.is_zero() {
                work.add_scaled_col(cj, p, &q);
            }
        }
    }

    let mut basis = Vec::with_capacity(pivot_cols.len());
    let mut basis_trans = Vec::with_capacity(pivot_cols.len());
    for &c in &pivot_cols {
        basis.push(std::mem::take(&mut work.cols[c]));
        if tracking {
            basis_trans.push(std::mem::take(&mut work.trans[c]));
        }
    }

    Echelon {
        rows,
        pivot_rows,
        basis,
        basis_trans,
        kernel_trans,
    }
}

impl Echelon {
    pub(crate) fn rank(&self) -> usize {
        self.pivot_rows.len()
    }

    /// Basis columns as a matrix (the canonical Hermite basis of the
    /// input column lattice).
    pub(crate) fn basis_matrix(&self) -> super::Matrix {
        super::Matrix::from_cols(self.rows, self.basis.clone())
    }

    /// Expresses `v` over the basis columns, or reports that `v` is
    /// not in the lattice. Coefficients are returned per basis index.
    pub(crate) fn solve(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.rows, "vector length mismatch in solve");
        let mut res: Vec<BigInt> = v.to_vec();
        let mut coeffs = vec![BigInt::zero(); self.basis.len()];
        for (i, &r) in self.pivot_rows.iter().enumerate() {
            if res[r].is_zero() {
                continue;
            }
            let p = &self.basis[i][0].1;
            let (q, rem) = res[r].div_rem(p);
            if !rem.is_zero() {
                return None;
            }
            for (row, x) in &self.basis[i] {
                res[*row] -= &q * x;
            }
            coeffs[i] = q;
        }
        if res.iter().all(Zero::is_zero) {
            Some(coeffs)
        } else {
            None
        }
    }

    /// Lattice membership without a witness.
    pub(crate) fn contains(&self, v: &[BigInt]) -> bool {
        self.solve(v).is_some()
    }

    /// Membership witness over the tracked input columns, as a dense
    /// vector of length `tracked`.
    pub(crate) fn witness(&self, v: &[BigInt], tracked: usize) -> Option<Vec<BigInt>> {
        let coeffs = self.solve(v)?;
        let mut out = vec![BigInt::zero(); tracked];
        for (i, q) in coeffs.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            for (j, x) in &self.basis_trans[i] {
                debug_assert!(*j < tracked, "untracked column in witness");
                out[*j] += q * x;
            }
        }
        Some(out)
    }
}
