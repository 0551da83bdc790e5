//! Deliberately naive dense integer matrix routines, used as an
//! independent oracle for the sparse machinery in the library.
//!
//! Everything here favors obviousness over speed: matrices are dense
//! row-major `Vec<Vec<BigInt>>`, pivots are chosen by scanning for the
//! smallest absolute value, and transforms are accumulated by
//! replaying every row or column operation on an identity matrix.
//! Nothing in this file calls into the library's elimination code.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Row-major dense matrix.
pub type Dense = Vec<Vec<BigInt>>;

pub fn identity(n: usize) -> Dense {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &Dense, b: &Dense) -> Dense {
    let rows = a.len();
    let inner = a.first().map_or(0, Vec::len);
    let cols = b.first().map_or(0, Vec::len);
    assert_eq!(inner, b.len(), "dimension mismatch");
    (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| (0..inner).map(|t| &a[i][t] * &b[t][j]).sum())
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &Dense, x: &[BigInt]) -> Vec<BigInt> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(e, c)| e * c).sum())
        .collect()
}

fn swap_cols(a: &mut Dense, x: usize, y: usize) {
    for row in a.iter_mut() {
        row.swap(x, y);
    }
}

/// `target row -= q * source row`.
fn row_axpy(a: &mut Dense, target: usize, source: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let src = a[source].clone();
    for (t, s) in a[target].iter_mut().zip(&src) {
        *t -= s * q;
    }
}

/// `target column -= q * source column`.
fn col_axpy(a: &mut Dense, target: usize, source: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for row in a.iter_mut() {
        let d = &row[source] * q;
        row[target] -= d;
    }
}

fn negate_row(a: &mut Dense, r: usize) {
    for e in a[r].iter_mut() {
        *e = -std::mem::take(e);
    }
}

fn smallest_nonzero(s: &Dense, p: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in p..s.len() {
        for j in p..s[i].len() {
            if s[i][j].is_zero() {
                continue;
            }
            let a = s[i][j].abs();
            if best.as_ref().is_none_or(|(_, _, b)| a < *b) {
                best = Some((i, j, a));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

pub struct NaiveSmith {
    pub u: Dense,
    pub s: Dense,
    pub v: Dense,
}

/// Textbook Smith normal form: pivot on the smallest nonzero entry of
/// the remaining block, clear its row and column with truncated
/// quotients, and merge in any row whose entries the pivot does not
/// yet divide. Row operations replay on `u` and column operations on
/// `v`, so `u * m * v = s` with both transforms unimodular, `s`
/// diagonal and nonnegative, each diagonal entry dividing the next.
pub fn smith(m: &Dense) -> NaiveSmith {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut s = m.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);
    for p in 0..rows.min(cols) {
        loop {
            let Some((bi, bj)) = smallest_nonzero(&s, p) else {
                break;
            };
            if bi != p {
                s.swap(bi, p);
                u.swap(bi, p);
            }
            if bj != p {
                swap_cols(&mut s, bj, p);
                swap_cols(&mut v, bj, p);
            }
            let mut clean = true;
            for i in p + 1..rows {
                if s[i][p].is_zero() {
                    continue;
                }
                let q = &s[i][p] / &s[p][p];
                row_axpy(&mut s, i, p, &q);
                row_axpy(&mut u, i, p, &q);
                if !s[i][p].is_zero() {
                    clean = false;
                }
            }
            for j in p + 1..cols {
                if s[p][j].is_zero() {
                    continue;
                }
                let q = &s[p][j] / &s[p][p];
                col_axpy(&mut s, j, p, &q);
                col_axpy(&mut v, j, p, &q);
                if !s[p][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let offender = (p + 1..rows)
                .find(|&i| (p + 1..cols).any(|j| !(&s[i][j] % &s[p][p]).is_zero()));
            match offender {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_axpy(&mut s, p, i, &minus_one);
                    row_axpy(&mut u, p, i, &minus_one);
                }
                None => break,
            }
        }
        if s[p][p].is_negative() {
            negate_row(&mut s, p);
            negate_row(&mut u, p);
        }
    }
    NaiveSmith { u, s, v }
}

/// Fraction-free determinant of a square matrix.
pub fn det(m: &Dense) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for p in 0..n - 1 {
        if a[p][p].is_zero() {
            match (p + 1..n).find(|&i| !a[i][p].is_zero()) {
                Some(i) => {
                    a.swap(p, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in p + 1..n {
            for j in p + 1..n {
                let t = &a[i][j] * &a[p][p] - &a[i][p] * &a[p][j];
                a[i][j] = t / &prev;
            }
            a[i][p] = BigInt::zero();
        }
        prev = a[p][p].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

fn diagonal_rank(s: &Dense) -> usize {
    let t = s.len().min(s.first().map_or(0, Vec::len));
    (0..t).take_while(|&i| !s[i][i].is_zero()).count()
}

/// Basis of the integer kernel of `m`, as columns. The basis is
/// saturated because the column transform is unimodular.
pub fn kernel_basis(m: &Dense) -> Vec<Vec<BigInt>> {
    let cols = m.first().map_or(0, Vec::len);
    let nd = smith(m);
    let rank = diagonal_rank(&nd.s);
    (rank..cols)
        .map(|j| (0..cols).map(|r| nd.v[r][j].clone()).collect())
        .collect()
}

/// Reduces a spanning set of lattice columns to a staircase basis by
/// column operations only, which preserve the column lattice: one row
/// at a time, run Euclid across the columns that are nonzero there,
/// then set the surviving column aside.
pub fn column_lattice_basis(rows: usize, spanning: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut active: Vec<Vec<BigInt>> = spanning
        .iter()
        .filter(|c| c.iter().any(|e| !e.is_zero()))
        .cloned()
        .collect();
    let mut basis = Vec::new();
    for r in 0..rows {
        loop {
            let nz: Vec<usize> = (0..active.len())
                .filter(|&i| !active[i][r].is_zero())
                .collect();
            if nz.len() <= 1 {
                break;
            }
            let &pivot = nz
                .iter()
                .min_by(|&&a, &&b| active[a][r].abs().cmp(&active[b][r].abs()))
                .expect("nonempty");
            for &other in nz.iter().filter(|&&i| i != pivot) {
                let q = &active[other][r] / &active[pivot][r];
                let scaled: Vec<BigInt> = active[pivot].iter().map(|e| e * &q).collect();
                for (e, d) in active[other].iter_mut().zip(scaled) {
                    *e -= d;
                }
            }
            active.retain(|c| c.iter().any(|e| !e.is_zero()));
        }
        if let Some(i) = (0..active.len()).find(|&i| !active[i][r].is_zero()) {
            basis.push(active.remove(i));
        }
    }
    basis
}

/// Solves `p * x = c` exactly, where the columns of `p` form a basis
/// of their lattice; `None` when there is no integer solution.
pub fn solve_columns(rows: usize, p_cols: &[Vec<BigInt>], c: &[BigInt]) -> Option<Vec<BigInt>> {
    let n = p_cols.len();
    let p: Dense = (0..rows)
        .map(|r| p_cols.iter().map(|col| col[r].clone()).collect())
        .collect();
    let nd = smith(&p);
    assert_eq!(diagonal_rank(&nd.s), n, "columns were not independent");
    let uc = mat_vec(&nd.u, c);
    let mut y = vec![BigInt::zero(); n];
    for (i, e) in uc.iter().enumerate() {
        if i < n {
            let (q, rem) = e.div_rem(&nd.s[i][i]);
            if !rem.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !e.is_zero() {
            return None;
        }
    }
    Some(mat_vec(&nd.v, &y))
}

/// Free rank and invariant factors (each > 1) of the quotient of a
/// free group of the given rank by the lattice the columns span.
pub fn cokernel(gens: usize, rel_cols: &[Vec<BigInt>]) -> (usize, Vec<BigInt>) {
    if rel_cols.is_empty() {
        return (gens, Vec::new());
    }
    let m: Dense = (0..gens)
        .map(|r| rel_cols.iter().map(|c| c[r].clone()).collect())
        .collect();
    let nd = smith(&m);
    let rank = diagonal_rank(&nd.s);
    let factors = (0..rank)
        .map(|i| nd.s[i][i].clone())
        .filter(|d| !d.is_one())
        .collect();
    (gens - rank, factors)
}

/// Structure of `{x : lift * x lies in the target lattice}` modulo the
/// source relation lattice, computed entirely with the dense routines
/// above: kernel of the stacked matrix `[lift | target relations]`,
/// projection onto the source block, staircase basis, then the
/// cokernel of the source relations expressed over that basis.
pub fn preimage_quotient(
    source_gens: usize,
    lift_cols: &[Vec<BigInt>],
    target_rel_cols: &[Vec<BigInt>],
    source_rel_cols: &[Vec<BigInt>],
) -> (usize, Vec<BigInt>) {
    let target_rows = lift_cols
        .first()
        .or_else(|| target_rel_cols.first())
        .map_or(0, Vec::len);
    let pre_basis = if target_rows == 0 {
        identity(source_gens)
    } else {
        let stacked: Dense = (0..target_rows)
            .map(|r| {
                lift_cols
                    .iter()
                    .chain(target_rel_cols)
                    .map(|c| c[r].clone())
                    .collect()
            })
            .collect();
        let kernel = kernel_basis(&stacked);
        let x_parts: Vec<Vec<BigInt>> =
            kernel.iter().map(|z| z[..source_gens].to_vec()).collect();
        column_lattice_basis(source_gens, &x_parts)
    };
    let coeffs: Vec<Vec<BigInt>> = source_rel_cols
        .iter()
        .map(|rel| {
            solve_columns(source_gens, &pre_basis, rel)
                .expect("source relation lies in the preimage lattice")
        })
        .collect();
    cokernel(pre_basis.len(), &coeffs)
}
