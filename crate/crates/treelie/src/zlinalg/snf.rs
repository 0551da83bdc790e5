//! Smith normal form and the lattice computations built on it.
//!
//! [`snf`] returns the full decomposition `U * M * V = S` with
//! unimodular transforms; it works on a dense copy and is meant for
//! matrices of modest size. The structural queries used in bulk by
//! the rest of the crate ([`rank`], [`invariant_factors`],
//! [`cokernel_structure`], [`kernel_lattice`], [`lattice_member`])
//! stay on the sparse column representation and never build
//! transforms they do not need.

use super::elim::{col_echelon, Track};
use super::{Matrix, SparseCol};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Unimodular decomposition `U * M * V = S` with `S` diagonal,
/// nonnegative, and each diagonal entry dividing the next.
pub struct SmithForm {
    pub u: Matrix,
    pub s: Matrix,
    pub v: Matrix,
}

/// Isomorphism type of a finitely generated abelian group:
/// `Z^free_rank + Z/d1 + ... + Z/dm` with `1 < d1 | d2 | ... | dm`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianStructure {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl AbelianStructure {
    /// Canonicalizes arbitrary factors: drops units, restores the
    /// divisibility chain, sorts ascending.
    pub fn from_factors(free_rank: usize, factors: Vec<BigInt>) -> Self {
        let positive: Vec<BigInt> = factors
            .into_iter()
            .map(|d| d.abs())
            .filter(|d| !d.is_zero())
            .collect();
        let torsion = chain_fix(positive)
            .into_iter()
            .filter(|d| !d.is_one())
            .collect();
        AbelianStructure { free_rank, torsion }
    }

    pub fn trivial() -> Self {
        AbelianStructure {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        AbelianStructure {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    /// Torsion coefficients, each > 1, each dividing the next.
    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }

    /// True when every torsion coefficient is odd.
    pub fn torsion_is_odd(&self) -> bool {
        self.torsion.iter().all(|d| d.is_odd())
    }
}

impl fmt::Display for AbelianStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Restores `d1 | d2 | ...` on a multiset of positive integers by
/// repeated gcd/lcm exchanges; the product is preserved.
fn chain_fix(mut d: Vec<BigInt>) -> Vec<BigInt> {
    d.sort();
    loop {
        let mut changed = false;
        for i in 0..d.len().saturating_sub(1) {
            if !(&d[i + 1] % &d[i]).is_zero() {
                let g = d[i].gcd(&d[i + 1]);
                let l = (&d[i] * &d[i + 1]) / &g;
                d[i] = g;
                d[i + 1] = l;
                changed = true;
            }
        }
        if !changed {
            return d;
        }
        d.sort();
    }
}

/// Rank of the column lattice.
pub fn rank(m: &Matrix) -> usize {
    col_echelon(m.rows(), m.col_slices().to_vec(), Track::None).rank()
}

/// Invariant factors of `M` (units included), as a divisibility
/// chain of length `rank(M)`.
pub fn invariant_factors(m: &Matrix) -> Vec<BigInt> {
    diagonal_entries(m)
}

/// Structure of `Z^rows / columnLattice(M)`.
pub fn cokernel_structure(m: &Matrix) -> AbelianStructure {
    let diag = diagonal_entries(m);
    let free_rank = m.rows() - diag.len();
    AbelianStructure::from_factors(free_rank, diag)
}

/// A canonical basis of the saturated integer kernel `{x : Mx = 0}`.
/// The column count is exactly `cols(M) - rank(M)`.
pub fn kernel_lattice(m: &Matrix) -> Matrix {
    let ech = col_echelon(m.rows(), m.col_slices().to_vec(), Track::Cols(m.cols()));
    let raw = Matrix::from_cols(m.cols(), ech.kernel_trans);
    let canon = col_echelon(raw.rows(), raw.into_cols(), Track::None).basis_matrix();
    debug_assert!(m.mul(&canon).is_zero());
    canon
}

/// Solves `M x = v` over the integers; `Some(x)` is an exact witness,
/// `None` means `v` is outside the column lattice.
pub fn lattice_member(m: &Matrix, v: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(v.len(), m.rows(), "vector length must equal rows");
    let ech = col_echelon(m.rows(), m.col_slices().to_vec(), Track::Cols(m.cols()));
    let x = ech.witness(v, m.cols())?;
    debug_assert_eq!(m.mul_vec(&x), v.to_vec());
    Some(x)
}

/// Invariant factor chain of `M` including unit factors, computed by
/// alternating sparse column Hermite reduction with transposition.
/// Every step preserves the invariant factors, so the diagonal that
/// eventually appears is the Smith diagonal.
fn diagonal_entries(m: &Matrix) -> Vec<BigInt> {
    let mut rows = m.rows();
    let mut cols: Vec<SparseCol> = m.col_slices().to_vec();
    const CAP: usize = 1000;
    for _ in 0..CAP {
        let ech = col_echelon(rows, cols, Track::None);
        if ech.basis.iter().all(|c| c.len() == 1) {
            let d: Vec<BigInt> = ech.basis.iter().map(|c| c[0].1.abs()).collect();
            return chain_fix(d);
        }
        let t = ech.basis_matrix().transpose();
        rows = t.rows();
        cols = t.into_cols();
    }
    // Unreachable in practice; the dense routine is a safe fallback.
    let s = snf(&Matrix::from_cols(rows, cols)).s;
    (0..s.rows().min(s.cols()))
        .map(|i| s.entry(i, i))
        .filter(|d| !d.is_zero())
        .collect()
}

/// Inverse of a unimodular integer matrix. With `U1 * M * V1 = I`,
/// the inverse is `V1 * U1`. Panics if `M` is not unimodular.
pub(crate) fn unimodular_inverse(m: &Matrix) -> Matrix {
    assert_eq!(m.rows(), m.cols(), "inverse requires a square matrix");
    let f = snf(m);
    assert_eq!(f.s, Matrix::identity(m.rows()), "matrix is not unimodular");
    let inv = f.v.mul(&f.u);
    debug_assert_eq!(m.mul(&inv), Matrix::identity(m.rows()));
    inv
}

/// Exact determinant of a square matrix (Bareiss elimination).
pub fn determinant(m: &Matrix) -> BigInt {
    assert_eq!(m.rows(), m.cols(), "determinant requires a square matrix");
    let n = m.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_dense();
    let mut prev = BigInt::one();
    let mut sign = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                a[i][j] = q;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * std::mem::take(&mut a[n - 1][n - 1])
}

struct DenseWork {
    a: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>, // stored column-major: v[j] is column j
}

impl DenseWork {
    fn rows(&self) -> usize {
        self.a.len()
    }

    fn cols(&self) -> usize {
        self.a.first().map_or(0, Vec::len)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            self.a.swap(i, j);
            self.u.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in &mut self.a {
            row.swap(i, j);
        }
        self.v.swap(i, j);
    }

    /// row_i += k * row_j
    fn add_row(&mut self, i: usize, j: usize, k: &BigInt) {
        for c in 0..self.cols() {
            let t = &self.a[j][c] * k;
            self.a[i][c] += t;
        }
        for c in 0..self.u[i].len() {
            let t = &self.u[j][c] * k;
            self.u[i][c] += t;
        }
    }

    /// col_i += k * col_j
    fn add_col(&mut self, i: usize, j: usize, k: &BigInt) {
        for r in 0..self.rows() {
            let t = &self.a[r][j] * k;
            self.a[r][i] += t;
        }
        for r in 0..self.v[i].len() {
            let t = &self.v[j][r] * k;
            self.v[i][r] += t;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in &mut self.a[i] {
            *c = -std::mem::take(c);
        }
        for c in &mut self.u[i] {
            *c = -std::mem::take(c);
        }
    }

    /// Clears row and column `t` against the pivot at `(t, t)`,
    /// shrinking the pivot Euclid-style whenever a remainder shows up.
    fn clear_cross(&mut self, t: usize) {
        loop {
            let mut changed = false;
            for i in 0..self.rows() {
                if i == t || self.a[i][t].is_zero() {
                    continue;
                }
                let q = -div_round_big(&self.a[i][t], &self.a[t][t]);
                if !q.is_zero() {
                    self.add_row(i, t, &q);
                }
                if !self.a[i][t].is_zero() {
                    // Remainder is strictly smaller than the pivot.
                    self.swap_rows(i, t);
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            for j in 0..self.cols() {
                if j == t || self.a[t][j].is_zero() {
                    continue;
                }
                let q = -div_round_big(&self.a[t][j], &self.a[t][t]);
                if !q.is_zero() {
                    self.add_col(j, t, &q);
                }
                if !self.a[t][j].is_zero() {
                    self.swap_cols(j, t);
                    changed = true;
                }
            }
            if !changed {
                return;
            }
        }
    }
}

fn div_round_big(a: &BigInt, b: &BigInt) -> BigInt {
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

/// Full Smith normal form with unimodular transforms. Dense
/// internally; intended for matrices up to a few hundred on a side.
pub fn snf(m: &Matrix) -> SmithForm {
    let rows = m.rows();
    let cols = m.cols();
    let ident = |n: usize| -> Vec<Vec<BigInt>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                    .collect()
            })
            .collect()
    };
    let mut w = DenseWork {
        a: m.to_dense(),
        u: ident(rows),
        v: ident(cols),
    };

    let mut t = 0;
    while t < rows.min(cols) {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if w.a[i][j].is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bi, bj)) => w.a[i][j].abs() < w.a[bi][bj].abs(),
                };
                if better {
                    best = Some((i, j));
                }
            }
        }
        let Some((r, c)) = best else { break };
        w.swap_rows(t, r);
        w.swap_cols(t, c);
        w.clear_cross(t);
        t += 1;
    }
    let rank = t;

    // Repair the divisibility chain with 2x2 gcd/lcm exchanges.
    loop {
        let mut ok = true;
        for i in 0..rank.saturating_sub(1) {
            let (di, dj) = (w.a[i][i].clone(), w.a[i + 1][i + 1].clone());
            if !(&dj % &di).is_zero() {
                w.add_col(i, i + 1, &BigInt::one());
                w.clear_cross(i);
                ok = false;
            }
        }
        if ok {
            break;
        }
    }

    for i in 0..rank {
        if w.a[i][i].is_negative() {
            w.negate_row(i);
        }
    }

    let s = Matrix::from_entries(
        rows,
        cols,
        (0..rank).map(|i| (i, i, w.a[i][i].clone())),
    )
    .expect("diagonal in range");
    let u = Matrix::from_entries(
        rows,
        rows,
        w.u.iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, x)| (i, j, x.clone()))),
    )
    .expect("U in range");
    let v = Matrix::from_entries(
        cols,
        cols,
        w.v.iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().enumerate().map(move |(i, x)| (i, j, x.clone()))),
    )
    .expect("V in range");
    SmithForm { u, s, v }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn check_smith(m: &Matrix) -> SmithForm {
        let f = snf(m);
        assert_eq!(f.u.mul(m).mul(&f.v), f.s, "U*M*V must equal S");
        assert_eq!(determinant(&f.u).abs(), BigInt::one());
        assert_eq!(determinant(&f.v).abs(), BigInt::one());
        let k = m.rows().min(m.cols());
        let diag: Vec<BigInt> = (0..k).map(|i| f.s.entry(i, i)).collect();
        for (r, c, v) in f.s.entries() {
            assert!(r == c && !v.is_zero(), "S must be diagonal");
        }
        for w in diag.windows(2) {
            if !w[0].is_zero() {
                assert!(
                    w[1].is_zero() || (&w[1] % &w[0]).is_zero(),
                    "chain violated: {} then {}",
                    w[0],
                    w[1]
                );
            } else {
                assert!(w[1].is_zero(), "zero before nonzero on diagonal");
            }
        }
        f
    }

    #[test]
    fn identity_is_fixed() {
        let f = check_smith(&Matrix::identity(3));
        assert_eq!(f.s, Matrix::identity(3));
    }

    #[test]
    fn coprime_diagonal_merges() {
        let f = check_smith(&Matrix::from_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(f.s, Matrix::from_rows(&[vec![1, 0], vec![0, 6]]));
    }

    #[test]
    fn zero_matrix_stays_zero() {
        let f = check_smith(&Matrix::zero(2, 4));
        assert_eq!(f.s, Matrix::zero(2, 4));
    }

    #[test]
    fn empty_shapes() {
        check_smith(&Matrix::zero(0, 0));
        check_smith(&Matrix::zero(0, 5));
        check_smith(&Matrix::zero(5, 0));
    }

    #[test]
    fn kernel_of_sum_map() {
        let k = kernel_lattice(&Matrix::from_rows(&[vec![1, 1]]));
        assert_eq!(k.cols(), 1);
        // Saturated: (1,-1) itself, not a multiple.
        assert_eq!(k.col_vec(0), vec![big(1), big(-1)]);
    }

    #[test]
    fn kernel_counts_match_rank() {
        let m = Matrix::from_rows(&[vec![2, 4, 6], vec![1, 2, 3]]);
        assert_eq!(rank(&m), 1);
        let k = kernel_lattice(&m);
        assert_eq!(k.cols(), 2);
        assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn cokernel_examples() {
        let s = cokernel_structure(&Matrix::from_rows(&[vec![2]]));
        assert_eq!(s.free_rank(), 0);
        assert_eq!(s.torsion(), &[big(2)]);

        let s = cokernel_structure(&Matrix::from_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s, AbelianStructure::from_factors(0, vec![big(6)]));

        let s = cokernel_structure(&Matrix::zero(2, 0));
        assert_eq!(s, AbelianStructure::free(2));
    }

    #[test]
    fn cokernel_invariant_under_unimodular_change() {
        let m = Matrix::from_rows(&[vec![4, 6], vec![2, 8]]);
        let base = cokernel_structure(&m);
        // Row change: add twice row 1 to row 0; column change: swap.
        let e = Matrix::from_rows(&[vec![1, 2], vec![0, 1]]);
        let p = Matrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(cokernel_structure(&e.mul(&m).mul(&p)), base);
    }

    #[test]
    fn membership_witnesses() {
        let m = Matrix::from_rows(&[vec![2]]);
        assert_eq!(lattice_member(&m, &[big(4)]), Some(vec![big(2)]));
        assert_eq!(lattice_member(&m, &[big(3)]), None);

        let d = Matrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(
            lattice_member(&d, &[big(2), big(3)]),
            Some(vec![big(1), big(1)])
        );
    }

    #[test]
    fn determinant_matches_cofactor_values() {
        let m = Matrix::from_rows(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]);
        assert_eq!(determinant(&m), big(-3));
        assert_eq!(determinant(&Matrix::identity(4)), big(1));
        assert_eq!(
            determinant(&Matrix::from_rows(&[vec![0, 1], vec![1, 0]])),
            big(-1)
        );
        assert_eq!(determinant(&Matrix::zero(0, 0)), big(1));
    }

    #[test]
    fn structure_display() {
        assert_eq!(AbelianStructure::trivial().to_string(), "0");
        assert_eq!(AbelianStructure::free(1).to_string(), "Z");
        assert_eq!(
            AbelianStructure::from_factors(2, vec![big(2), big(4)]).to_string(),
            "Z^2 + Z/2 + Z/4"
        );
        // Non-chain input is canonicalized.
        assert_eq!(
            AbelianStructure::from_factors(0, vec![big(2), big(3)]).to_string(),
            "Z/6"
        );
    }

    #[test]
    fn invariant_factors_include_units() {
        let m = Matrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(invariant_factors(&m), vec![big(1), big(6)]);
    }
}
