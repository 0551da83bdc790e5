//! Presentation minimization.
//!
//! Kernels come out of the preimage computation with one generator
//! per lattice basis vector and one relation per source relation,
//! which is far from minimal. [`reduce_presentation`] shrinks such a
//! presentation while carrying an ambient embedding along: first
//! Tietze elimination of every generator that some relation expresses
//! with a unit coefficient, then a Smith pass on the small leftover.
//! The result has only torsion generators (one relation each, chain
//! order) followed by free generators.

use super::Presentation;
use crate::zlinalg::{col_echelon, snf, unimodular_inverse, Matrix, Track};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Reduces `(generators of a lattice given by ambient columns of
/// `embedding`, relations)` to a small presentation plus the matching
/// embedding. Generator codes are `{prefix}0, {prefix}1, ...` in
/// torsion-then-free order.
pub(crate) fn reduce_presentation(
    embedding: &Matrix,
    relations: &Matrix,
    prefix: &str,
) -> (Presentation, Matrix) {
    let m = embedding.cols();
    debug_assert_eq!(relations.rows(), m);
    let ambient = embedding.rows();

    // Canonical relation basis; zero columns vanish here.
    let ech = col_echelon(m, relations.col_slices().to_vec(), Track::None);
    let mut rel_cols = ech.basis;
    let mut alive = vec![true; m];

    // Tietze phase: a relation with a unit entry eliminates that
    // generator; substitution is row clearing.
    loop {
        let Some((j, i, neg)) = find_unit(&rel_cols) else {
            break;
        };
        let piv = std::mem::take(&mut rel_cols[j]);
        let pv = if neg { -BigInt::one() } else { BigInt::one() };
        for col in rel_cols.iter_mut() {
            if col.is_empty() {
                continue;
            }
            if let Ok(pos) = col.binary_search_by_key(&i, |e| e.0) {
                let k = -(&col[pos].1 * &pv);
                *col = crate::zlinalg::add_scaled(col, &piv, &k);
            }
        }
        alive[i] = false;
    }

    // Compact to the living generators.
    let live_index: Vec<usize> = (0..m).filter(|&i| alive[i]).collect();
    let renum: std::collections::BTreeMap<usize, usize> = live_index
        .iter()
        .enumerate()
        .map(|(new, &old)| (old, new))
        .collect();
    let m_live = live_index.len();
    let live_rels: Vec<Vec<(usize, BigInt)>> = rel_cols
        .into_iter()
        .filter(|c| !c.is_empty())
        .map(|c| c.into_iter().map(|(r, v)| (renum[&r], v)).collect())
        .collect();
    let emb_live = Matrix::from_entries(
        ambient,
        m_live,
        live_index.iter().enumerate().flat_map(|(new, &old)| {
            embedding
                .col_entries(old)
                .iter()
                .map(move |(r, v)| (*r, new, v.clone()))
                .collect::<Vec<_>>()
        }),
    )
    .expect("live embedding in range");

    if live_rels.is_empty() {
        let codes: Vec<String> = (0..m_live).map(|i| format!("{prefix}{i}")).collect();
        let pres = Presentation::new(codes, Matrix::zero(m_live, 0))
            .expect("synthetic codes are sorted");
        return (pres, emb_live);
    }

    // Smith pass on the leftover block (no unit entries remain, so it
    // is small in practice, but units can still emerge from gcds).
    let r_live = live_rels.len();
    let rel_matrix = Matrix::from_entries(
        m_live,
        r_live,
        live_rels
            .iter()
            .enumerate()
            .flat_map(|(j, c)| c.iter().map(move |(r, v)| (*r, j, v.clone()))),
    )
    .expect("live relations in range");
    let f = snf(&rel_matrix);
    let u_inv = unimodular_inverse(&f.u);
    let emb_z = emb_live.mul(&u_inv);

    let rank = (0..m_live.min(r_live))
        .take_while(|&i| !f.s.entry(i, i).is_zero())
        .count();
    let mut torsion: Vec<(usize, BigInt)> = Vec::new();
    for i in 0..rank {
        let d = f.s.entry(i, i);
        debug_assert!(d.is_positive());
        if !d.is_one() {
            torsion.push((i, d));
        }
    }
    let free: Vec<usize> = (rank..m_live).collect();

    let total = torsion.len() + free.len();
    let codes: Vec<String> = (0..total).map(|i| format!("{prefix}{i}")).collect();
    let rel_final = Matrix::from_entries(
        total,
        torsion.len(),
        torsion
            .iter()
            .enumerate()
            .map(|(t, (_, d))| (t, t, d.clone())),
    )
    .expect("diagonal relations in range");
    let kept: Vec<usize> = torsion
        .iter()
        .map(|(i, _)| *i)
        .chain(free.iter().copied())
        .collect();
    let emb_final = Matrix::from_entries(
        ambient,
        total,
        kept.iter().enumerate().flat_map(|(new, &old)| {
            emb_z
                .col_entries(old)
                .iter()
                .map(move |(r, v)| (*r, new, v.clone()))
                .collect::<Vec<_>>()
        }),
    )
    .expect("final embedding in range");

    let pres = Presentation::new(codes, rel_final).expect("synthetic codes are sorted");
    (pres, emb_final)
}

/// First relation column carrying a unit entry, with the row of its
/// topmost unit and whether that unit is negative.
fn find_unit(cols: &[Vec<(usize, BigInt)>]) -> Option<(usize, usize, bool)> {
    for (j, col) in cols.iter().enumerate() {
        for (r, v) in col {
            if v.abs().is_one() {
                return Some((j, *r, v.is_negative()));
            }
        }
    }
    None
}
