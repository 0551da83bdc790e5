//! Canonical ordering for generator codes.
//!
//! Generator codes mix digits with punctuation (`1.1.2`, `3@(1,(2,2))`,
//! `k10`). Plain byte order would sort `10` before `2`, so all code
//! lists use a version order instead: maximal digit runs compare as
//! integers, everything else compares bytewise.

use std::cmp::Ordering;

/// Compares two codes in version order.
///
/// Digit runs are compared by numeric value (leading zeros break ties
/// in favor of the shorter run), other bytes literally. Total order.
pub fn version_cmp(a: &str, b: &str) -> Ordering {
    let xa = a.as_bytes();
    let xb = b.as_bytes();
    let (mut i, mut j) = (0, 0);
    while i < xa.len() && j < xb.len() {
        let (ca, cb) = (xa[i], xb[j]);
        if ca.is_ascii_digit() && cb.is_ascii_digit() {
            let sa = digit_run(xa, i);
            let sb = digit_run(xb, j);
            let va = strip_zeros(&xa[i..sa]);
            let vb = strip_zeros(&xb[j..sb]);
            let ord = va
                .len()
                .cmp(&vb.len())
                .then_with(|| va.cmp(vb))
                .then_with(|| (sa - i).cmp(&(sb - j)));
            if ord != Ordering::Equal {
                return ord;
            }
            i = sa;
            j = sb;
        } else {
            match ca.cmp(&cb) {
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
                ord => return ord,
            }
        }
    }
    (xa.len() - i).cmp(&(xb.len() - j))
}

/// True if `codes` is strictly increasing in version order.
pub fn is_sorted_strict(codes: &[String]) -> bool {
    codes
        .windows(2)
        .all(|w| version_cmp(&w[0], &w[1]) == Ordering::Less)
}

fn digit_run(bytes: &[u8], start: usize) -> usize {
    let mut end = start;
    while end < bytes.len() && bytes[end].is_ascii_digit() {
        end += 1;
    }
    end
}

fn strip_zeros(run: &[u8]) -> &[u8] {
    let mut k = 0;
    while k + 1 < run.len() && run[k] == b'0' {
        k += 1;
    }
    &run[k..]
}
