//! The graded free Lie ring in Lyndon coordinates.
//!
//! Degree `k` of the free Lie ring on `e_1..e_n` is free abelian on
//! the Lyndon words of length `k` over the alphabet `1 < 2 < ... < n`.
//! Every Lyndon word `w` of length at least two factors canonically as
//! `w = uv` with `v` its lexicographically least proper suffix, both
//! factors again Lyndon, and the recursive bracketing `[b(u), b(v)]`
//! expands in the tensor algebra to `w` plus lexicographically larger
//! words. That triangularity is the engine of this module: it makes
//! the Lyndon bracketings an integral basis and lets [`lie_coords`]
//! read coordinates off by back-substitution with no division at all.
//!
//! On top of the basis sit the bracket maps `beta_k` from
//! `H (x) L_{k+1}` to `L_{k+2}`, sending `e_i (x) alpha` to
//! `[e_i, alpha]`, assembled as integer matrices by [`beta_matrix`];
//! their kernels [`d_group`] are one of the three graded groups whose
//! ranks the rest of the crate compares.

use crate::quasilie::TreeNode;
use crate::zlinalg::{kernel_lattice, AbelianStructure, Matrix};
use crate::presented::Presentation;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FreeLieError {
    #[error("label {label} lies outside the basis range 1..={n}")]
    LabelOutOfRange { label: u32, n: u32 },
    #[error("not a Lie element: back-substitution leaves coefficient {coeff} on word {word}")]
    NotLieElement { word: String, coeff: BigInt },
    #[error("words of different lengths in one homogeneous polynomial")]
    MixedDegrees,
}

/// Dimension of degree `k` of the free Lie ring on `n` generators:
/// `(1/k) * sum over d dividing k of mu(d) * n^(k/d)`.
pub fn witt_dim(n: u32, k: u32) -> usize {
    assert!(k >= 1, "degree must be positive");
    let mut total: i128 = 0;
    for d in 1..=k {
        if k % d != 0 {
            continue;
        }
        let mu = moebius(d);
        if mu == 0 {
            continue;
        }
        let power = (n as i128)
            .checked_pow(k / d)
            .expect("basis count overflows i128");
        total += mu as i128 * power;
    }
    debug_assert!(total >= 0 && total % k as i128 == 0);
    usize::try_from(total / k as i128).expect("dimension fits usize")
}

fn moebius(m: u32) -> i32 {
    let mut m = m;
    let mut primes = 0;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return 0;
            }
            primes += 1;
        }
        p += 1;
    }
    if m > 1 {
        primes += 1;
    }
    if primes % 2 == 0 {
        1
    } else {
        -1
    }
}

/// A word strictly smaller than each of its proper rotations. The
/// derived ordering is lexicographic on letters.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LyndonWord {
    letters: Vec<u32>,
}

impl LyndonWord {
    /// Validating constructor: checks rotation minimality directly.
    pub fn new(letters: Vec<u32>) -> Option<LyndonWord> {
        if letters.is_empty() || letters.contains(&0) {
            return None;
        }
        for r in 1..letters.len() {
            let rotation: Vec<u32> = letters[r..]
                .iter()
                .chain(letters[..r].iter())
                .copied()
                .collect();
            if rotation <= letters {
                return None;
            }
        }
        Some(LyndonWord { letters })
    }

    pub fn letters(&self) -> &[u32] {
        &self.letters
    }

    pub fn degree(&self) -> usize {
        self.letters.len()
    }

    /// Dotted code, e.g. `1.1.2`; unambiguous for labels past 9.
    pub fn code(&self) -> String {
        word_code(&self.letters)
    }
}

impl fmt::Debug for LyndonWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.code())
    }
}

impl fmt::Display for LyndonWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.code())
    }
}

fn word_code(letters: &[u32]) -> String {
    let parts: Vec<String> = letters.iter().map(|l| l.to_string()).collect();
    parts.join(".")
}

/// All Lyndon words of length `k` over `1..=n`, in lexicographic
/// order, by Duval's iteration. Their count is [`witt_dim`].
pub fn lyndon_words(n: u32, k: u32) -> Vec<LyndonWord> {
    assert!(k >= 1, "degree must be positive");
    let k = k as usize;
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut w: Vec<u32> = vec![1];
    loop {
        if w.len() == k {
            out.push(LyndonWord { letters: w.clone() });
        }
        // Extend periodically to full length, then increment the last
        // incrementable letter; the new word is again Lyndon.
        let period = w.len();
        while w.len() < k {
            let repeat = w[w.len() - period];
            w.push(repeat);
        }
        while w.last() == Some(&n) {
            w.pop();
        }
        match w.last_mut() {
            None => break,
            Some(last) => *last += 1,
        }
    }
    debug_assert_eq!(out.len(), witt_dim(n, k as u32));
    out
}

/// Standard-factorization bracketing of a Lyndon word: split off the
/// lexicographically least proper suffix and recurse. Returns a tree
/// whose expansion leads with the word itself.
pub fn bracketing(w: &LyndonWord) -> TreeNode {
    bracket_letters(&w.letters)
}

fn bracket_letters(letters: &[u32]) -> TreeNode {
    if letters.len() == 1 {
        return TreeNode::Leaf(letters[0]);
    }
    let mut split = 1;
    for s in 2..letters.len() {
        if letters[s..] < letters[split..] {
            split = s;
        }
    }
    TreeNode::pair(
        bracket_letters(&letters[..split]),
        bracket_letters(&letters[split..]),
    )
}

/// A homogeneous integer combination of words of one fixed length,
/// the expansion target for brackets; the zero polynomial still
/// remembers its degree.
#[derive(Clone, PartialEq, Eq)]
pub struct TensorPoly {
    degree: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl TensorPoly {
    pub fn zero(degree: usize) -> TensorPoly {
        TensorPoly {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(word: Vec<u32>) -> TensorPoly {
        assert!(!word.is_empty(), "words have positive length");
        let degree = word.len();
        let mut terms = BTreeMap::new();
        terms.insert(word, BigInt::one());
        TensorPoly { degree, terms }
    }

    pub fn from_terms<I>(degree: usize, entries: I) -> Result<TensorPoly, FreeLieError>
    where
        I: IntoIterator<Item = (Vec<u32>, BigInt)>,
    {
        let mut poly = TensorPoly::zero(degree);
        for (word, coeff) in entries {
            if word.len() != degree {
                return Err(FreeLieError::MixedDegrees);
            }
            poly.add_term(word, coeff);
        }
        Ok(poly)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, word: &[u32]) -> BigInt {
        self.terms.get(word).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigInt)> {
        self.terms.iter().map(|(w, c)| (w.as_slice(), c))
    }

    fn add_term(&mut self, word: Vec<u32>, coeff: BigInt) {
        debug_assert_eq!(word.len(), self.degree);
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += coeff;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    /// `self + c * rhs`, in place. Degrees must agree.
    pub fn add_scaled(&mut self, rhs: &TensorPoly, c: &BigInt) {
        assert_eq!(self.degree, rhs.degree, "degrees must agree");
        for (word, coeff) in &rhs.terms {
            self.add_term(word.clone(), coeff * c);
        }
    }

    /// Concatenation product; degrees add.
    pub fn mul(&self, rhs: &TensorPoly) -> TensorPoly {
        let mut out = TensorPoly::zero(self.degree + rhs.degree);
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                let mut word = Vec::with_capacity(a.len() + b.len());
                word.extend_from_slice(a);
                word.extend_from_slice(b);
                out.add_term(word, ca * cb);
            }
        }
        out
    }
}

impl fmt::Debug for TensorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 (degree {})", self.degree);
        }
        let mut first = true;
        for (word, coeff) in &self.terms {
            if first {
                if coeff.is_one() {
                    write!(f, "{}", word_code(word))?;
                } else {
                    write!(f, "{}*{}", coeff, word_code(word))?;
                }
                first = false;
            } else if coeff > &BigInt::zero() {
                if coeff.is_one() {
                    write!(f, " + {}", word_code(word))?;
                } else {
                    write!(f, " + {}*{}", coeff, word_code(word))?;
                }
            } else {
                let a = -coeff;
                if a.is_one() {
                    write!(f, " - {}", word_code(word))?;
                } else {
                    write!(f, " - {}*{}", a, word_code(word))?;
                }
            }
        }
        Ok(())
    }
}

/// Expansion of an iterated bracket in the tensor algebra:
/// `[x, y] = xy - yx`, recursively from the leaves.
pub fn expand_to_tensor(t: &TreeNode) -> TensorPoly {
    match t {
        TreeNode::Leaf(l) => TensorPoly::monomial(vec![*l]),
        TreeNode::Pair(a, b) => {
            let p = expand_to_tensor(a);
            let q = expand_to_tensor(b);
            let mut out = p.mul(&q);
            out.add_scaled(&q.mul(&p), &-BigInt::one());
            out
        }
    }
}

/// Coordinates over the Lyndon words of one degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LieElement {
    pub degree: usize,
    pub coords: Vec<BigInt>,
}

/// The Lyndon basis of one degree with its tensor expansions, shared
/// across many coordinate computations.
pub(crate) struct LyndonBasis {
    n: u32,
    words: Vec<LyndonWord>,
    expansions: Vec<TensorPoly>,
}

impl LyndonBasis {
    pub(crate) fn new(n: u32, k: u32) -> LyndonBasis {
        let words = lyndon_words(n, k);
        let expansions = words
            .iter()
            .map(|w| expand_to_tensor(&bracketing(w)))
            .collect();
        LyndonBasis {
            n,
            words,
            expansions,
        }
    }

    pub(crate) fn words(&self) -> &[LyndonWord] {
        &self.words
    }

    /// Back-substitution against the triangular expansions.
    pub(crate) fn coords(&self, p: &TensorPoly) -> Result<LieElement, FreeLieError> {
        for (word, _) in p.terms() {
            for &l in word {
                if l == 0 || l > self.n {
                    return Err(FreeLieError::LabelOutOfRange { label: l, n: self.n });
                }
            }
        }
        let mut residual = p.clone();
        let mut coords = vec![BigInt::zero(); self.words.len()];
        for (i, w) in self.words.iter().enumerate() {
            let c = residual.coeff(w.letters());
            if !c.is_zero() {
                residual.add_scaled(&self.expansions[i], &-&c);
                coords[i] = c;
            }
        }
        if let Some((word, coeff)) = residual.terms().next() {
            return Err(FreeLieError::NotLieElement {
                word: word_code(word),
                coeff: coeff.clone(),
            });
        }
        Ok(LieElement {
            degree: p.degree(),
            coords,
        })
    }
}

/// Lyndon coordinates of a homogeneous tensor polynomial, failing
/// exactly when the polynomial is not in the image of the free Lie
/// ring.
pub fn lie_coords(p: &TensorPoly, n: u32) -> Result<LieElement, FreeLieError> {
    LyndonBasis::new(n, p.degree() as u32).coords(p)
}

/// The free group on the Lyndon codes of one degree, the coordinate
/// presentation of degree `k` of the free Lie ring.
pub fn lie_presentation(n: u32, k: u32) -> Presentation {
    let codes: Vec<String> = lyndon_words(n, k).iter().map(|w| w.code()).collect();
    Presentation::free(codes).expect("lyndon codes are sorted and distinct")
}

/// Matrix of the bracket map from `H (x) L_{k+1}` to `L_{k+2}`:
/// columns run over `(i, w)` with `i` major, rows over Lyndon words
/// of degree `k+2`; column `(i, w)` holds the coordinates of
/// `[e_i, b(w)]`.
pub fn beta_matrix(n: u32, k: u32) -> Matrix {
    assert!(k >= 1);
    let basis = LyndonBasis::new(n, k + 2);
    let sources = lyndon_words(n, k + 1);
    let rows = basis.words().len();
    let mut entries = Vec::new();
    for i in 1..=n {
        for (j, w) in sources.iter().enumerate() {
            let tree = TreeNode::pair(TreeNode::Leaf(i), bracketing(w));
            let el = basis
                .coords(&expand_to_tensor(&tree))
                .expect("brackets expand to Lie elements");
            let col = (i as usize - 1) * sources.len() + j;
            for (r, c) in el.coords.into_iter().enumerate() {
                if !c.is_zero() {
                    entries.push((r, col, c));
                }
            }
        }
    }
    Matrix::from_entries(rows, n as usize * sources.len(), entries)
        .expect("bracket coordinates in range")
}

/// Kernel of the bracket map: a free group, returned as its structure
/// together with a saturated lattice basis inside `H (x) L_{k+1}`.
pub fn d_group(n: u32, k: u32) -> (AbelianStructure, Matrix) {
    let basis = kernel_lattice(&beta_matrix(n, k));
    (AbelianStructure::free(basis.cols()), basis)
}
