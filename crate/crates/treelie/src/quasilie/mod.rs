//! The graded free quasi-Lie ring and its comparison with the free
//! Lie ring.
//!
//! A quasi-Lie ring keeps bilinearity and the Jacobi identity but
//! weakens `[x,x] = 0` to `[x,y] + [y,x] = 0`, so squares `[x,x]`
//! survive as 2-torsion. Degree `k` of the free quasi-Lie ring on
//! `e_1..e_n` is presented on all labeled planar binary trees with
//! `k` leaves, modulo one antisymmetry column per internal vertex and
//! one Jacobi column per internal edge ([`lprime_presentation`]).
//!
//! Collapsing each square to zero gives the comparison map
//! [`gamma_hom`] onto the free Lie ring; its kernel [`kernel_gamma`]
//! vanishes in odd degrees and is exhausted by the squaring map
//! [`square_hom`] in even ones. Bracketing with the degree-one part
//! gives [`betaprime_hom`] with kernel [`dprime_group`], the
//! quasi-Lie shadow of the free-Lie kernel `D_k`; the two kernels and
//! the squares fit into short exact sequences that [`snake_verify`]
//! checks joint by joint: for even `k` the sequence
//! `0 -> D'_k -> D_k -> K_{k+2} -> 0`, for odd `k` the sequence
//! `0 -> H(x)K_{k+1} -> D'_k -> D_k -> 0`.

mod tree;

pub use tree::{enumerate_rooted_trees, RootedTree, TreeCodeError, TreeNode};

pub(crate) use tree::{catalan, enumerate_trees};

use crate::codes;
use crate::freelie::{self, LyndonBasis};
use crate::presented::{
    check_exact, tensor_hom, tensor_with_free, PresentError, Presentation, PresentedHom,
};
use crate::zlinalg::{col_echelon, AbelianStructure, Matrix, Track};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, Mutex, OnceLock};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum QuasiError {
    #[error(transparent)]
    Present(#[from] PresentError),
    #[error("no integral witness for column {index} while building the {stage}")]
    MissingWitness { stage: &'static str, index: usize },
}

/// A presentation of one degree of the free quasi-Lie ring, keeping
/// the raw relation count (one antisymmetry column per internal
/// vertex plus one Jacobi column per internal edge, per generator)
/// from before sign normalization and deduplication.
#[derive(Clone)]
pub struct QuasiPresentation {
    presentation: Arc<Presentation>,
    raw_relation_count: usize,
}

impl QuasiPresentation {
    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.presentation
    }

    pub fn raw_relation_count(&self) -> usize {
        self.raw_relation_count
    }

    pub fn group_structure(&self) -> &AbelianStructure {
        self.presentation.group_structure()
    }
}

fn lprime_memo() -> &'static Mutex<BTreeMap<(u32, u32), QuasiPresentation>> {
    static MEMO: OnceLock<Mutex<BTreeMap<(u32, u32), QuasiPresentation>>> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// Degree `k` of the free quasi-Lie ring on `n` generators, memoized
/// per process. The build is pure, so concurrent callers may race to
/// construct; the first finished result is published and shared.
pub fn lprime_presentation(n: u32, k: u32) -> QuasiPresentation {
    if let Some(hit) = lprime_memo().lock().expect("memo lock").get(&(n, k)) {
        return hit.clone();
    }
    let built = build_lprime(n, k);
    lprime_memo()
        .lock()
        .expect("memo lock")
        .entry((n, k))
        .or_insert(built)
        .clone()
}

fn build_lprime(n: u32, k: u32) -> QuasiPresentation {
    let mut pairs: Vec<(String, TreeNode)> = enumerate_trees(n, k)
        .into_iter()
        .map(|t| (t.code(), t))
        .collect();
    pairs.sort_by(|a, b| codes::version_cmp(&a.0, &b.0));
    let gens: Vec<String> = pairs.iter().map(|(c, _)| c.clone()).collect();
    let find = |code: &str| -> usize {
        gens.binary_search_by(|g| codes::version_cmp(g, code))
            .expect("rewritten tree is again a generator")
    };

    let mut dedup = ColumnDedup::new(gens.len());
    for (j, (_, t)) in pairs.iter().enumerate() {
        for swapped in t.vertex_swaps() {
            dedup.push(vec![(j, 1), (find(&swapped.code()), 1)]);
        }
        for rel in t.jacobi_relations() {
            dedup.push(rel.iter().map(|(u, c)| (find(&u.code()), *c)).collect());
        }
    }
    let (relations, raw) = dedup.finish();
    let presentation =
        Arc::new(Presentation::new(gens, relations).expect("tree codes are sorted and distinct"));
    QuasiPresentation {
        presentation,
        raw_relation_count: raw,
    }
}

/// Accumulates signed relation columns for a presentation, dropping
/// columns that cancel to zero and duplicates up to global sign, and
/// counting the raw pushes for reporting.
pub(crate) struct ColumnDedup {
    rows: usize,
    raw: usize,
    seen: BTreeSet<Vec<(usize, BigInt)>>,
    cols: Vec<Vec<(usize, BigInt)>>,
}

impl ColumnDedup {
    pub(crate) fn new(rows: usize) -> ColumnDedup {
        ColumnDedup {
            rows,
            raw: 0,
            seen: BTreeSet::new(),
            cols: Vec::new(),
        }
    }

    pub(crate) fn push(&mut self, terms: Vec<(usize, i64)>) {
        self.raw += 1;
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        for (i, c) in terms {
            *acc.entry(i).or_insert(0) += c;
        }
        let col: Vec<(usize, BigInt)> = acc
            .into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|(i, c)| (i, BigInt::from(c)))
            .collect();
        if col.is_empty() {
            return;
        }
        let col = if col[0].1.is_negative() {
            col.into_iter().map(|(i, v)| (i, -v)).collect()
        } else {
            col
        };
        if self.seen.insert(col.clone()) {
            self.cols.push(col);
        }
    }

    /// The deduplicated relation matrix and the raw push count.
    pub(crate) fn finish(self) -> (Matrix, usize) {
        (Matrix::from_cols(self.rows, self.cols), self.raw)
    }
}

/// The comparison map from degree `k` of the quasi-Lie ring onto the
/// free Lie ring, each tree generator sent to the Lyndon coordinates
/// of its expansion. Always induced: antisymmetry and Jacobi columns
/// expand to the zero polynomial.
pub fn gamma_hom(n: u32, k: u32) -> PresentedHom {
    let source = lprime_presentation(n, k);
    let src = source.presentation().clone();
    let target = Arc::new(freelie::lie_presentation(n, k));
    let basis = LyndonBasis::new(n, k);
    let mut entries = Vec::new();
    for (j, code) in src.generators().iter().enumerate() {
        let tree = TreeNode::parse(code).expect("generator codes parse");
        let el = basis
            .coords(&freelie::expand_to_tensor(&tree))
            .expect("bracket expansions are Lie elements");
        for (r, c) in el.coords.into_iter().enumerate() {
            if !c.is_zero() {
                entries.push((r, j, c));
            }
        }
    }
    let lift = Matrix::from_entries(target.generator_count(), src.generator_count(), entries)
        .expect("lyndon coordinates in range");
    let hom = PresentedHom::new(src, target, lift).expect("comparison lift shape");
    debug_assert!(hom.is_induced());
    hom
}

/// Kernel of the comparison map, as a reduced presentation plus its
/// embedding into the free cover on tree generators.
pub fn kernel_gamma(n: u32, k: u32) -> (Arc<Presentation>, Matrix) {
    gamma_hom(n, k)
        .hom_kernel()
        .expect("comparison map is induced")
}

/// The squaring map from `L_l / 2 L_l` (Lyndon generators, each
/// doubled to zero) into degree `2l` of the quasi-Lie ring, sending a
/// basis bracketing `b` to the tree `(b,b)`. Additivity comes from
/// antisymmetry, and the lift is checked, not assumed, to kill the
/// doubling relations.
pub fn square_hom(n: u32, l: u32) -> PresentedHom {
    let words = freelie::lyndon_words(n, l);
    let gens: Vec<String> = words.iter().map(|w| w.code()).collect();
    let m = gens.len();
    let relations = Matrix::from_entries(m, m, (0..m).map(|i| (i, i, BigInt::from(2))))
        .expect("diagonal entries in range");
    let source =
        Arc::new(Presentation::new(gens, relations).expect("lyndon codes are sorted"));
    let target = lprime_presentation(n, 2 * l).presentation().clone();
    let mut entries = Vec::new();
    for (j, w) in words.iter().enumerate() {
        let b = freelie::bracketing(w);
        let square = TreeNode::pair(b.clone(), b);
        let idx = target
            .generator_index(&square.code())
            .expect("square of a bracketing is a generator");
        entries.push((idx, j, BigInt::one()));
    }
    let lift = Matrix::from_entries(target.generator_count(), m, entries)
        .expect("square lift entries in range");
    let hom = PresentedHom::new(source, target, lift).expect("square lift shape");
    assert!(
        hom.is_induced(),
        "doubled generators must land in the antisymmetry lattice"
    );
    hom
}

/// The bracket map from `H (x) L'_{k+1}` to `L'_{k+2}`: the tensor
/// generator `i@T` grafts to the tree `(i,T)`. Surjective by Jacobi
/// and antisymmetry, which the cokernel computation confirms.
pub fn betaprime_hom(n: u32, k: u32) -> PresentedHom {
    let base = lprime_presentation(n, k + 1);
    let source = Arc::new(tensor_with_free(base.presentation(), n as usize));
    let target = lprime_presentation(n, k + 2).presentation().clone();
    let mut entries = Vec::new();
    for (j, code) in source.generators().iter().enumerate() {
        let (label, subtree) = code.split_once('@').expect("tensor codes carry a label");
        let grafted = format!("({label},{subtree})");
        let idx = target
            .generator_index(&grafted)
            .expect("grafted tree is a generator");
        entries.push((idx, j, BigInt::one()));
    }
    let lift = Matrix::from_entries(target.generator_count(), source.generator_count(), entries)
        .expect("graft entries in range");
    let hom = PresentedHom::new(source, target, lift).expect("graft lift shape");
    assert!(hom.is_induced(), "grafting carries relations to relations");
    hom
}

/// Kernel of the bracket map on the quasi-Lie side, as a reduced
/// presentation plus its embedding into the free cover of
/// `H (x) L'_{k+1}`.
pub fn dprime_group(n: u32, k: u32) -> (Arc<Presentation>, Matrix) {
    betaprime_hom(n, k)
        .hom_kernel()
        .expect("bracket map is induced")
}

/// Outcome of checking one short exact sequence, joint by joint.
#[derive(Clone, Debug)]
pub struct SnakeReport {
    pub n: u32,
    pub k: u32,
    /// Rendered sequence, e.g. `0 -> D'_2 -> D_2 -> K_4 -> 0`.
    pub sequence: String,
    /// Structure of the torsion flank: `K_{k+2}` for even `k`,
    /// `H (x) K_{k+1}` for odd `k`.
    pub flank: AbelianStructure,
    pub dprime: AbelianStructure,
    pub d: AbelianStructure,
    pub left_injective: bool,
    pub middle_exact: bool,
    pub right_surjective: bool,
}

impl SnakeReport {
    pub fn passed(&self) -> bool {
        self.left_injective && self.middle_exact && self.right_surjective
    }
}

/// Builds the connecting maps between the bracket kernels in degree
/// `k` and checks the resulting short exact sequence at every joint.
///
/// For even `k` the sequence is `0 -> D'_k -> D_k -> K_{k+2} -> 0`:
/// the left map restricts `1 (x) gamma_{k+1}`, and the connecting map
/// lifts a kernel element through `1 (x) gamma_{k+1}`, pushes it
/// through the quasi-Lie bracket, and reads the result in `K_{k+2}`.
/// For odd `k` it is `0 -> H (x) K_{k+1} -> D'_k -> D_k -> 0`, with
/// the left map the inclusion of tensors whose second factor dies in
/// the Lie ring. Any failure to find an integral witness aborts with
/// the offending column.
pub fn snake_verify(n: u32, k: u32) -> Result<SnakeReport, QuasiError> {
    let (d_struct, d_basis) = freelie::d_group(n, k);
    let d_codes: Vec<String> = (0..d_basis.cols()).map(|i| format!("d{i}")).collect();
    let d_pres = Arc::new(Presentation::free(d_codes).expect("synthetic codes sorted"));
    let d_ech = col_echelon(d_basis.rows(), d_basis.col_slices().to_vec(), Track::None);
    debug_assert_eq!(d_ech.basis_matrix(), d_basis, "kernel basis is canonical");

    let (dp_pres, dp_emb) = dprime_group(n, k);
    let tensor_gamma = tensor_hom(&gamma_hom(n, k + 1), n as usize);

    // D'_k -> D_k, the restriction of 1 (x) gamma_{k+1}.
    let mut entries = Vec::new();
    for j in 0..dp_emb.cols() {
        let image = tensor_gamma.lift().mul_vec(&dp_emb.col_vec(j));
        let coords = d_ech
            .solve(&image)
            .ok_or(QuasiError::MissingWitness {
                stage: "restriction to the bracket kernel",
                index: j,
            })?;
        for (r, c) in coords.into_iter().enumerate() {
            if !c.is_zero() {
                entries.push((r, j, c));
            }
        }
    }
    let restrict_lift = Matrix::from_entries(d_pres.generator_count(), dp_emb.cols(), entries)
        .expect("restriction entries in range");
    let restrict = PresentedHom::new(dp_pres.clone(), d_pres.clone(), restrict_lift)?;

    if k % 2 == 0 {
        let (k_pres, k_emb) = kernel_gamma(n, k + 2);
        let bprime = betaprime_hom(n, k);

        // Connecting map: lift through 1 (x) gamma, apply the
        // quasi-Lie bracket, express in kernel classes.
        let g = tensor_gamma.lift();
        let g_ech = col_echelon(g.rows(), g.col_slices().to_vec(), Track::Cols(g.cols()));
        let target_rels = lprime_presentation(n, k + 2).presentation().clone();
        let stack = Matrix::hstack(&[&k_emb, target_rels.relations()]);
        let k_ech = col_echelon(stack.rows(), stack.into_cols(), Track::Cols(k_emb.cols()));
        let mut entries = Vec::new();
        for j in 0..d_basis.cols() {
            let pre = g_ech
                .witness(&d_basis.col_vec(j), g.cols())
                .ok_or(QuasiError::MissingWitness {
                    stage: "lift through 1 (x) gamma",
                    index: j,
                })?;
            let pushed = bprime.lift().mul_vec(&pre);
            let coords = k_ech
                .witness(&pushed, k_emb.cols())
                .ok_or(QuasiError::MissingWitness {
                    stage: "expression in kernel classes",
                    index: j,
                })?;
            for (r, c) in coords.into_iter().enumerate() {
                if !c.is_zero() {
                    entries.push((r, j, c));
                }
            }
        }
        let connect_lift =
            Matrix::from_entries(k_pres.generator_count(), d_basis.cols(), entries)
                .expect("connecting entries in range");
        let connect = PresentedHom::new(d_pres.clone(), k_pres.clone(), connect_lift)?;

        let left_injective = restrict.hom_kernel()?.0.group_structure().is_trivial();
        let middle_exact = check_exact(&restrict, &connect)?;
        let right_surjective = connect.hom_cokernel()?.is_trivial();
        Ok(SnakeReport {
            n,
            k,
            sequence: format!("0 -> D'_{k} -> D_{k} -> K_{} -> 0", k + 2),
            flank: k_pres.group_structure().clone(),
            dprime: dp_pres.group_structure().clone(),
            d: d_struct,
            left_injective,
            middle_exact,
            right_surjective,
        })
    } else {
        let (kk_pres, kk_emb) = kernel_gamma(n, k + 1);
        let hk_pres = Arc::new(tensor_with_free(&kk_pres, n as usize));
        let base_gens = lprime_presentation(n, k + 1).presentation().generator_count();

        // Inclusion H (x) K_{k+1} -> D'_k: shift each embedded kernel
        // column into its tensor block, then express it over the
        // bracket-kernel generators.
        let tensor_pres = tensor_with_free(lprime_presentation(n, k + 1).presentation(), n as usize);
        let stack = Matrix::hstack(&[&dp_emb, tensor_pres.relations()]);
        let dp_ech = col_echelon(stack.rows(), stack.into_cols(), Track::Cols(dp_emb.cols()));
        let blocks = kk_emb.cols();
        let mut entries = Vec::new();
        for i in 0..n as usize {
            for j in 0..blocks {
                let mut ambient = vec![BigInt::zero(); n as usize * base_gens];
                for (r, v) in kk_emb.col_entries(j) {
                    ambient[i * base_gens + r] = v.clone();
                }
                let col = i * blocks + j;
                let coords = dp_ech
                    .witness(&ambient, dp_emb.cols())
                    .ok_or(QuasiError::MissingWitness {
                        stage: "inclusion into the bracket kernel",
                        index: col,
                    })?;
                for (r, c) in coords.into_iter().enumerate() {
                    if !c.is_zero() {
                        entries.push((r, col, c));
                    }
                }
            }
        }
        let include_lift =
            Matrix::from_entries(dp_pres.generator_count(), n as usize * blocks, entries)
                .expect("inclusion entries in range");
        let include = PresentedHom::new(hk_pres.clone(), dp_pres.clone(), include_lift)?;

        let left_injective = include.hom_kernel()?.0.group_structure().is_trivial();
        let middle_exact = check_exact(&include, &restrict)?;
        let right_surjective = restrict.hom_cokernel()?.is_trivial();
        Ok(SnakeReport {
            n,
            k,
            sequence: format!("0 -> H(x)K_{} -> D'_{k} -> D_{k} -> 0", k + 1),
            flank: hk_pres.group_structure().clone(),
            dprime: dp_pres.group_structure().clone(),
            d: d_struct,
            left_injective,
            middle_exact,
            right_surjective,
        })
    }
}
