//! Tree diagram groups and the rooting maps that tie them to the
//! bracket kernels.
//!
//! A diagram of order `k` is a planar binary tree with `k` trivalent
//! vertices and `k+2` univalent ones, every univalent vertex labeled
//! by a basis vector of `H` and one of them designated as the root.
//! [`at_presentation`] presents the group of such diagrams modulo
//! antisymmetry at each trivalent vertex, the expansion relation at
//! each internal edge, and rerooting: designating a different leaf as
//! the root ([`reroot`]) does not change the class. Keeping rooted
//! generators and pushing root independence into explicit relations
//! makes the maps below one-line matrix definitions.
//!
//! Reading the root label as a tensor factor, a rooted diagram is a
//! generator of `H (x) L'_{k+1}`, and the presentations share their
//! generator codes verbatim. Summing a diagram over all `k+2` of its
//! rootings gives [`etaprime_hom`] into `H (x) L'_{k+1}`; the image
//! lies in the kernel of the quasi-Lie bracket map
//! ([`image_lies_in_bracket_kernel`]), and composing with the tensored
//! Lie comparison map lands it in the integral bracket kernel on the
//! Lie side ([`eta_hom`]). Forgetting the root is [`rho_hom`] in the
//! other direction, and the round trip multiplies by `k+2`
//! ([`rho_etaprime_is_multiplication`]), which bounds the kernel of
//! the rooting sum by `(k+2)`-torsion ([`ker_etaprime`]).
//!
//! [`tau_check`] drives the sharper kernel statement: a partial
//! inverse to the bracket map splits each bracket `(A,B)` into
//! rerootings over the leaves of `A` only, is well defined modulo the
//! rooting-sum image, and composes with the bracket map to the
//! canonical projection, forcing the kernel of the bracket map to
//! equal the rooting-sum image. Whether the rooting sum is injective
//! outright is only scanned and reported, never asserted.

use crate::codes;
use crate::presented::{
    check_exact, tensor_hom, tensor_with_free, PresentError, Presentation, PresentedHom,
};
use crate::quasilie::{
    enumerate_trees, gamma_hom, lprime_presentation, ColumnDedup, RootedTree, TreeNode,
};
use crate::zlinalg::{col_echelon, AbelianStructure, Matrix, Track};
use num_bigint::BigInt;
use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TreeDiagError {
    #[error(transparent)]
    Present(#[from] PresentError),
    #[error("tree has no root label to reroot from")]
    UnrootedTree,
    #[error("leaf index {index} out of range for a tree with {leaves} leaves")]
    LeafOutOfRange { index: usize, leaves: usize },
}

/// A presentation of one diagram group, keeping the raw relation
/// count (antisymmetry, expansion and rerooting columns, per rooted
/// generator) from before deduplication.
#[derive(Clone)]
pub struct DiagramPresentation {
    presentation: Arc<Presentation>,
    raw_relation_count: usize,
}

impl DiagramPresentation {
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

/// All rootings of `shape` at its own leaves, left to right, given
/// the subtree `above` hanging off the far side of its top edge. At
/// every trivalent vertex the cyclic order of the three adjacent
/// subtrees is preserved when children are re-read relative to the
/// new root direction.
fn reroot_leaves(shape: &TreeNode, above: TreeNode) -> Vec<RootedTree> {
    match shape {
        TreeNode::Leaf(label) => vec![RootedTree::rooted(*label, above)],
        TreeNode::Pair(p, q) => {
            let mut out = reroot_leaves(p, TreeNode::pair((**q).clone(), above.clone()));
            out.extend(reroot_leaves(q, TreeNode::pair(above, (**p).clone())));
            out
        }
    }
}

/// The rootings of `t` at each of its non-root leaves, in planar left
/// to right order; entry `w` designates leaf `w` as the new root and
/// turns the old root label into a leaf.
pub fn rerootings(t: &RootedTree) -> Result<Vec<RootedTree>, TreeDiagError> {
    let label = t.root_label.ok_or(TreeDiagError::UnrootedTree)?;
    Ok(reroot_leaves(&t.shape, TreeNode::Leaf(label)))
}

/// Reroots `t` at its `w`-th leaf (0-based, planar order, excluding
/// the current root). The underlying unrooted labeled tree is
/// unchanged.
pub fn reroot(t: &RootedTree, w: usize) -> Result<RootedTree, TreeDiagError> {
    let mut all = rerootings(t)?;
    let leaves = all.len();
    if w >= leaves {
        return Err(TreeDiagError::LeafOutOfRange { index: w, leaves });
    }
    Ok(all.swap_remove(w))
}

/// Canonical certificate of the underlying unrooted labeled tree: the
/// least code over every rooting of `t`, including `t` itself.
/// Rerooting leaves it fixed.
pub fn unrooted_certificate(t: &RootedTree) -> Result<String, TreeDiagError> {
    let codes: Vec<String> = std::iter::once(t.clone())
        .chain(rerootings(t)?)
        .map(|rt| rt.code())
        .collect();
    Ok(codes
        .into_iter()
        .min_by(|a, b| codes::version_cmp(a, b))
        .expect("a tree has at least one rooting"))
}

fn at_memo() -> &'static Mutex<BTreeMap<(u32, u32), DiagramPresentation>> {
    static MEMO: OnceLock<Mutex<BTreeMap<(u32, u32), DiagramPresentation>>> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// The order `k` diagram group over rank `n` coefficients, presented
/// on all root-labeled trees with `k+1` non-root leaves, memoized per
/// process.
pub fn at_presentation(n: u32, k: u32) -> DiagramPresentation {
    if let Some(hit) = at_memo().lock().expect("memo lock").get(&(n, k)) {
        return hit.clone();
    }
    let built = build_at(n, k);
    at_memo()
        .lock()
        .expect("memo lock")
        .entry((n, k))
        .or_insert(built)
        .clone()
}

fn build_at(n: u32, k: u32) -> DiagramPresentation {
    let mut pairs: Vec<(String, RootedTree)> = Vec::new();
    for shape in enumerate_trees(n, k + 1) {
        for r in 1..=n {
            let t = RootedTree::rooted(r, shape.clone());
            pairs.push((t.code(), t));
        }
    }
    pairs.sort_by(|a, b| codes::version_cmp(&a.0, &b.0));
    let gens: Vec<String> = pairs.iter().map(|(c, _)| c.clone()).collect();
    let find = |t: &RootedTree| -> usize {
        let code = t.code();
        gens.binary_search_by(|g| codes::version_cmp(g, &code))
            .expect("rewritten diagram is again a generator")
    };

    let mut dedup = ColumnDedup::new(gens.len());
    for (j, (_, t)) in pairs.iter().enumerate() {
        let root = t.root_label.expect("generators carry root labels");
        for swapped in t.shape.vertex_swaps() {
            dedup.push(vec![(j, 1), (find(&RootedTree::rooted(root, swapped)), 1)]);
        }
        for rel in t.shape.jacobi_relations() {
            dedup.push(
                rel.iter()
                    .map(|(u, c)| (find(&RootedTree::rooted(root, u.clone())), *c))
                    .collect(),
            );
        }
        for rt in reroot_leaves(&t.shape, TreeNode::Leaf(root)) {
            dedup.push(vec![(find(&rt), 1), (j, -1)]);
        }
    }
    let (relations, raw) = dedup.finish();
    let presentation = Arc::new(
        Presentation::new(gens, relations).expect("diagram codes are sorted and distinct"),
    );
    DiagramPresentation {
        presentation,
        raw_relation_count: raw,
    }
}

/// The tensor-side presentation sharing its generator codes with
/// [`at_presentation`], `H (x) L'_{k+1}` on root-labeled tree codes.
fn tensor_side(n: u32, k: u32) -> Arc<Presentation> {
    Arc::new(tensor_with_free(
        lprime_presentation(n, k + 1).presentation(),
        n as usize,
    ))
}

/// The rooting sum: each diagram generator maps to the sum of its
/// `k+2` rootings read as tensors, itself included. The sum is the
/// same for every rooting of one diagram, so rerooting relations map
/// to zero on the nose, and antisymmetry and expansion columns map to
/// relations; the lift is checked to be induced.
pub fn etaprime_hom(n: u32, k: u32) -> PresentedHom {
    let source = at_presentation(n, k).presentation().clone();
    let target = tensor_side(n, k);
    let mut entries = Vec::new();
    for (j, code) in source.generators().iter().enumerate() {
        let t = RootedTree::parse(code).expect("generator codes parse");
        let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
        for term in std::iter::once(t.clone()).chain(rerootings(&t).expect("generators rooted")) {
            let idx = target
                .generator_index(&term.code())
                .expect("rooting is a tensor generator");
            *acc.entry(idx).or_default() += 1;
        }
        entries.extend(acc.into_iter().map(|(r, v)| (r, j, v)));
    }
    let lift = Matrix::from_entries(target.generator_count(), source.generator_count(), entries)
        .expect("rooting entries in range");
    let hom = PresentedHom::new(source, target, lift).expect("rooting lift shape");
    assert!(hom.is_induced(), "rooting sum must respect the relations");
    hom
}

/// The forgetful map from `H (x) L'_{k+1}` onto the diagram group:
/// the tensor generator `i@T` is the same code read as a rooted
/// diagram, so the lift is the identity matrix. Antisymmetry and
/// expansion relations are relations on both sides.
pub fn rho_hom(n: u32, k: u32) -> PresentedHom {
    let source = tensor_side(n, k);
    let target = at_presentation(n, k).presentation().clone();
    debug_assert_eq!(
        source.generators(),
        target.generators(),
        "tensor and diagram covers share codes"
    );
    let lift = Matrix::identity(source.generator_count());
    let hom = PresentedHom::new(source, target, lift).expect("identity lift shape");
    assert!(hom.is_induced(), "forgetting the root respects relations");
    hom
}

/// The rooting sum followed by the tensored comparison map onto the
/// Lie side, landing in the free group `H (x) L_{k+1}` in Lyndon
/// coordinates. Its image lies in the integral kernel lattice of the
/// Lie bracket map.
pub fn eta_hom(n: u32, k: u32) -> PresentedHom {
    let tg = tensor_hom(&gamma_hom(n, k + 1), n as usize);
    etaprime_hom(n, k)
        .then(&tg)
        .expect("rooting sum lands in the tensored quasi-Lie cover")
}

/// Structure of the kernel of the rooting sum. Every invariant
/// factor divides `k+2`; for odd `k` the kernel has odd order, and
/// for even `k` it is the whole torsion subgroup of the diagram
/// group.
pub fn ker_etaprime(n: u32, k: u32) -> AbelianStructure {
    let (pres, _) = etaprime_hom(n, k)
        .hom_kernel()
        .expect("rooting sum is induced");
    pres.group_structure().clone()
}

/// First diagram generator on which forgetting the root after the
/// rooting sum differs from multiplication by `k+2`, or `None` when
/// the identity holds: each column of the composite minus `k+2` times
/// the matching unit vector must lie in the diagram relation lattice.
pub fn rho_etaprime_offender(n: u32, k: u32) -> Option<String> {
    let composite = etaprime_hom(n, k)
        .then(&rho_hom(n, k))
        .expect("middle presentations agree");
    let at = composite.source().clone();
    let scale = BigInt::from(k + 2);
    (0..at.generator_count())
        .find(|&j| {
            let mut diff = composite.lift().col_vec(j);
            diff[j] -= &scale;
            !at.class_is_zero(&diff)
        })
        .map(|j| at.generators()[j].clone())
}

/// Whether forgetting the root after the rooting sum is
/// multiplication by `k+2` on every diagram class.
pub fn rho_etaprime_is_multiplication(n: u32, k: u32) -> bool {
    rho_etaprime_offender(n, k).is_none()
}

/// First diagram generator whose rooting sum escapes the kernel of
/// the quasi-Lie bracket map, or `None` when the composite of the two
/// maps is zero.
pub fn bracket_kernel_offender(n: u32, k: u32) -> Option<String> {
    let composite = etaprime_hom(n, k)
        .then(&crate::quasilie::betaprime_hom(n, k))
        .expect("middle presentations agree");
    let source = composite.source().clone();
    let target = composite.target().clone();
    (0..composite.lift().cols())
        .find(|&j| !target.class_is_zero(&composite.lift().col_vec(j)))
        .map(|j| source.generators()[j].clone())
}

/// Whether the rooting sum lands inside the kernel of the quasi-Lie
/// bracket map.
pub fn image_lies_in_bracket_kernel(n: u32, k: u32) -> bool {
    bracket_kernel_offender(n, k).is_none()
}

/// Terms of the partial inverse to the bracket map on one bracket
/// generator `(A,B)`: the rootings of the underlying diagram at the
/// leaves of `A` only, after smoothing the old root edge away.
pub(crate) fn tau_terms(t: &TreeNode) -> Vec<RootedTree> {
    match t {
        TreeNode::Leaf(_) => panic!("bracket generators of degree two and up split at the top"),
        TreeNode::Pair(a, b) => reroot_leaves(a, (**b).clone()),
    }
}

/// Outcome of building the partial inverse to the bracket map in one
/// degree and checking its two defining properties.
#[derive(Clone, Debug)]
pub struct TauReport {
    pub n: u32,
    pub k: u32,
    /// Every quasi-Lie relation maps into the lattice spanned by the
    /// rooting-sum image and the tensor-side relations.
    pub well_defined: bool,
    /// Rendered relation witnessing failure, when not well defined.
    pub offending_relation: Option<String>,
    /// Composing with the bracket map gives the identity on the free
    /// cover, i.e. the canonical projection after quotienting.
    pub projects: bool,
    /// The bracket-map kernel equals the rooting-sum image.
    pub kernel_matches_image: bool,
}

impl TauReport {
    pub fn passed(&self) -> bool {
        self.well_defined && self.projects && self.kernel_matches_image
    }
}

/// Builds the partial inverse `L'_{k+2} -> H (x) L'_{k+1}` modulo the
/// rooting-sum image and verifies it: well-definedness relation by
/// relation (reporting the first offender), the projection property
/// against the bracket map, and the resulting equality of the bracket
/// kernel with the rooting-sum image.
pub fn tau_check(n: u32, k: u32) -> Result<TauReport, TreeDiagError> {
    let ep = etaprime_hom(n, k);
    let bp = crate::quasilie::betaprime_hom(n, k);
    let tensor = ep.target().clone();
    let source = lprime_presentation(n, k + 2).presentation().clone();

    let mut entries = Vec::new();
    for (j, code) in source.generators().iter().enumerate() {
        let t = TreeNode::parse(code).expect("generator codes parse");
        let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
        for term in tau_terms(&t) {
            let idx = tensor
                .generator_index(&term.code())
                .expect("rooting is a tensor generator");
            *acc.entry(idx).or_default() += 1;
        }
        entries.extend(acc.into_iter().map(|(r, v)| (r, j, v)));
    }
    let tau = Matrix::from_entries(tensor.generator_count(), source.generator_count(), entries)
        .expect("splitting entries in range");

    let projects = tau.mul(bp.lift()) == Matrix::identity(tensor.generator_count());

    let modulus = Matrix::hstack(&[ep.lift(), tensor.relations()]);
    let ech = col_echelon(modulus.rows(), modulus.into_cols(), Track::None);
    let mut well_defined = true;
    let mut offending_relation = None;
    for j in 0..source.relations().cols() {
        let image = tau.mul_vec(&source.relations().col_vec(j));
        if !ech.contains(&image) {
            well_defined = false;
            offending_relation = Some(render_relation(&source, j));
            break;
        }
    }

    let kernel_matches_image = check_exact(&ep, &bp)?;
    Ok(TauReport {
        n,
        k,
        well_defined,
        offending_relation,
        projects,
        kernel_matches_image,
    })
}

/// One relation column as a signed sum of generator codes.
fn render_relation(p: &Presentation, col: usize) -> String {
    crate::presented::render_combination(p.generators(), p.relations().col_entries(col))
}
