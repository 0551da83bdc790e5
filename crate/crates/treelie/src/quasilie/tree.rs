//! Labeled planar binary trees and their canonical codes.
//!
//! One combinatorial language covers every graded object here: a
//! planar binary tree whose leaves carry basis labels `1..=n`. A tree
//! with `k` leaves and no root label denotes a `k`-fold bracket; the
//! same shape with a labeled root denotes the elementary tensor
//! `e_i (x) bracket`, and doubles as a rooted picture of a
//! unitrivalent tree diagram. Codes follow the grammar
//! `LEAF := digit+`, `TREE := LEAF | '(' TREE ',' TREE ')'`, with an
//! optional `LEAF '@'` prefix naming the root, so `(1,(2,3))` is a
//! triple bracket and `4@(1,(2,3))` the corresponding rooted diagram.
//!
//! Codes are canonical: parsing and printing are mutually inverse,
//! and distinct trees have distinct codes. Rewriting helpers produce
//! the swapped and Jacobi-rewritten trees that relation matrices are
//! assembled from; they return whole trees, never loose subtrees, so
//! callers only ever handle generator codes.

use crate::codes;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeCodeError {
    #[error("unexpected character {found:?} at offset {at}")]
    Unexpected { at: usize, found: char },
    #[error("code ends before the tree is complete")]
    Truncated,
    #[error("trailing input after offset {at}")]
    Trailing { at: usize },
    #[error("bad leaf label at offset {at}: labels are positive, without leading zeros")]
    BadLabel { at: usize },
}

/// A planar binary tree with leaf labels. Planar means ordered: the
/// two children of a vertex are distinguishable, and antisymmetry is
/// a relation imposed later, not an identification made here.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum TreeNode {
    Leaf(u32),
    Pair(Box<TreeNode>, Box<TreeNode>),
}

impl TreeNode {
    pub fn pair(left: TreeNode, right: TreeNode) -> TreeNode {
        TreeNode::Pair(Box::new(left), Box::new(right))
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            TreeNode::Leaf(_) => 1,
            TreeNode::Pair(a, b) => a.leaf_count() + b.leaf_count(),
        }
    }

    /// Leaf labels in left-to-right planar order.
    pub fn leaf_labels(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.leaf_count());
        self.push_labels(&mut out);
        out
    }

    fn push_labels(&self, out: &mut Vec<u32>) {
        match self {
            TreeNode::Leaf(l) => out.push(*l),
            TreeNode::Pair(a, b) => {
                a.push_labels(out);
                b.push_labels(out);
            }
        }
    }

    pub fn code(&self) -> String {
        let mut s = String::new();
        self.write_code(&mut s);
        s
    }

    fn write_code(&self, out: &mut String) {
        match self {
            TreeNode::Leaf(l) => out.push_str(&l.to_string()),
            TreeNode::Pair(a, b) => {
                out.push('(');
                a.write_code(out);
                out.push(',');
                b.write_code(out);
                out.push(')');
            }
        }
    }

    pub fn parse(code: &str) -> Result<TreeNode, TreeCodeError> {
        let bytes = code.as_bytes();
        let (tree, used) = parse_node(bytes, 0)?;
        if used != bytes.len() {
            return Err(TreeCodeError::Trailing { at: used });
        }
        Ok(tree)
    }

    /// The trees obtained by swapping the children of one internal
    /// vertex, one tree per vertex. Together with the identity
    /// coefficient these are the antisymmetry relation columns.
    pub(crate) fn vertex_swaps(&self) -> Vec<TreeNode> {
        match self {
            TreeNode::Leaf(_) => Vec::new(),
            TreeNode::Pair(a, b) => {
                let mut out = vec![TreeNode::pair((**b).clone(), (**a).clone())];
                for a2 in a.vertex_swaps() {
                    out.push(TreeNode::pair(a2, (**b).clone()));
                }
                for b2 in b.vertex_swaps() {
                    out.push(TreeNode::pair((**a).clone(), b2));
                }
                out
            }
        }
    }

    /// One Jacobi rewrite per internal edge, as a full signed
    /// relation: the identity `[[a,b],c] = [a,[b,c]] - [b,[a,c]]`
    /// applied at the parent vertex of the edge, read off the edge's
    /// side. Each entry lists `(tree, coefficient)` terms summing to
    /// zero, with the original tree carrying `+1`.
    pub(crate) fn jacobi_relations(&self) -> Vec<Vec<(TreeNode, i64)>> {
        match self {
            TreeNode::Leaf(_) => Vec::new(),
            TreeNode::Pair(a, b) => {
                let mut out = Vec::new();
                if let TreeNode::Pair(a1, a2) = &**a {
                    out.push(vec![
                        (self.clone(), 1),
                        (
                            TreeNode::pair((**a1).clone(), TreeNode::pair((**a2).clone(), (**b).clone())),
                            -1,
                        ),
                        (
                            TreeNode::pair((**a2).clone(), TreeNode::pair((**a1).clone(), (**b).clone())),
                            1,
                        ),
                    ]);
                }
                if let TreeNode::Pair(b1, b2) = &**b {
                    out.push(vec![
                        (self.clone(), 1),
                        (
                            TreeNode::pair(TreeNode::pair((**a).clone(), (**b1).clone()), (**b2).clone()),
                            -1,
                        ),
                        (
                            TreeNode::pair((**b1).clone(), TreeNode::pair((**a).clone(), (**b2).clone())),
                            -1,
                        ),
                    ]);
                }
                for rel in a.jacobi_relations() {
                    out.push(
                        rel.into_iter()
                            .map(|(t, c)| (TreeNode::pair(t, (**b).clone()), c))
                            .collect(),
                    );
                }
                for rel in b.jacobi_relations() {
                    out.push(
                        rel.into_iter()
                            .map(|(t, c)| (TreeNode::pair((**a).clone(), t), c))
                            .collect(),
                    );
                }
                out
            }
        }
    }
}

impl fmt::Debug for TreeNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.code())
    }
}

impl fmt::Display for TreeNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.code())
    }
}

/// A tree together with an optional root label. Without the label it
/// stands for a bracket; with it, for a rooted tree diagram, equally
/// readable as the tensor `e_root (x) bracket`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RootedTree {
    pub root_label: Option<u32>,
    pub shape: TreeNode,
}

impl RootedTree {
    pub fn unrooted(shape: TreeNode) -> RootedTree {
        RootedTree {
            root_label: None,
            shape,
        }
    }

    pub fn rooted(root_label: u32, shape: TreeNode) -> RootedTree {
        RootedTree {
            root_label: Some(root_label),
            shape,
        }
    }

    pub fn code(&self) -> String {
        match self.root_label {
            Some(r) => format!("{r}@{}", self.shape.code()),
            None => self.shape.code(),
        }
    }

    pub fn parse(code: &str) -> Result<RootedTree, TreeCodeError> {
        match code.find('@') {
            None => Ok(RootedTree::unrooted(TreeNode::parse(code)?)),
            Some(pos) => {
                let (label, used) = parse_label(code.as_bytes(), 0)?;
                if used != pos {
                    return Err(TreeCodeError::Unexpected {
                        at: used,
                        found: code[used..].chars().next().unwrap_or('@'),
                    });
                }
                let shape = TreeNode::parse(&code[pos + 1..]).map_err(|e| shift(e, pos + 1))?;
                Ok(RootedTree::rooted(label, shape))
            }
        }
    }

    /// Leaves below the root, excluding the root itself.
    pub fn leaf_count(&self) -> usize {
        self.shape.leaf_count()
    }
}

impl fmt::Debug for RootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.code())
    }
}

impl fmt::Display for RootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.code())
    }
}

fn shift(e: TreeCodeError, by: usize) -> TreeCodeError {
    match e {
        TreeCodeError::Unexpected { at, found } => TreeCodeError::Unexpected { at: at + by, found },
        TreeCodeError::Trailing { at } => TreeCodeError::Trailing { at: at + by },
        TreeCodeError::BadLabel { at } => TreeCodeError::BadLabel { at: at + by },
        TreeCodeError::Truncated => TreeCodeError::Truncated,
    }
}

fn parse_label(bytes: &[u8], at: usize) -> Result<(u32, usize), TreeCodeError> {
    let mut end = at;
    while end < bytes.len() && bytes[end].is_ascii_digit() {
        end += 1;
    }
    if end == at {
        return match bytes.get(at) {
            None => Err(TreeCodeError::Truncated),
            Some(&b) => Err(TreeCodeError::Unexpected {
                at,
                found: b as char,
            }),
        };
    }
    if bytes[at] == b'0' {
        return Err(TreeCodeError::BadLabel { at });
    }
    let text = std::str::from_utf8(&bytes[at..end]).expect("digits are ascii");
    match text.parse::<u32>() {
        Ok(label) => Ok((label, end)),
        Err(_) => Err(TreeCodeError::BadLabel { at }),
    }
}

fn parse_node(bytes: &[u8], at: usize) -> Result<(TreeNode, usize), TreeCodeError> {
    match bytes.get(at) {
        None => Err(TreeCodeError::Truncated),
        Some(b'(') => {
            let (left, mid) = parse_node(bytes, at + 1)?;
            match bytes.get(mid) {
                Some(b',') => {}
                None => return Err(TreeCodeError::Truncated),
                Some(&b) => {
                    return Err(TreeCodeError::Unexpected {
                        at: mid,
                        found: b as char,
                    })
                }
            }
            let (right, end) = parse_node(bytes, mid + 1)?;
            match bytes.get(end) {
                Some(b')') => Ok((TreeNode::pair(left, right), end + 1)),
                None => Err(TreeCodeError::Truncated),
                Some(&b) => Err(TreeCodeError::Unexpected {
                    at: end,
                    found: b as char,
                }),
            }
        }
        Some(_) => {
            let (label, end) = parse_label(bytes, at)?;
            Ok((TreeNode::Leaf(label), end))
        }
    }
}

/// All shapes with `k` leaves; labels are placeholders.
fn shapes(k: usize) -> Vec<TreeNode> {
    if k == 1 {
        return vec![TreeNode::Leaf(1)];
    }
    let mut out = Vec::new();
    for left in 1..k {
        for a in shapes(left) {
            for b in shapes(k - left) {
                out.push(TreeNode::pair(a.clone(), b));
            }
        }
    }
    out
}

fn assign_labels(shape: &TreeNode, labels: &[u32], next: &mut usize) -> TreeNode {
    match shape {
        TreeNode::Leaf(_) => {
            let l = labels[*next];
            *next += 1;
            TreeNode::Leaf(l)
        }
        TreeNode::Pair(a, b) => {
            let left = assign_labels(a, labels, next);
            let right = assign_labels(b, labels, next);
            TreeNode::pair(left, right)
        }
    }
}

/// Every labeled tree with `k` leaves over labels `1..=n`, as raw
/// trees in generation order. The public, sorted view is
/// [`enumerate_rooted_trees`].
pub(crate) fn enumerate_trees(n: u32, k: u32) -> Vec<TreeNode> {
    assert!(k >= 1, "trees have at least one leaf");
    if n == 0 {
        return Vec::new();
    }
    let k = k as usize;
    let mut out = Vec::new();
    for shape in shapes(k) {
        let mut labels = vec![1u32; k];
        loop {
            let mut next = 0;
            out.push(assign_labels(&shape, &labels, &mut next));
            // Odometer over label vectors.
            let mut pos = k;
            while pos > 0 {
                if labels[pos - 1] < n {
                    labels[pos - 1] += 1;
                    break;
                }
                labels[pos - 1] = 1;
                pos -= 1;
            }
            if pos == 0 {
                break;
            }
        }
    }
    out
}

/// Canonical codes of every tree with `k` leaves labeled from
/// `1..=n`, sorted; with `root_labeled`, every root label is
/// prepended as well. The counts are `Catalan(k-1) * n^k`, times `n`
/// when roots are labeled.
pub fn enumerate_rooted_trees(n: u32, k: u32, root_labeled: bool) -> Vec<String> {
    let trees = enumerate_trees(n, k);
    let mut codes: Vec<String> = if root_labeled {
        (1..=n)
            .flat_map(|r| {
                trees
                    .iter()
                    .map(move |t| RootedTree::rooted(r, t.clone()).code())
            })
            .collect()
    } else {
        trees.iter().map(|t| t.code()).collect()
    };
    codes.sort_by(|a, b| codes::version_cmp(a, b));
    debug_assert!(codes::is_sorted_strict(&codes), "tree codes collide");
    codes
}

/// Catalan number, exact in u128 for every size reachable here.
pub(crate) fn catalan(m: u32) -> u128 {
    let mut c: u128 = 1;
    for i in 0..m as u128 {
        c = c * 2 * (2 * i + 1) / (i + 2);
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_round_trip() {
        for code in ["1", "(1,2)", "(1,(2,3))", "((1,2),(3,4))", "12", "(10,2)"] {
            let t = TreeNode::parse(code).unwrap();
            assert_eq!(t.code(), code);
        }
        for code in ["4@(1,(2,3))", "1@1", "7@((1,1),2)"] {
            let t = RootedTree::parse(code).unwrap();
            assert_eq!(t.code(), code);
        }
    }

    #[test]
    fn rejected_codes() {
        use TreeCodeError::*;
        assert_eq!(TreeNode::parse(""), Err(Truncated));
        assert_eq!(TreeNode::parse("(1,2"), Err(Truncated));
        assert_eq!(TreeNode::parse("(1 2)"), Err(Unexpected { at: 2, found: ' ' }));
        assert_eq!(TreeNode::parse("(1,2))"), Err(Trailing { at: 5 }));
        assert_eq!(TreeNode::parse("0"), Err(BadLabel { at: 0 }));
        assert_eq!(TreeNode::parse("(01,2)"), Err(BadLabel { at: 1 }));
        assert_eq!(RootedTree::parse("@1"), Err(Unexpected { at: 0, found: '@' }));
        assert_eq!(RootedTree::parse("2@"), Err(Truncated));
        assert_eq!(RootedTree::parse("2@3@4"), Err(Trailing { at: 3 }));
    }

    #[test]
    fn leaf_bookkeeping() {
        let t = TreeNode::parse("((1,2),(3,1))").unwrap();
        assert_eq!(t.leaf_count(), 4);
        assert_eq!(t.leaf_labels(), vec![1, 2, 3, 1]);
        let r = RootedTree::parse("5@((1,2),(3,1))").unwrap();
        assert_eq!(r.leaf_count(), 4);
        assert_eq!(r.root_label, Some(5));
    }

    #[test]
    fn swaps_cover_each_vertex_once() {
        let t = TreeNode::parse("((1,2),3)").unwrap();
        let swaps: Vec<String> = t.vertex_swaps().iter().map(|s| s.code()).collect();
        assert_eq!(swaps, vec!["(3,(1,2))", "((2,1),3)"]);
        assert!(TreeNode::Leaf(1).vertex_swaps().is_empty());
    }

    #[test]
    fn jacobi_relations_fix_both_orientations() {
        // Left-child edge: ((1,2),3) = (1,(2,3)) - (2,(1,3)).
        let left = TreeNode::parse("((1,2),3)").unwrap();
        let rels = left.jacobi_relations();
        assert_eq!(rels.len(), 1);
        let terms: Vec<(String, i64)> = rels[0].iter().map(|(t, c)| (t.code(), *c)).collect();
        assert_eq!(
            terms,
            vec![
                ("((1,2),3)".to_string(), 1),
                ("(1,(2,3))".to_string(), -1),
                ("(2,(1,3))".to_string(), 1),
            ]
        );

        // Right-child edge: (1,(2,3)) = ((1,2),3) + (2,(1,3)).
        let right = TreeNode::parse("(1,(2,3))").unwrap();
        let rels = right.jacobi_relations();
        assert_eq!(rels.len(), 1);
        let terms: Vec<(String, i64)> = rels[0].iter().map(|(t, c)| (t.code(), *c)).collect();
        assert_eq!(
            terms,
            vec![
                ("(1,(2,3))".to_string(), 1),
                ("((1,2),3)".to_string(), -1),
                ("(2,(1,3))".to_string(), -1),
            ]
        );
    }

    #[test]
    fn jacobi_count_is_internal_edges() {
        // A tree with k leaves has k-1 internal vertices and k-2
        // internal edges.
        for code in ["(1,2)", "((1,2),3)", "((1,2),(3,4))", "(((1,2),3),4)"] {
            let t = TreeNode::parse(code).unwrap();
            let k = t.leaf_count();
            assert_eq!(t.vertex_swaps().len(), k - 1, "vertices of {code}");
            assert_eq!(t.jacobi_relations().len(), k - 2, "edges of {code}");
        }
    }

    #[test]
    fn enumeration_counts_and_examples() {
        assert_eq!(enumerate_rooted_trees(1, 2, false), vec!["(1,1)"]);
        assert_eq!(enumerate_rooted_trees(2, 2, false).len(), 4);
        assert_eq!(enumerate_rooted_trees(2, 3, false).len(), 16);
        assert_eq!(enumerate_rooted_trees(1, 1, true), vec!["1@1"]);
        for (n, k) in [(1u32, 4u32), (2, 3), (3, 2), (2, 5)] {
            let plain = enumerate_rooted_trees(n, k, false);
            let expect = catalan(k - 1) * (n as u128).pow(k);
            assert_eq!(plain.len() as u128, expect, "count at ({n},{k})");
            let rooted = enumerate_rooted_trees(n, k, true);
            assert_eq!(rooted.len() as u128, expect * n as u128);
        }
        assert!(enumerate_rooted_trees(0, 3, false).is_empty());
    }

    #[test]
    fn catalan_values() {
        let values: Vec<u128> = (0..8).map(catalan).collect();
        assert_eq!(values, vec![1, 1, 2, 5, 14, 42, 132, 429]);
    }
}
