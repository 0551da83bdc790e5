//! Finitely presented abelian groups and the maps between them.
//!
//! A [`Presentation`] is a sorted list of generator codes plus a
//! relation matrix whose columns span the relation lattice inside the
//! free cover `Z^generators`. A [`PresentedHom`] carries a lift
//! matrix between free covers; it induces a map of quotients exactly
//! when every source relation lands in the target relation lattice,
//! and all kernel/cokernel/exactness questions reduce to lattice
//! computations in the covers. Kernels of maps between non-free
//! groups go through preimage lattices, which avoids choosing any
//! splitting.
//!
//! Generator codes are opaque strings ordered by
//! [`codes::version_cmp`](crate::codes::version_cmp), so
//! presentations built by different modules compose without
//! re-indexing ambiguity.

mod io;
mod reduce;

pub use io::{from_zpres_str, read_zpres, to_zpres_string, write_zpres, ZpresError};

use crate::codes;
use crate::zlinalg::{
    cokernel_structure, col_echelon, AbelianStructure, Echelon, Matrix, Track,
};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::sync::{Arc, OnceLock};
use thiserror::Error;

/// A sparse column over generator codes as a signed sum, e.g.
/// `(1,2) - 2 (2,2)`; the zero column renders as `0`.
pub(crate) fn render_combination(gens: &[String], entries: &[(usize, BigInt)]) -> String {
    let mut out = String::new();
    for (i, v) in entries {
        let mag = v.abs();
        if out.is_empty() {
            if v.is_negative() {
                out.push_str("- ");
            }
        } else {
            out.push_str(if v.is_negative() { " - " } else { " + " });
        }
        if !mag.is_one() {
            out.push_str(&format!("{mag} "));
        }
        out.push_str(&gens[*i]);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PresentError {
    #[error("generator codes must be nonempty, sorted, and distinct (offender: {0:?})")]
    BadGenerators(String),
    #[error("relation matrix has {rows} rows but the presentation has {gens} generators")]
    RelationShape { rows: usize, gens: usize },
    #[error(
        "lift shape {lift_rows} x {lift_cols} does not match target {target_gens} x source {source_gens} generators"
    )]
    LiftShape {
        lift_rows: usize,
        lift_cols: usize,
        target_gens: usize,
        source_gens: usize,
    },
    #[error("source relation {index} maps outside the target relation lattice")]
    IllDefined { index: usize },
    #[error("middle objects differ: target of the first hom is not the source of the second")]
    MiddleMismatch,
}

/// A finitely presented abelian group: free cover on `generators`,
/// modulo the column lattice of `relations`.
pub struct Presentation {
    generators: Vec<String>,
    relations: Matrix,
    rel_echelon: OnceLock<Echelon>,
    structure: OnceLock<AbelianStructure>,
}

impl Presentation {
    pub fn new(generators: Vec<String>, relations: Matrix) -> Result<Self, PresentError> {
        if let Some(bad) = first_unsorted(&generators) {
            return Err(PresentError::BadGenerators(bad));
        }
        if relations.rows() != generators.len() {
            return Err(PresentError::RelationShape {
                rows: relations.rows(),
                gens: generators.len(),
            });
        }
        Ok(Presentation {
            generators,
            relations,
            rel_echelon: OnceLock::new(),
            structure: OnceLock::new(),
        })
    }

    /// Free group on the given codes.
    pub fn free(generators: Vec<String>) -> Result<Self, PresentError> {
        let n = generators.len();
        Presentation::new(generators, Matrix::zero(n, 0))
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    /// Index of a generator code, by binary search in version order.
    pub fn generator_index(&self, code: &str) -> Option<usize> {
        self.generators
            .binary_search_by(|g| codes::version_cmp(g, code))
            .ok()
    }

    pub fn relations(&self) -> &Matrix {
        &self.relations
    }

    /// Isomorphism type of the presented group.
    pub fn group_structure(&self) -> &AbelianStructure {
        self.structure
            .get_or_init(|| cokernel_structure(&self.relations))
    }

    /// True when the class of `v` (a vector over the generators) is
    /// zero, i.e. `v` lies in the relation lattice.
    pub fn class_is_zero(&self, v: &[BigInt]) -> bool {
        self.relation_echelon().contains(v)
    }

    pub(crate) fn relation_echelon(&self) -> &Echelon {
        self.rel_echelon.get_or_init(|| {
            col_echelon(
                self.relations.rows(),
                self.relations.col_slices().to_vec(),
                Track::None,
            )
        })
    }
}

impl PartialEq for Presentation {
    fn eq(&self, other: &Self) -> bool {
        self.generators == other.generators && self.relations == other.relations
    }
}

impl Eq for Presentation {}

impl fmt::Debug for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Presentation({} generators, {} relations)",
            self.generators.len(),
            self.relations.cols()
        )
    }
}

fn first_unsorted(gens: &[String]) -> Option<String> {
    for g in gens {
        if g.is_empty() || g.contains(char::is_whitespace) {
            return Some(g.clone());
        }
    }
    for w in gens.windows(2) {
        if codes::version_cmp(&w[0], &w[1]) != std::cmp::Ordering::Less {
            return Some(w[1].clone());
        }
    }
    None
}

/// A homomorphism given on free covers. `lift` has one column per
/// source generator, expressing its image over the target generators.
#[derive(Clone)]
pub struct PresentedHom {
    source: Arc<Presentation>,
    target: Arc<Presentation>,
    lift: Matrix,
    induced: OnceLock<Option<usize>>,
}

impl PresentedHom {
    pub fn new(
        source: Arc<Presentation>,
        target: Arc<Presentation>,
        lift: Matrix,
    ) -> Result<Self, PresentError> {
        if lift.rows() != target.generator_count() || lift.cols() != source.generator_count() {
            return Err(PresentError::LiftShape {
                lift_rows: lift.rows(),
                lift_cols: lift.cols(),
                target_gens: target.generator_count(),
                source_gens: source.generator_count(),
            });
        }
        Ok(PresentedHom {
            source,
            target,
            lift,
            induced: OnceLock::new(),
        })
    }

    /// Identity on `p`.
    pub fn identity(p: Arc<Presentation>) -> Self {
        let lift = Matrix::identity(p.generator_count());
        PresentedHom::new(p.clone(), p, lift).expect("identity lift fits")
    }

    pub fn source(&self) -> &Arc<Presentation> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Presentation> {
        &self.target
    }

    pub fn lift(&self) -> &Matrix {
        &self.lift
    }

    /// Index of the first source relation whose image leaves the
    /// target relation lattice, cached.
    fn induced_failure(&self) -> Option<usize> {
        *self.induced.get_or_init(|| {
            let images = self.lift.mul(self.source.relations());
            let ech = self.target.relation_echelon();
            (0..images.cols()).find(|&j| !ech.contains(&images.col_vec(j)))
        })
    }

    /// True iff the lift descends to a homomorphism of the presented
    /// groups: every source relation maps into the target relation
    /// lattice.
    pub fn is_induced(&self) -> bool {
        self.induced_failure().is_none()
    }

    fn require_induced(&self) -> Result<(), PresentError> {
        match self.induced_failure() {
            None => Ok(()),
            Some(index) => Err(PresentError::IllDefined { index }),
        }
    }

    /// Composition `g . self` (apply `self` first). The middle
    /// presentations must agree.
    pub fn then(&self, g: &PresentedHom) -> Result<PresentedHom, PresentError> {
        if *self.target != *g.source {
            return Err(PresentError::MiddleMismatch);
        }
        PresentedHom::new(
            self.source.clone(),
            g.target.clone(),
            g.lift.mul(&self.lift),
        )
    }

    /// Kernel of the induced map, as a reduced presentation together
    /// with the matrix expressing its generators in source
    /// generators.
    ///
    /// The kernel is the preimage lattice
    /// `{x : lift * x in relationLattice(target)}` modulo source
    /// relations; the preimage is read off the kernel of the block
    /// matrix `[lift | targetRelationBasis]` restricted to the lift
    /// block.
    pub fn hom_kernel(&self) -> Result<(Arc<Presentation>, Matrix), PresentError> {
        self.require_induced()?;
        let src_gens = self.source.generator_count();
        let hmat = self.target.relation_echelon().basis_matrix();
        let stack = Matrix::hstack(&[&self.lift, &hmat]);
        let ech = col_echelon(stack.rows(), stack.into_cols(), Track::Cols(src_gens));
        let preimage: Vec<_> = ech
            .kernel_trans
            .into_iter()
            .filter(|c| !c.is_empty())
            .collect();
        let pre_ech = col_echelon(src_gens, preimage, Track::None);
        let pmat = pre_ech.basis_matrix();

        // Source relations lie inside the preimage; re-express them
        // over its basis to present the kernel.
        let rels = self.source.relations();
        let mut z_entries = Vec::new();
        for j in 0..rels.cols() {
            let coeffs = pre_ech
                .solve(&rels.col_vec(j))
                .expect("source relation escaped its preimage lattice");
            for (i, c) in coeffs.into_iter().enumerate() {
                if !c.is_zero() {
                    z_entries.push((i, j, c));
                }
            }
        }
        let z = Matrix::from_entries(pmat.cols(), rels.cols(), z_entries)
            .expect("relation coefficients in range");
        let (pres, emb) = reduce::reduce_presentation(&pmat, &z, "k");
        debug_assert!({
            let img = self.lift.mul(&emb);
            let tech = self.target.relation_echelon();
            (0..img.cols()).all(|j| tech.contains(&img.col_vec(j)))
        });
        Ok((Arc::new(pres), emb))
    }

    /// Structure of target modulo image: the cokernel of the induced
    /// map, computed from the block matrix `[lift | targetRelations]`.
    pub fn hom_cokernel(&self) -> Result<AbelianStructure, PresentError> {
        self.require_induced()?;
        let stack = Matrix::hstack(&[&self.lift, self.target.relations()]);
        Ok(cokernel_structure(&stack))
    }
}

impl fmt::Debug for PresentedHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PresentedHom({} -> {} generators)",
            self.source.generator_count(),
            self.target.generator_count()
        )
    }
}

/// Exactness at the middle of `f: A -> B`, `g: B -> C`: the image
/// lattice of `f` (plus middle relations) must equal the preimage
/// lattice of `g`. Lattice equality is tested by mutual membership;
/// structure equality alone would not be sufficient.
pub fn check_exact(f: &PresentedHom, g: &PresentedHom) -> Result<bool, PresentError> {
    if *f.target != *g.source {
        return Err(PresentError::MiddleMismatch);
    }
    f.require_induced()?;
    g.require_induced()?;
    let mid = &f.target;
    let mid_gens = mid.generator_count();

    // Image lattice of f, middle relations included.
    let image = Matrix::hstack(&[&f.lift, mid.relations()]);
    let image_ech = col_echelon(mid_gens, image.col_slices().to_vec(), Track::None);

    // Preimage lattice of g via the block kernel.
    let hmat = g.target.relation_echelon().basis_matrix();
    let stack = Matrix::hstack(&[&g.lift, &hmat]);
    let ech = col_echelon(stack.rows(), stack.into_cols(), Track::Cols(mid_gens));
    let preimage: Vec<_> = ech
        .kernel_trans
        .into_iter()
        .filter(|c| !c.is_empty())
        .collect();
    let pre_ech = col_echelon(mid_gens, preimage, Track::None);

    // Image inside preimage: middle relations are in both, so only
    // the lift columns need testing.
    for j in 0..f.lift.cols() {
        if !pre_ech.contains(&f.lift.col_vec(j)) {
            return Ok(false);
        }
    }
    // Preimage inside image.
    let pmat = pre_ech.basis_matrix();
    for j in 0..pmat.cols() {
        if !image_ech.contains(&pmat.col_vec(j)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Tensor with `Z^n`: `n` copies of each generator and relation,
/// codes prefixed `i@` for `i` in `1..=n`.
pub fn tensor_with_free(p: &Presentation, n: usize) -> Presentation {
    let mut gens = Vec::with_capacity(n * p.generator_count());
    for i in 1..=n {
        for g in p.generators() {
            gens.push(format!("{i}@{g}"));
        }
    }
    let m = p.generator_count();
    let r = p.relations().cols();
    let entries = (0..n).flat_map(|blk| {
        p.relations()
            .entries()
            .map(move |(row, col, v)| (blk * m + row, blk * r + col, v.clone()))
            .collect::<Vec<_>>()
    });
    let relations =
        Matrix::from_entries(n * m, n * r, entries).expect("shifted entries in range");
    Presentation::new(gens, relations).expect("tensor generators stay sorted")
}

/// Tensor a hom with `Z^n`: block diagonal lift between the tensored
/// presentations.
pub fn tensor_hom(f: &PresentedHom, n: usize) -> PresentedHom {
    let src = Arc::new(tensor_with_free(f.source(), n));
    let tgt = Arc::new(tensor_with_free(f.target(), n));
    let tm = f.target().generator_count();
    let sm = f.source().generator_count();
    let entries = (0..n).flat_map(|blk| {
        f.lift()
            .entries()
            .map(move |(row, col, v)| (blk * tm + row, blk * sm + col, v.clone()))
            .collect::<Vec<_>>()
    });
    let lift = Matrix::from_entries(n * tm, n * sm, entries).expect("block lift in range");
    PresentedHom::new(src, tgt, lift).expect("block lift fits tensored shapes")
}
