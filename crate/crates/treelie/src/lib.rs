//! Exact computation in graded Lie rings over the integers.
//!
//! Everything here is built from one primitive: finitely presented
//! abelian groups with integer relation matrices, reduced by exact
//! (fraction-free) elimination. On top of that sit three graded
//! objects attached to a free abelian group `H` of rank `n`:
//!
//! * the free Lie ring on `H`, with its Lyndon-word basis
//!   ([`freelie`]),
//! * the quasi-Lie ring on `H`, presented by formal bracketings
//!   modulo antisymmetry and the Jacobi identity ([`quasilie`]),
//! * groups of rooted labeled trees modulo antisymmetry, the
//!   four-term exchange relation, and rerooting ([`treediag`]).
//!
//! The maps between these objects (bracketing, the comparison map to
//! the free Lie ring, summed rerooting, root forgetting) are computed
//! as integer matrices on free covers, and the structural statements
//! about them are checked mechanically at small rank and degree by
//! the [`verify`] module. No floating point is used anywhere; every
//! group is reported exactly as `Z^r + Z/d1 + ... + Z/dm`.

pub mod cache;
pub mod codes;
pub mod freelie;
pub mod presented;
pub mod quasilie;
pub mod report;
pub mod treediag;
pub mod verify;
pub mod zlinalg;

#[cfg(doctest)]
mod book;
