//! The registry of named verifications, conjecture scans, and group
//! objects, with size estimates for refusing infeasible requests.
//!
//! Each verification bundles the statements one lemma-sized result
//! makes about a single degree and reports one pass/fail row, with a
//! failure witness naming the offending sub-fact, generator, or
//! relation. Conjecture scans are deliberately separate: they emit
//! `holds`/`fails` evidence rows that never gate anything, so a
//! counterexample is a finding, not an error.
//!
//! Free covers grow like `Catalan(k) * n^(k+2)`, so every entry point
//! has a companion estimate of the largest free cover it would touch;
//! callers compare that against their generator budget before
//! computing.

use crate::freelie::{self, witt_dim};
use crate::presented::{check_exact, render_combination};
use crate::quasilie::{
    betaprime_hom, catalan, dprime_group, gamma_hom, kernel_gamma, lprime_presentation,
    snake_verify, square_hom,
};
use crate::report::{CheckRow, GroupRow, Status, StructureInfo};
use crate::treediag::{
    at_presentation, bracket_kernel_offender, etaprime_hom, ker_etaprime, rho_etaprime_offender,
    tau_check,
};
use crate::zlinalg::AbelianStructure;
use num_bigint::BigInt;
use num_traits::Zero;

/// Named verifications, each mechanizing one proved statement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckName {
    /// The comparison-map kernel vanishes in odd degrees; in even
    /// degrees it is exactly the lattice of squares and has exponent
    /// two.
    LemmaQuasi,
    /// The short exact sequences linking the two bracket kernels and
    /// the comparison kernels, joint by joint.
    CorDd,
    /// The rooting sum lands in the kernel of the quasi-Lie bracket
    /// map.
    LemmaRoot,
    /// The rooting-sum image equals the bracket kernel, and the
    /// rooting-sum kernel is `(k+2)`-torsion, odd in odd degrees and
    /// the whole torsion subgroup in even ones.
    ThmTree,
    /// Forgetting the root after the rooting sum multiplies by `k+2`.
    RhoEta,
    /// The partial inverse to the bracket map is well defined modulo
    /// the rooting-sum image and projects correctly.
    Tau,
}

impl CheckName {
    pub const ALL: [CheckName; 6] = [
        CheckName::LemmaQuasi,
        CheckName::CorDd,
        CheckName::LemmaRoot,
        CheckName::ThmTree,
        CheckName::RhoEta,
        CheckName::Tau,
    ];

    pub fn parse(s: &str) -> Option<CheckName> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }

    pub fn name(self) -> &'static str {
        match self {
            CheckName::LemmaQuasi => "lemma-quasi",
            CheckName::CorDd => "cor-dd",
            CheckName::LemmaRoot => "lemma-root",
            CheckName::ThmTree => "thm-tree",
            CheckName::RhoEta => "rho-eta",
            CheckName::Tau => "tau",
        }
    }
}

/// Conjecture scans: evidence only, never load-bearing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConjectureName {
    /// Squaring `L_l / 2L_l` into the even quasi-Lie degrees is
    /// injective.
    SquareMono,
    /// The rooting sum has no kernel at all.
    EtaIso,
}

impl ConjectureName {
    pub const ALL: [ConjectureName; 2] = [ConjectureName::SquareMono, ConjectureName::EtaIso];

    pub fn parse(s: &str) -> Option<ConjectureName> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }

    pub fn name(self) -> &'static str {
        match self {
            ConjectureName::SquareMono => "square-mono",
            ConjectureName::EtaIso => "eta-iso",
        }
    }
}

/// The group objects the CLI can tabulate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupObject {
    /// Free Lie ring degree, free of Witt rank.
    L,
    /// Free quasi-Lie ring degree.
    Lq,
    /// Kernel of the comparison map onto the Lie side.
    K,
    /// Kernel of the Lie bracket map, free.
    D,
    /// Kernel of the quasi-Lie bracket map.
    Dq,
    /// The tree diagram group.
    At,
    /// Kernel of the rooting sum.
    KerEta,
}

impl GroupObject {
    pub const ALL: [GroupObject; 7] = [
        GroupObject::L,
        GroupObject::Lq,
        GroupObject::K,
        GroupObject::D,
        GroupObject::Dq,
        GroupObject::At,
        GroupObject::KerEta,
    ];

    pub fn parse(s: &str) -> Option<GroupObject> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }

    pub fn name(self) -> &'static str {
        match self {
            GroupObject::L => "L",
            GroupObject::Lq => "Lq",
            GroupObject::K => "K",
            GroupObject::D => "D",
            GroupObject::Dq => "Dq",
            GroupObject::At => "At",
            GroupObject::KerEta => "KerEta",
        }
    }

    pub fn compute(self, n: u32, k: u32) -> AbelianStructure {
        match self {
            GroupObject::L => AbelianStructure::free(witt_dim(n, k)),
            GroupObject::Lq => lprime_presentation(n, k).group_structure().clone(),
            GroupObject::K => kernel_gamma(n, k).0.group_structure().clone(),
            GroupObject::D => freelie::d_group(n, k).0,
            GroupObject::Dq => dprime_group(n, k).0.group_structure().clone(),
            GroupObject::At => at_presentation(n, k).group_structure().clone(),
            GroupObject::KerEta => ker_etaprime(n, k),
        }
    }

    /// Largest free cover touched while computing this object.
    pub fn estimate(self, n: u32, k: u32) -> u128 {
        match self {
            GroupObject::L => witt_bound(n, k),
            GroupObject::Lq | GroupObject::K => lq_cover(n, k),
            GroupObject::D => witt_bound(n, k + 2).max(mul_sat(n as u128, witt_bound(n, k + 1))),
            GroupObject::Dq => lq_cover(n, k + 2).max(tensor_cover(n, k)),
            GroupObject::At | GroupObject::KerEta => at_cover(n, k),
        }
    }
}

fn pow_sat(n: u32, e: u32) -> u128 {
    (n as u128).checked_pow(e).unwrap_or(u128::MAX)
}

fn mul_sat(a: u128, b: u128) -> u128 {
    a.checked_mul(b).unwrap_or(u128::MAX)
}

fn cat_sat(m: u32) -> u128 {
    if m > 60 {
        return u128::MAX;
    }
    catalan(m)
}

/// Upper bound on the Witt dimension, `n^k / k`.
fn witt_bound(n: u32, k: u32) -> u128 {
    pow_sat(n, k) / u128::from(k.max(1))
}

/// Free cover of one quasi-Lie degree: trees with `k` leaves.
fn lq_cover(n: u32, k: u32) -> u128 {
    if k == 0 {
        return 0;
    }
    mul_sat(cat_sat(k - 1), pow_sat(n, k))
}

/// Free cover of the tensor side `H (x) L'_{k+1}`.
fn tensor_cover(n: u32, k: u32) -> u128 {
    mul_sat(n as u128, lq_cover(n, k + 1))
}

/// Free cover of the diagram group, equal to the tensor side.
fn at_cover(n: u32, k: u32) -> u128 {
    tensor_cover(n, k)
}

/// Largest free cover the named verification would touch at `(n,k)`.
pub fn check_estimate(name: CheckName, n: u32, k: u32) -> u128 {
    match name {
        CheckName::LemmaQuasi => lq_cover(n, k),
        CheckName::CorDd => lq_cover(n, k + 2).max(tensor_cover(n, k)),
        CheckName::LemmaRoot | CheckName::ThmTree | CheckName::Tau => {
            lq_cover(n, k + 2).max(at_cover(n, k))
        }
        CheckName::RhoEta => at_cover(n, k),
    }
}

/// Largest free cover the conjecture scan would touch at `(n,k)`.
pub fn conjecture_estimate(name: ConjectureName, n: u32, k: u32) -> u128 {
    match name {
        ConjectureName::SquareMono => lq_cover(n, 2 * k),
        ConjectureName::EtaIso => at_cover(n, k),
    }
}

fn group_row(object: GroupObject, n: u32, k: u32, s: &AbelianStructure) -> GroupRow {
    GroupRow {
        object: object.name().to_string(),
        n,
        k,
        structure: Some(StructureInfo::from(s)),
        note: None,
    }
}

fn outcome(name: CheckName, n: u32, k: u32, problems: Vec<String>) -> CheckRow {
    CheckRow {
        name: name.name().to_string(),
        n,
        k,
        status: if problems.is_empty() {
            Status::Pass
        } else {
            Status::Fail
        },
        witness: if problems.is_empty() {
            None
        } else {
            Some(problems.join("; "))
        },
    }
}

/// Runs one named verification at one degree, returning its outcome
/// row and the group structures it computed along the way.
pub fn run_check(name: CheckName, n: u32, k: u32) -> (CheckRow, Vec<GroupRow>) {
    match name {
        CheckName::LemmaQuasi => {
            let (kp, _) = kernel_gamma(n, k);
            let ks = kp.group_structure().clone();
            let mut problems = Vec::new();
            if k % 2 == 1 {
                if !ks.is_trivial() {
                    problems.push(format!("odd-degree kernel is {ks}"));
                }
            } else {
                match check_exact(&square_hom(n, k / 2), &gamma_hom(n, k)) {
                    Ok(true) => {}
                    Ok(false) => {
                        problems.push("square image differs from the kernel lattice".to_string())
                    }
                    Err(e) => problems.push(format!("exactness check unavailable: {e}")),
                }
                let two = BigInt::from(2);
                if ks.free_rank() != 0 || ks.torsion().iter().any(|d| d != &two) {
                    problems.push(format!("kernel exponent exceeds two: {ks}"));
                }
            }
            let groups = vec![group_row(GroupObject::K, n, k, &ks)];
            (outcome(name, n, k, problems), groups)
        }
        CheckName::CorDd => match snake_verify(n, k) {
            Ok(rep) => {
                let mut problems = Vec::new();
                if !rep.left_injective {
                    problems.push(format!("left map of {} not injective", rep.sequence));
                }
                if !rep.middle_exact {
                    problems.push(format!("{} not exact in the middle", rep.sequence));
                }
                if !rep.right_surjective {
                    problems.push(format!("right map of {} not surjective", rep.sequence));
                }
                let flank = if k % 2 == 0 {
                    GroupRow {
                        object: "K".to_string(),
                        n,
                        k: k + 2,
                        structure: Some(StructureInfo::from(&rep.flank)),
                        note: None,
                    }
                } else {
                    GroupRow {
                        object: "HxK".to_string(),
                        n,
                        k: k + 1,
                        structure: Some(StructureInfo::from(&rep.flank)),
                        note: None,
                    }
                };
                let groups = vec![
                    group_row(GroupObject::Dq, n, k, &rep.dprime),
                    group_row(GroupObject::D, n, k, &rep.d),
                    flank,
                ];
                (outcome(name, n, k, problems), groups)
            }
            Err(e) => (
                outcome(name, n, k, vec![format!("sequence construction failed: {e}")]),
                Vec::new(),
            ),
        },
        CheckName::LemmaRoot => {
            let problems = match bracket_kernel_offender(n, k) {
                None => Vec::new(),
                Some(g) => vec![format!("rooting sum of {g} escapes the bracket kernel")],
            };
            (outcome(name, n, k, problems), Vec::new())
        }
        CheckName::ThmTree => {
            let mut problems = Vec::new();
            match check_exact(&etaprime_hom(n, k), &betaprime_hom(n, k)) {
                Ok(true) => {}
                Ok(false) => {
                    problems.push("rooting-sum image differs from the bracket kernel".to_string())
                }
                Err(e) => problems.push(format!("exactness check unavailable: {e}")),
            }
            let ker = ker_etaprime(n, k);
            let at = at_presentation(n, k).group_structure().clone();
            if ker.free_rank() != 0 {
                problems.push(format!("rooting-sum kernel has free rank: {ker}"));
            }
            let bound = BigInt::from(k + 2);
            if ker.torsion().iter().any(|d| !(&bound % d).is_zero()) {
                problems.push(format!("kernel factor fails to divide {}: {ker}", k + 2));
            }
            if k % 2 == 1 {
                if !ker.torsion_is_odd() {
                    problems.push(format!("odd-degree kernel has even order: {ker}"));
                }
            } else if ker.torsion_order() != at.torsion_order() {
                problems.push(format!(
                    "kernel order {} differs from diagram torsion order {}",
                    ker.torsion_order(),
                    at.torsion_order()
                ));
            }
            let groups = vec![
                group_row(GroupObject::At, n, k, &at),
                group_row(GroupObject::KerEta, n, k, &ker),
            ];
            (outcome(name, n, k, problems), groups)
        }
        CheckName::RhoEta => {
            let problems = match rho_etaprime_offender(n, k) {
                None => Vec::new(),
                Some(g) => vec![format!(
                    "round trip differs from multiplication by {} on {g}",
                    k + 2
                )],
            };
            (outcome(name, n, k, problems), Vec::new())
        }
        CheckName::Tau => match tau_check(n, k) {
            Ok(rep) => {
                let mut problems = Vec::new();
                if !rep.well_defined {
                    let detail = rep
                        .offending_relation
                        .unwrap_or_else(|| "unknown relation".to_string());
                    problems.push(format!("not well defined on relation {detail}"));
                }
                if !rep.projects {
                    problems.push("composite with the bracket map is not the projection".into());
                }
                if !rep.kernel_matches_image {
                    problems.push("bracket kernel differs from the rooting-sum image".into());
                }
                (outcome(name, n, k, problems), Vec::new())
            }
            Err(e) => (
                outcome(name, n, k, vec![format!("construction failed: {e}")]),
                Vec::new(),
            ),
        },
    }
}

/// Runs one conjecture scan at one degree. The returned status is
/// `holds` or `fails` with a witness; callers must not gate on it.
pub fn run_conjecture(name: ConjectureName, n: u32, k: u32) -> CheckRow {
    let (trivial_kernel, witness) = match name {
        ConjectureName::SquareMono => {
            let sq = square_hom(n, k);
            let (kp, emb) = sq.hom_kernel().expect("squaring is induced");
            let s = kp.group_structure().clone();
            if s.is_trivial() {
                (true, None)
            } else {
                let gens = sq.source().generators();
                let class = render_combination(gens, emb.col_entries(0));
                (false, Some(format!("kernel {s}, e.g. {class}")))
            }
        }
        ConjectureName::EtaIso => {
            let ep = etaprime_hom(n, k);
            let (kp, emb) = ep.hom_kernel().expect("rooting sum is induced");
            let s = kp.group_structure().clone();
            if s.is_trivial() {
                (true, None)
            } else {
                let gens = ep.source().generators();
                let class = render_combination(gens, emb.col_entries(0));
                (false, Some(format!("kernel {s}, e.g. {class}")))
            }
        }
    };
    CheckRow {
        name: name.name().to_string(),
        n,
        k,
        status: if trivial_kernel {
            Status::Holds
        } else {
            Status::Fails
        },
        witness,
    }
}
