//! Exhaustive baselines: enumerate every justification (and every repair) by
//! brute force over subsets of the goal's ⊥⊤*-module.
//!
//! These exist to cross-check the clever algorithms, so they stay as direct
//! as possible: one subset, one oracle call, with a single monotonicity
//! shortcut (a superset of a known justification entails without asking).
//! The module is sound as a search space because it contains every
//! justification of the goal, and entailment of a subset `S` of the module
//! does not depend on axioms outside the module.
//!
//! Cost is `O(2^|module|)`, so [`justifications`] refuses modules larger
//! than a caller-supplied cap rather than running forever.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::locality::star_module_for_goal;
use crate::model::{AxiomId, Gci, Ontology};
use crate::tableau::Oracle;

/// Default ceiling on module size for exhaustive enumeration.
pub const DEFAULT_CAP: usize = 20;

/// Everything the exhaustive enumeration learns about a goal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteForceResult {
    /// The ⊥⊤*-module the enumeration ran over.
    pub module: Ontology,
    /// All justifications, as id sets.
    pub justifications: BTreeSet<BTreeSet<AxiomId>>,
    /// Intersection of all justifications.
    pub core: BTreeSet<AxiomId>,
    /// Union of all justifications.
    pub union: BTreeSet<AxiomId>,
    /// Entailment tests spent.
    pub oracle_calls: u64,
}

/// Enumerate all justifications of `goal` in `o`.
///
/// Errors with [`Error::NotEntailed`] when the goal does not follow from `o`,
/// and with [`Error::CapExceeded`] when the module has more than `cap`
/// axioms. A tautological goal yields the single empty justification.
pub fn justifications(
    o: &Ontology,
    goal: &Gci,
    oracle: &Oracle,
    cap: usize,
) -> Result<BruteForceResult> {
    let module = star_module_for_goal(o, goal);
    if !oracle.entails(&module, goal)? {
        return Err(Error::NotEntailed);
    }
    let n = module.len();
    let cap = cap.min(63); // masks are u64
    if n > cap {
        return Err(Error::CapExceeded {
            module_size: n,
            cap,
        });
    }
    let ids: Vec<AxiomId> = module.ids().cloned().collect();
    let full = (1u64 << n) - 1;
    let before = oracle.calls();

    // Ascending mask order visits every proper subset of a mask before the
    // mask itself, so a mask that entails while containing no previously
    // recorded justification must itself be minimal: any entailing proper
    // subset would contain a (recorded, smaller) minimal one.
    let mut just_masks: Vec<u64> = Vec::new();
    for mask in 0..=full {
        if just_masks.iter().any(|j| j & mask == *j) {
            continue; // superset of a known justification
        }
        if oracle.entails(&subset(&module, &ids, mask), goal)? {
            just_masks.push(mask);
        }
    }

    let mut core_mask = full;
    let mut union_mask = 0u64;
    for j in &just_masks {
        core_mask &= j;
        union_mask |= j;
    }

    Ok(BruteForceResult {
        justifications: just_masks.iter().map(|m| mask_ids(&ids, *m)).collect(),
        core: mask_ids(&ids, core_mask),
        union: mask_ids(&ids, union_mask),
        oracle_calls: oracle.calls() - before,
        module,
    })
}

/// Enumerate all repairs of `goal` in `o`: the ⊆-maximal subsets that do not
/// entail it. Empty when the goal is a tautology (nothing can repair it).
pub fn repairs(
    o: &Ontology,
    goal: &Gci,
    oracle: &Oracle,
    cap: usize,
) -> Result<BTreeSet<BTreeSet<AxiomId>>> {
    let enumeration = justifications(o, goal, oracle, cap)?;
    let module = &enumeration.module;
    let ids: Vec<AxiomId> = module.ids().cloned().collect();
    let n = ids.len();
    let just_masks: Vec<u64> = enumeration
        .justifications
        .iter()
        .map(|j| ids_mask(&ids, j))
        .collect();

    // A subset of `o` entails the goal iff its intersection with the module
    // contains a justification, so each repair is (o ∖ module) ∪ s for a
    // maximal non-entailing s ⊆ module. No oracle calls needed here.
    let full = (1u64 << n) - 1;
    let entails_mask = |m: u64| just_masks.iter().any(|j| j & m == *j);
    let mut out = BTreeSet::new();
    for s in 0..=full {
        if entails_mask(s) {
            continue;
        }
        let maximal = (0..n).all(|b| {
            let bit = 1u64 << b;
            s & bit != 0 || entails_mask(s | bit)
        });
        if maximal {
            let keep = mask_ids(&ids, s);
            let repair: BTreeSet<AxiomId> = o
                .ids()
                .filter(|id| !module.contains(id) || keep.contains(*id))
                .cloned()
                .collect();
            out.insert(repair);
        }
    }
    Ok(out)
}

fn subset(module: &Ontology, ids: &[AxiomId], mask: u64) -> Ontology {
    module.restrict(&mask_ids(ids, mask))
}

fn mask_ids(ids: &[AxiomId], mask: u64) -> BTreeSet<AxiomId> {
    ids.iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, id)| id.clone())
        .collect()
}

fn ids_mask(ids: &[AxiomId], set: &BTreeSet<AxiomId>) -> u64 {
    let mut mask = 0;
    for (i, id) in ids.iter().enumerate() {
        if set.contains(id) {
            mask |= 1 << i;
        }
    }
    mask
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_goal, parse_ontology};

    fn idset(names: &[&str]) -> BTreeSet<AxiomId> {
        names.iter().map(|n| AxiomId::new(*n)).collect()
    }

    fn run(onto: &str, goal: &str) -> BruteForceResult {
        let o = parse_ontology(onto).unwrap();
        let g = parse_goal(goal).unwrap();
        justifications(&o, &g, &Oracle::new(), DEFAULT_CAP).unwrap()
    }

    #[test]
    fn two_overlapping_justifications() {
        // A ⊑ C holds directly (ax3) and via B (ax1, ax2); ax4 is noise.
        let r = run(
            "(sub A B)\n(sub B C)\n(sub A C)\n(sub A (some r D))",
            "(sub A C)",
        );
        let want: BTreeSet<BTreeSet<AxiomId>> =
            [idset(&["ax3"]), idset(&["ax1", "ax2"])].into();
        assert_eq!(r.justifications, want);
        assert!(r.core.is_empty());
        assert_eq!(r.union, idset(&["ax1", "ax2", "ax3"]));
        assert_eq!(r.module.len(), 3);
    }

    #[test]
    fn unique_justification_makes_core_equal_union() {
        let r = run("(sub A B)\n(sub B C)", "(sub A C)");
        let want: BTreeSet<BTreeSet<AxiomId>> = [idset(&["ax1", "ax2"])].into();
        assert_eq!(r.justifications, want);
        assert_eq!(r.core, idset(&["ax1", "ax2"]));
        assert_eq!(r.union, r.core);
    }

    #[test]
    fn shared_axiom_lands_in_core() {
        // Both justifications need ax1.
        let r = run(
            "(sub A B)\n(sub B C)\n(sub B D)\n(sub D C)",
            "(sub A C)",
        );
        let want: BTreeSet<BTreeSet<AxiomId>> =
            [idset(&["ax1", "ax2"]), idset(&["ax1", "ax3", "ax4"])].into();
        assert_eq!(r.justifications, want);
        assert_eq!(r.core, idset(&["ax1"]));
        assert_eq!(r.union, idset(&["ax1", "ax2", "ax3", "ax4"]));
    }

    #[test]
    fn tautology_has_the_empty_justification() {
        let r = run("(sub A B)", "(sub A A)");
        let want: BTreeSet<BTreeSet<AxiomId>> = [BTreeSet::new()].into();
        assert_eq!(r.justifications, want);
        assert!(r.core.is_empty());
        assert!(r.union.is_empty());
    }

    #[test]
    fn not_entailed_is_an_error() {
        let o = parse_ontology("(sub A B)").unwrap();
        let g = parse_goal("(sub B A)").unwrap();
        assert!(matches!(
            justifications(&o, &g, &Oracle::new(), DEFAULT_CAP),
            Err(Error::NotEntailed)
        ));
    }

    #[test]
    fn cap_is_enforced_on_the_module_not_the_ontology() {
        let o = parse_ontology("(sub A B)\n(sub B C)\n(sub X Y)").unwrap();
        let g = parse_goal("(sub A C)").unwrap();
        // Module has 2 axioms; ontology has 3. Cap 2 still fine.
        assert!(justifications(&o, &g, &Oracle::new(), 2).is_ok());
        match justifications(&o, &g, &Oracle::new(), 1) {
            Err(Error::CapExceeded { module_size, cap }) => {
                assert_eq!((module_size, cap), (2, 1));
            }
            other => panic!("expected CapExceeded, got {other:?}"),
        }
    }

    #[test]
    fn monotonicity_shortcut_saves_calls() {
        // Unique justification {ax1}: the three supersets of it are skipped.
        let o = parse_ontology("(sub A B)\n(sub C D)\n(sub E F)").unwrap();
        let g = parse_goal("(sub A B)").unwrap();
        let oracle = Oracle::new();
        let r = justifications(&o, &g, &oracle, DEFAULT_CAP).unwrap();
        // Module = {ax1}: 1 entailment check up front + masks {}, {ax1}.
        assert_eq!(r.module.len(), 1);
        assert_eq!(r.oracle_calls, 2);
    }

    #[test]
    fn repairs_are_maximal_non_entailing_subsets() {
        let o = parse_ontology(
            "(sub A B)\n(sub B C)\n(sub A C)\n(sub A (some r D))",
        )
        .unwrap();
        let g = parse_goal("(sub A C)").unwrap();
        let got = repairs(&o, &g, &Oracle::new(), DEFAULT_CAP).unwrap();
        // Break {ax3} and one of {ax1, ax2}; ax4 survives in every repair.
        let want: BTreeSet<BTreeSet<AxiomId>> = [
            idset(&["ax1", "ax4"]),
            idset(&["ax2", "ax4"]),
        ]
        .into();
        assert_eq!(got, want);
    }

    #[test]
    fn tautology_admits_no_repair() {
        let o = parse_ontology("(sub A B)").unwrap();
        let g = parse_goal("(sub A A)").unwrap();
        assert!(repairs(&o, &g, &Oracle::new(), DEFAULT_CAP)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn repairs_of_unique_justification_drop_single_axioms() {
        let o = parse_ontology("(sub A B)\n(sub B C)").unwrap();
        let g = parse_goal("(sub A C)").unwrap();
        let got = repairs(&o, &g, &Oracle::new(), DEFAULT_CAP).unwrap();
        let want: BTreeSet<BTreeSet<AxiomId>> =
            [idset(&["ax1"]), idset(&["ax2"])].into();
        assert_eq!(got, want);
    }
}
