//! Repairs: the largest subsets of an ontology that no longer entail a goal.
//!
//! Removing a set of axioms breaks the entailment exactly when that set hits
//! every justification, so the optimal (maximum-cardinality) repairs are the
//! complements of the minimum-cardinality hitting sets of the justification
//! family. Two shortcuts make this cheap in the common cases:
//!
//! - a singleton hitting set is precisely a core member, so when the core is
//!   non-empty the optimal repairs are `O ∖ {β}` for each core axiom β — no
//!   justification enumeration needed;
//! - when the core is empty, every hitting set has at least two elements and
//!   the full justification family is enumerated once over the module.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::hst;
use crate::locality::star_module_for_goal;
use crate::model::{AxiomId, Gci, Ontology};
use crate::tableau::Oracle;

/// How the repairs were obtained, plus the repairs themselves (as surviving
/// axiom-id sets).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepairOutcome {
    /// Every optimal repair: maximum-cardinality subsets of the ontology
    /// that do not entail the goal.
    pub repairs: BTreeSet<BTreeSet<AxiomId>>,
    /// True when a non-empty core made enumeration unnecessary.
    pub used_core_shortcut: bool,
    /// Entailment tests spent.
    pub oracle_calls: u64,
}

/// All ⊆-minimal hitting sets of `family`.
///
/// The empty family is hit by the empty set; a family containing the empty
/// set is unhittable ([`Error::EmptyMember`]).
pub fn minimal_hitting_sets(
    family: &BTreeSet<BTreeSet<AxiomId>>,
) -> Result<BTreeSet<BTreeSet<AxiomId>>> {
    if family.iter().any(|m| m.is_empty()) {
        return Err(Error::EmptyMember);
    }
    let members: Vec<&BTreeSet<AxiomId>> = family.iter().collect();
    let mut candidates: BTreeSet<BTreeSet<AxiomId>> = BTreeSet::new();
    let mut current = BTreeSet::new();
    branch(&members, &mut current, &mut candidates);
    // Branching on the first unhit member can emit supersets of hitting
    // sets reached along other element orders; keep only the minimal ones.
    let minimal: BTreeSet<BTreeSet<AxiomId>> = candidates
        .iter()
        .filter(|h| {
            !candidates
                .iter()
                .any(|other| other.len() < h.len() && other.is_subset(h))
        })
        .cloned()
        .collect();
    Ok(minimal)
}

fn branch(
    members: &[&BTreeSet<AxiomId>],
    current: &mut BTreeSet<AxiomId>,
    out: &mut BTreeSet<BTreeSet<AxiomId>>,
) {
    match members.iter().find(|m| m.is_disjoint(current)) {
        None => {
            out.insert(current.clone());
        }
        Some(unhit) => {
            for x in unhit.iter() {
                current.insert(x.clone());
                branch(members, current, out);
                current.remove(x);
            }
        }
    }
}

/// A minimum-cardinality hitting set; among equals, the lexicographically
/// least. Same edge cases as [`minimal_hitting_sets`].
pub fn smallest_hitting_set(
    family: &BTreeSet<BTreeSet<AxiomId>>,
) -> Result<BTreeSet<AxiomId>> {
    let all = minimal_hitting_sets(family)?;
    let best_len = all.iter().map(|h| h.len()).min().unwrap_or(0);
    Ok(all
        .into_iter()
        .find(|h| h.len() == best_len)
        .unwrap_or_default())
}

/// All optimal repairs of `goal` in `o`.
///
/// Errors with [`Error::NotEntailed`] when there is nothing to repair and
/// with [`Error::NoRepair`] when the goal is a tautology (every subset,
/// including the empty one, entails it).
pub fn optimal_repairs(o: &Ontology, goal: &Gci, oracle: &Oracle) -> Result<RepairOutcome> {
    let before = oracle.calls();
    if oracle.entails(&Ontology::empty(), goal)? {
        return Err(Error::NoRepair);
    }
    let module = star_module_for_goal(o, goal);
    if !oracle.entails(&module, goal)? {
        return Err(Error::NotEntailed);
    }
    let core = hst::compute_core(&module, goal, oracle)?;
    let all_ids = o.id_set();

    if !core.is_empty() {
        let repairs = core
            .iter()
            .map(|beta| {
                let mut keep = all_ids.clone();
                keep.remove(beta);
                keep
            })
            .collect();
        return Ok(RepairOutcome {
            repairs,
            used_core_shortcut: true,
            oracle_calls: oracle.calls() - before,
        });
    }

    let family =
        hst::enumerate_justifications(&module, goal, oracle, &core)?.justifications;
    let hitting = minimal_hitting_sets(&family)?;
    let best = hitting.iter().map(|h| h.len()).min().unwrap_or(0);
    let repairs = hitting
        .iter()
        .filter(|h| h.len() == best)
        .map(|h| all_ids.difference(h).cloned().collect())
        .collect();
    Ok(RepairOutcome {
        repairs,
        used_core_shortcut: false,
        oracle_calls: oracle.calls() - before,
    })
}

/// Is `candidate` (a set of axiom ids of `o`) a repair: non-entailing and
/// maximal among non-entailing subsets?
pub fn is_repair(
    o: &Ontology,
    goal: &Gci,
    oracle: &Oracle,
    candidate: &BTreeSet<AxiomId>,
) -> Result<bool> {
    let all_ids = o.id_set();
    if !candidate.is_subset(&all_ids) {
        return Ok(false);
    }
    if oracle.entails(&o.restrict(candidate), goal)? {
        return Ok(false);
    }
    for id in all_ids.difference(candidate) {
        let mut grown = candidate.clone();
        grown.insert(id.clone());
        if !oracle.entails(&o.restrict(&grown), goal)? {
            return Ok(false); // candidate was not maximal
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brute;
    use crate::parser::{parse_goal, parse_ontology};

    fn idset(names: &[&str]) -> BTreeSet<AxiomId> {
        names.iter().map(|n| AxiomId::new(*n)).collect()
    }

    fn family(sets: &[&[&str]]) -> BTreeSet<BTreeSet<AxiomId>> {
        sets.iter().map(|s| idset(s)).collect()
    }

    #[test]
    fn hitting_sets_of_small_families() {
        assert_eq!(
            minimal_hitting_sets(&family(&[&["a"]])).unwrap(),
            family(&[&["a"]])
        );
        assert_eq!(
            minimal_hitting_sets(&family(&[&["a", "b"]])).unwrap(),
            family(&[&["a"], &["b"]])
        );
        assert_eq!(
            minimal_hitting_sets(&family(&[&["a", "b"], &["a", "c"]])).unwrap(),
            family(&[&["a"], &["b", "c"]])
        );
        assert_eq!(
            minimal_hitting_sets(&family(&[&["a", "b"], &["c", "d"]])).unwrap(),
            family(&[&["a", "c"], &["a", "d"], &["b", "c"], &["b", "d"]])
        );
    }

    #[test]
    fn hitting_sets_filter_out_non_minimal_candidates() {
        // Branching hits {a,b} first and can reach {a,b} as a candidate,
        // but {b} alone hits both members.
        assert_eq!(
            minimal_hitting_sets(&family(&[&["a", "b"], &["b"]])).unwrap(),
            family(&[&["b"]])
        );
    }

    #[test]
    fn empty_family_is_hit_by_the_empty_set() {
        let none: BTreeSet<BTreeSet<AxiomId>> = BTreeSet::new();
        assert_eq!(minimal_hitting_sets(&none).unwrap(), family(&[&[]]));
    }

    #[test]
    fn empty_member_is_unhittable() {
        let mut f = family(&[&["a"]]);
        f.insert(BTreeSet::new());
        assert!(matches!(minimal_hitting_sets(&f), Err(Error::EmptyMember)));
        assert!(matches!(smallest_hitting_set(&f), Err(Error::EmptyMember)));
    }

    #[test]
    fn smallest_prefers_cardinality_then_lexicographic_order() {
        assert_eq!(
            smallest_hitting_set(&family(&[&["a", "b"], &["a", "c"]])).unwrap(),
            idset(&["a"])
        );
        assert_eq!(
            smallest_hitting_set(&family(&[&["b", "a"]])).unwrap(),
            idset(&["a"])
        );
    }

    #[test]
    fn core_shortcut_repairs_drop_single_axioms() {
        let o = parse_ontology("(sub A B)\n(sub B C)").unwrap();
        let goal = parse_goal("(sub A C)").unwrap();
        let got = optimal_repairs(&o, &goal, &Oracle::new()).unwrap();
        assert!(got.used_core_shortcut);
        assert_eq!(got.repairs, family(&[&["ax1"], &["ax2"]]));
    }

    #[test]
    fn shared_axiom_gives_one_repair() {
        let o = parse_ontology("(sub A B)\n(sub B C)\n(sub B D)\n(sub D C)").unwrap();
        let goal = parse_goal("(sub A C)").unwrap();
        let got = optimal_repairs(&o, &goal, &Oracle::new()).unwrap();
        assert!(got.used_core_shortcut);
        assert_eq!(got.repairs, family(&[&["ax2", "ax3", "ax4"]]));
    }

    #[test]
    fn empty_core_goes_through_hitting_sets() {
        let o =
            parse_ontology("(sub A B)\n(sub B C)\n(sub A C)\n(sub A (some r D))").unwrap();
        let goal = parse_goal("(sub A C)").unwrap();
        let got = optimal_repairs(&o, &goal, &Oracle::new()).unwrap();
        assert!(!got.used_core_shortcut);
        assert_eq!(
            got.repairs,
            family(&[&["ax1", "ax4"], &["ax2", "ax4"]])
        );
    }

    #[test]
    fn tautology_has_no_repair() {
        let o = parse_ontology("(sub A B)").unwrap();
        let goal = parse_goal("(sub A A)").unwrap();
        assert!(matches!(
            optimal_repairs(&o, &goal, &Oracle::new()),
            Err(Error::NoRepair)
        ));
    }

    #[test]
    fn nothing_to_repair_when_not_entailed() {
        let o = parse_ontology("(sub A B)").unwrap();
        let goal = parse_goal("(sub B A)").unwrap();
        assert!(matches!(
            optimal_repairs(&o, &goal, &Oracle::new()),
            Err(Error::NotEntailed)
        ));
    }

    #[test]
    fn repair_check_by_definition() {
        let o =
            parse_ontology("(sub A B)\n(sub B C)\n(sub A C)\n(sub A (some r D))").unwrap();
        let goal = parse_goal("(sub A C)").unwrap();
        let oracle = Oracle::new();
        assert!(is_repair(&o, &goal, &oracle, &idset(&["ax2", "ax4"])).unwrap());
        assert!(is_repair(&o, &goal, &oracle, &idset(&["ax1", "ax4"])).unwrap());
        // Non-maximal: ax2 could be added back.
        assert!(!is_repair(&o, &goal, &oracle, &idset(&["ax4"])).unwrap());
        // Still entailing.
        assert!(!is_repair(&o, &goal, &oracle, &idset(&["ax1", "ax2", "ax4"])).unwrap());
        // Not even a subset of the ontology.
        assert!(!is_repair(&o, &goal, &oracle, &idset(&["zz"])).unwrap());
    }

    #[test]
    fn optimal_repairs_are_the_largest_brute_force_repairs() {
        let cases = [
            ("(sub A B)\n(sub B C)", "(sub A C)"),
            ("(sub A B)\n(sub B C)\n(sub A C)\n(sub A (some r D))", "(sub A C)"),
            ("(sub A B)\n(sub B C)\n(sub B D)\n(sub D C)", "(sub A C)"),
            (
                "(sub G X)\n(sub G Y)\n(sub G Z)\n\
                 (sub (and X Y) H)\n(sub (and X Z) H)\n(sub (and Y Z) H)",
                "(sub G H)",
            ),
        ];
        for (onto, goal) in cases {
            let o = parse_ontology(onto).unwrap();
            let g = parse_goal(goal).unwrap();
            let all = brute::repairs(&o, &g, &Oracle::new(), brute::DEFAULT_CAP).unwrap();
            let biggest = all.iter().map(|r| r.len()).max().unwrap();
            let want: BTreeSet<BTreeSet<AxiomId>> = all
                .into_iter()
                .filter(|r| r.len() == biggest)
                .collect();
            let got = optimal_repairs(&o, &g, &Oracle::new()).unwrap();
            assert_eq!(got.repairs, want, "repairs for {onto}");
            for r in &got.repairs {
                assert!(is_repair(&o, &g, &Oracle::new(), r).unwrap());
            }
        }
    }
}
