//! Black-box pinpointing: core, single justification, and union of all
//! justifications over an entailment oracle.
//!
//! All four procedures treat the reasoner as a black box and are measured in
//! oracle calls. They expect to run on the goal's ⊥⊤*-module (any superset
//! works, just slower) and assume the module entails the goal — callers
//! check that once, up front.
//!
//! - [`compute_core`]: an axiom lies in every justification iff deleting it
//!   breaks the entailment, so the core costs exactly one oracle call per
//!   module axiom.
//! - [`single_justification`]: a deletion sweep. Core axioms are never
//!   deletable, so the sweep skips them for free.
//! - [`union_of_justifications`] / [`enumerate_justifications`]: a
//!   hitting-set-tree search. Each node removes the axioms on its path from
//!   the module, finds a justification of the remainder, and branches on
//!   that justification's non-core axioms; every justification shows up at
//!   some node. The union variant additionally stops early when the first
//!   justification equals the core (it is then the only one) and skips nodes
//!   whose remaining axioms all sit inside the union already — those prunes
//!   lose justifications but never union members, which is the point:
//!   computing the union does not require seeing every justification.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::model::{AxiomId, Gci, Ontology};
use crate::tableau::Oracle;

/// Counters for the hitting-set-tree search, one per prune rule.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Nodes dequeued and fully processed (justification found or reused).
    pub nodes_processed: u64,
    /// Nodes skipped because an explored node had the same path.
    pub pruned_equal_path: u64,
    /// Nodes skipped because a non-entailing leaf's path was a subset.
    pub pruned_closed_subset: u64,
    /// Nodes skipped because the remaining module was inside the union.
    pub pruned_union_covered: u64,
    /// Nodes served by an already-known justification disjoint from the path.
    pub reused_justifications: u64,
    /// The first justification equalled the core, so it is unique and the
    /// search returned immediately.
    pub unique_justification_shortcut: bool,
}

/// Result of a hitting-set-tree search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnionOutcome {
    /// Union of the justifications the search saw. Complete for
    /// [`enumerate_justifications`], and — despite the prunes — also
    /// complete for [`union_of_justifications`].
    pub union: BTreeSet<AxiomId>,
    /// Justifications discovered. Complete only for
    /// [`enumerate_justifications`].
    pub justifications: BTreeSet<BTreeSet<AxiomId>>,
    /// Oracle calls spent by this search alone.
    pub oracle_calls: u64,
    pub stats: SearchStats,
}

/// Intersection of all justifications of `goal` in `module`.
///
/// `β` survives in every justification exactly when `module ∖ {β}` no longer
/// entails the goal. Requires `module ⊨ goal`; on a non-entailing module the
/// deletion test never fails and the result is meaningless.
pub fn compute_core(
    module: &Ontology,
    goal: &Gci,
    oracle: &Oracle,
) -> Result<BTreeSet<AxiomId>> {
    let mut core = BTreeSet::new();
    for id in module.id_set() {
        if !oracle.entails(&module.without_one(&id), goal)? {
            core.insert(id);
        }
    }
    Ok(core)
}

/// One justification of `goal` in `module`, by a deletion sweep in ascending
/// id order. `core` members are kept without a test — they can never be
/// deleted — so the sweep costs `|module| - |core|` oracle calls.
///
/// Requires `module ⊨ goal` and `core ⊆` every justification (as computed by
/// [`compute_core`] on any superset of `module`).
pub fn single_justification(
    module: &Ontology,
    goal: &Gci,
    oracle: &Oracle,
    core: &BTreeSet<AxiomId>,
) -> Result<BTreeSet<AxiomId>> {
    let mut current = module.clone();
    for id in module.id_set() {
        if core.contains(&id) {
            continue;
        }
        let candidate = current.without_one(&id);
        if oracle.entails(&candidate, goal)? {
            current = candidate;
        }
    }
    Ok(current.id_set())
}

/// Union of all justifications, with every prune enabled.
pub fn union_of_justifications(
    module: &Ontology,
    goal: &Gci,
    oracle: &Oracle,
    core: &BTreeSet<AxiomId>,
) -> Result<UnionOutcome> {
    search(module, goal, oracle, core, true)
}

/// All justifications, by the same search with the union-only prunes
/// disabled. Used as the enumeration baseline the union search is compared
/// against.
pub fn enumerate_justifications(
    module: &Ontology,
    goal: &Gci,
    oracle: &Oracle,
    core: &BTreeSet<AxiomId>,
) -> Result<UnionOutcome> {
    search(module, goal, oracle, core, false)
}

struct Explored {
    path: BTreeSet<AxiomId>,
    /// False for non-entailing leaves; true for nodes that produced (or
    /// reused) a justification.
    expanded: bool,
}

enum Redundancy {
    EqualPath,
    ClosedSubset,
}

/// Is this path already covered by the explored part of the tree? Either an
/// explored node carried exactly the same path (the same node reached along
/// a permuted path), or a non-entailing leaf's path is contained in it (a
/// superset of a breaking removal set cannot entail either).
fn path_redundancy(path: &BTreeSet<AxiomId>, explored: &[Explored]) -> Option<Redundancy> {
    for e in explored {
        if e.path == *path {
            return Some(Redundancy::EqualPath);
        }
    }
    for e in explored {
        if !e.expanded && e.path.is_subset(path) {
            return Some(Redundancy::ClosedSubset);
        }
    }
    None
}

fn search(
    module: &Ontology,
    goal: &Gci,
    oracle: &Oracle,
    core: &BTreeSet<AxiomId>,
    union_mode: bool,
) -> Result<UnionOutcome> {
    let before = oracle.calls();
    let module_ids = module.id_set();
    let mut union: BTreeSet<AxiomId> = BTreeSet::new();
    let mut found: BTreeSet<BTreeSet<AxiomId>> = BTreeSet::new();
    let mut explored: Vec<Explored> = Vec::new();
    let mut stats = SearchStats::default();
    let mut queue: VecDeque<BTreeSet<AxiomId>> = VecDeque::new();
    queue.push_back(BTreeSet::new());

    while let Some(path) = queue.pop_front() {
        match path_redundancy(&path, &explored) {
            Some(Redundancy::EqualPath) => {
                stats.pruned_equal_path += 1;
                continue;
            }
            Some(Redundancy::ClosedSubset) => {
                stats.pruned_closed_subset += 1;
                continue;
            }
            None => {}
        }
        if union_mode && !path.is_empty() {
            let remaining_covered = module_ids
                .iter()
                .all(|id| path.contains(id) || union.contains(id));
            if remaining_covered {
                stats.pruned_union_covered += 1;
                continue;
            }
        }
        let remainder = module.without(&path);
        if !oracle.entails(&remainder, goal)? {
            if path.is_empty() {
                return Err(Error::NotEntailed);
            }
            explored.push(Explored {
                path,
                expanded: false,
            });
            continue;
        }
        let justification = match found.iter().find(|j| j.is_disjoint(&path)) {
            Some(j) => {
                stats.reused_justifications += 1;
                j.clone()
            }
            None => single_justification(&remainder, goal, oracle, core)?,
        };
        stats.nodes_processed += 1;
        union.extend(justification.iter().cloned());
        found.insert(justification.clone());
        if union_mode && justification == *core {
            // Every justification contains the core; a justification that
            // *is* the core therefore sits inside all others, and their
            // minimality forces equality: it is the only one.
            stats.unique_justification_shortcut = true;
            return Ok(UnionOutcome {
                union,
                justifications: found,
                oracle_calls: oracle.calls() - before,
                stats,
            });
        }
        let branch: Vec<&AxiomId> = justification.difference(core).collect();
        for beta in branch.into_iter().rev() {
            let mut child = path.clone();
            child.insert(beta.clone());
            queue.push_front(child);
        }
        explored.push(Explored {
            path,
            expanded: true,
        });
    }

    Ok(UnionOutcome {
        union,
        justifications: found,
        oracle_calls: oracle.calls() - before,
        stats,
    })
}
