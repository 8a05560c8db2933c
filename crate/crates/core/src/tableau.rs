//! Tableau-based entailment checking.
//!
//! `O ⊨ C ⊑ D` is decided by testing satisfiability of `C ⊓ ¬D` against the
//! internalized TBox: every GCI `E ⊑ F` contributes the constraint `¬E ⊔ F`
//! to every individual. Without inverse roles a node's satisfiability is a
//! function of its label alone, so instead of materializing a completion
//! tree the search works directly on label sets: conjunctions are closed
//! off, disjunctions branch, and each existential spawns an independent
//! subproblem for the successor label (filler plus the universal
//! restrictions propagated along the role hierarchy). Subset blocking — a
//! label contained in an in-progress ancestor label is satisfiable by
//! cycling back — guarantees termination.
//!
//! Verdicts are memoized across branches, which is what keeps disjunction-
//! heavy inputs tractable. A satisfiable verdict obtained through blocking
//! is provisional until the blocking ancestor completes, so each result
//! carries the depth of the shallowest in-progress label it relied on and
//! is cached only once that dependency is discharged; unsatisfiable
//! verdicts never rest on blocking and are cached unconditionally.
//!
//! The oracle is exact: it never approximates, and it reports
//! [`Error::ResourceLimit`] instead of answering when the node budget runs
//! out. Each [`Oracle`] carries a call counter (the pinpointing algorithms
//! are compared by how many entailment tests they spend), so an oracle is
//! meant to be instantiated per query and not shared across threads.

use std::cell::Cell;
use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::model::{ConceptExpr, Gci, HasSignature, Ontology};

/// Default ceiling on label expansions per `entails` call.
pub const DEFAULT_NODE_BUDGET: usize = 1_000_000;

/// Ceiling on recursion depth; guards the stack.
const MAX_BRANCH_DEPTH: usize = 10_000;

/// Sentinel for "relies on no in-progress ancestor".
const NO_DEP: usize = usize::MAX;

/// Entailment oracle with a node budget and a call counter.
pub struct Oracle {
    node_budget: usize,
    calls: Cell<u64>,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle::new()
    }
}

impl Oracle {
    pub fn new() -> Self {
        Oracle::with_budget(DEFAULT_NODE_BUDGET)
    }

    pub fn with_budget(node_budget: usize) -> Self {
        Oracle {
            node_budget,
            calls: Cell::new(0),
        }
    }

    /// Number of `entails` calls made through this oracle so far.
    pub fn calls(&self) -> u64 {
        self.calls.get()
    }

    /// Does every model of `o` satisfy `goal`?
    pub fn entails(&self, o: &Ontology, goal: &Gci) -> Result<bool> {
        self.calls.set(self.calls.get() + 1);
        let tableau = Tableau::internalize(o, &goal.signature().roles, self.node_budget);
        let mut search = Search::new();
        let root = tableau.root_label(goal);
        Ok(!tableau.satisfiable(root, &mut search)?)
    }

    /// All entailed inclusions `A ⊑ B` between distinct concept names of the
    /// ontology's signature. One verdict cache is shared across the queries —
    /// they differ only in the root label, so most of the work overlaps.
    pub fn classify(&self, o: &Ontology) -> Result<BTreeSet<Gci>> {
        let names = o.signature().concepts;
        let tableau = Tableau::internalize(o, &BTreeSet::new(), self.node_budget);
        let mut search = Search::new();
        let mut out = BTreeSet::new();
        for a in &names {
            for b in &names {
                if a != b {
                    let goal = Gci::atomic(a.clone(), b.clone());
                    self.calls.set(self.calls.get() + 1);
                    search.created = 0;
                    if !tableau.satisfiable(tableau.root_label(&goal), &mut search)? {
                        out.insert(goal);
                    }
                }
            }
        }
        Ok(out)
    }
}

/// `r ⊑* s` relation: reflexive-transitive closure of the declared role
/// inclusions, covering every role mentioned in the ontology or the goal.
fn role_closure(o: &Ontology, extra_roles: &BTreeSet<String>) -> BTreeMap<String, BTreeSet<String>> {
    let mut roles: BTreeSet<String> = o.signature().roles;
    roles.extend(extra_roles.iter().cloned());
    let edges: Vec<(String, String)> = o
        .role_inclusions()
        .map(|(_, r)| (r.sub.clone(), r.sup.clone()))
        .collect();
    let mut closure = BTreeMap::new();
    for r in &roles {
        let mut reach: BTreeSet<String> = BTreeSet::new();
        let mut stack = vec![r.clone()];
        while let Some(cur) = stack.pop() {
            if reach.insert(cur.clone()) {
                for (sub, sup) in &edges {
                    if *sub == cur && !reach.contains(sup) {
                        stack.push(sup.clone());
                    }
                }
            }
        }
        closure.insert(r.clone(), reach);
    }
    closure
}

type Label = BTreeSet<ConceptExpr>;

struct Tableau {
    tbox_label: Label,
    closure: BTreeMap<String, BTreeSet<String>>,
    node_budget: usize,
}

/// Mutable state of one satisfiability search: the labels of in-progress
/// ancestors (for blocking), the memo table, and the budget spent.
struct Search {
    path: Vec<Label>,
    cache: BTreeMap<Label, bool>,
    created: usize,
}

impl Search {
    fn new() -> Self {
        Search {
            path: Vec::new(),
            cache: BTreeMap::new(),
            created: 0,
        }
    }
}

impl Tableau {
    fn internalize(o: &Ontology, extra_roles: &BTreeSet<String>, node_budget: usize) -> Self {
        let mut tbox_label: Label = BTreeSet::new();
        for (_, g) in o.gcis() {
            let constraint = nnf(&ConceptExpr::Or(vec![
                ConceptExpr::not(g.lhs.clone()),
                g.rhs.clone(),
            ]));
            if constraint != ConceptExpr::Top {
                tbox_label.insert(constraint);
            }
        }
        Tableau {
            tbox_label,
            closure: role_closure(o, extra_roles),
            node_budget,
        }
    }

    fn root_label(&self, goal: &Gci) -> Label {
        let mut root = self.tbox_label.clone();
        root.insert(nnf(&goal.lhs));
        root.insert(nnf(&ConceptExpr::not(goal.rhs.clone())));
        root
    }

    /// Is `r ⊑* s`?
    fn subrole(&self, r: &str, s: &str) -> bool {
        r == s || self.closure.get(r).map_or(false, |set| set.contains(s))
    }

    fn satisfiable(&self, label: Label, s: &mut Search) -> Result<bool> {
        self.sat(label, s, 0).map(|(v, _)| v)
    }

    /// Satisfiability of one label. The second component of the result is
    /// the shallowest index into `s.path` the verdict relied on through
    /// blocking, or [`NO_DEP`]; only discharged verdicts enter the cache.
    fn sat(&self, mut label: Label, s: &mut Search, depth: usize) -> Result<(bool, usize)> {
        s.created += 1;
        if s.created > self.node_budget {
            return Err(Error::ResourceLimit(format!(
                "tableau node budget of {} exceeded",
                self.node_budget
            )));
        }
        if depth >= MAX_BRANCH_DEPTH {
            return Err(Error::ResourceLimit("tableau branch depth exceeded".into()));
        }

        // Close off conjunctions; members can be conjunctions themselves.
        loop {
            let additions: Vec<ConceptExpr> = label
                .iter()
                .filter_map(|c| match c {
                    ConceptExpr::And(cs) => Some(cs.iter().filter(|m| !label.contains(m))),
                    _ => None,
                })
                .flatten()
                .cloned()
                .collect();
            if additions.is_empty() {
                break;
            }
            label.extend(additions);
        }
        if has_clash(&label) {
            return Ok((false, NO_DEP));
        }
        if let Some(&v) = s.cache.get(&label) {
            return Ok((v, NO_DEP));
        }

        // Branch on the first unsatisfied disjunction.
        let open_or = label.iter().find_map(|c| match c {
            ConceptExpr::Or(cs) if !cs.iter().any(|d| label.contains(d)) => Some(cs.clone()),
            _ => None,
        });
        if let Some(cs) = open_or {
            for d in cs {
                let mut branch = label.clone();
                branch.insert(d);
                let (ok, dep) = self.sat(branch, s, depth + 1)?;
                if ok {
                    if dep == NO_DEP {
                        s.cache.insert(label, true);
                    }
                    return Ok((true, dep));
                }
            }
            s.cache.insert(label, false);
            return Ok((false, NO_DEP));
        }

        // Propositionally complete: the label is satisfiable iff every
        // existential's successor label is. A label subsumed by an
        // in-progress ancestor closes into a cycle instead of recursing.
        if let Some(d) = s.path.iter().rposition(|anc| label.is_subset(anc)) {
            return Ok((true, d));
        }
        let exists: Vec<(String, ConceptExpr)> = label
            .iter()
            .filter_map(|c| match c {
                ConceptExpr::Some(r, f) => Some((r.clone(), (**f).clone())),
                _ => None,
            })
            .collect();
        if exists.is_empty() {
            s.cache.insert(label, true);
            return Ok((true, NO_DEP));
        }

        let my_depth = s.path.len();
        s.path.push(label.clone());
        let mut dep = NO_DEP;
        let mut verdict = true;
        for (r, f) in exists {
            let mut succ = self.tbox_label.clone();
            succ.insert(f);
            for c in &label {
                if let ConceptExpr::All(sr, g) = c {
                    if self.subrole(&r, sr) {
                        succ.insert((**g).clone());
                    }
                }
            }
            let (ok, dp) = self.sat(succ, s, depth + 1)?;
            if !ok {
                verdict = false;
                break;
            }
            dep = dep.min(dp);
        }
        s.path.pop();
        if !verdict {
            s.cache.insert(label, false);
            return Ok((false, NO_DEP));
        }
        if dep >= my_depth {
            // Any blocking cycles ran through this very label, and it has
            // now completed: the verdict stands on its own.
            s.cache.insert(label, true);
            return Ok((true, NO_DEP));
        }
        Ok((true, dep))
    }
}

fn has_clash(label: &BTreeSet<ConceptExpr>) -> bool {
    if label.contains(&ConceptExpr::Bot) {
        return true;
    }
    for c in label {
        if let ConceptExpr::Not(inner) = c {
            if label.contains(inner) {
                return true;
            }
        }
    }
    false
}

// ===== negation normal form =====

/// Negation normal form with light canonicalization: negation pushed onto
/// concept names, nested conjunctions/disjunctions flattened, duplicates
/// removed, `Top`/`Bot` absorbed, and complementary pairs collapsed.
pub fn nnf(c: &ConceptExpr) -> ConceptExpr {
    match c {
        ConceptExpr::Top | ConceptExpr::Bot | ConceptExpr::Name(_) => c.clone(),
        ConceptExpr::And(cs) => conj(cs.iter().map(nnf).collect()),
        ConceptExpr::Or(cs) => disj(cs.iter().map(nnf).collect()),
        ConceptExpr::Some(r, f) => ConceptExpr::some(r.clone(), nnf(f)),
        ConceptExpr::All(r, f) => ConceptExpr::all(r.clone(), nnf(f)),
        ConceptExpr::Not(inner) => match &**inner {
            ConceptExpr::Top => ConceptExpr::Bot,
            ConceptExpr::Bot => ConceptExpr::Top,
            ConceptExpr::Name(_) => ConceptExpr::not((**inner).clone()),
            ConceptExpr::Not(c2) => nnf(c2),
            ConceptExpr::And(cs) => disj(
                cs.iter()
                    .map(|m| nnf(&ConceptExpr::not(m.clone())))
                    .collect(),
            ),
            ConceptExpr::Or(cs) => conj(
                cs.iter()
                    .map(|m| nnf(&ConceptExpr::not(m.clone())))
                    .collect(),
            ),
            ConceptExpr::Some(r, f) => {
                ConceptExpr::all(r.clone(), nnf(&ConceptExpr::not((**f).clone())))
            }
            ConceptExpr::All(r, f) => {
                ConceptExpr::some(r.clone(), nnf(&ConceptExpr::not((**f).clone())))
            }
        },
    }
}

/// Complement of an NNF concept, still in NNF.
fn complement(c: &ConceptExpr) -> ConceptExpr {
    nnf(&ConceptExpr::not(c.clone()))
}

fn conj(parts: Vec<ConceptExpr>) -> ConceptExpr {
    let mut set: BTreeSet<ConceptExpr> = BTreeSet::new();
    for p in parts {
        match p {
            ConceptExpr::Top => {}
            ConceptExpr::Bot => return ConceptExpr::Bot,
            ConceptExpr::And(cs) => set.extend(cs),
            other => {
                set.insert(other);
            }
        }
    }
    for m in &set {
        if set.contains(&complement(m)) {
            return ConceptExpr::Bot;
        }
    }
    ConceptExpr::and(set.into_iter().collect())
}

fn disj(parts: Vec<ConceptExpr>) -> ConceptExpr {
    let mut set: BTreeSet<ConceptExpr> = BTreeSet::new();
    for p in parts {
        match p {
            ConceptExpr::Bot => {}
            ConceptExpr::Top => return ConceptExpr::Top,
            ConceptExpr::Or(cs) => set.extend(cs),
            other => {
                set.insert(other);
            }
        }
    }
    for m in &set {
        if set.contains(&complement(m)) {
            return ConceptExpr::Top;
        }
    }
    ConceptExpr::or(set.into_iter().collect())
}
