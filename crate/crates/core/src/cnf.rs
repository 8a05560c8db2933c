//! A small CNF toolkit: a complete DPLL decision procedure plus minimal
//! unsatisfiable subset (MUS) queries, sized for the desk-scale formulas the
//! trace encoding produces.
//!
//! Two flavours of MUS query are provided. The plain ones treat every clause
//! of the formula as removable. The constrained ones fix a *soft* family of
//! clause indices and keep everything else as immutable background — minimal
//! unsatisfiable subsets are then subsets of the soft family only. The
//! pinpointing pipeline uses the constrained flavour with the axiom selector
//! units as the soft family, which is what makes minimal unsatisfiable
//! subsets line up one-to-one with justifications (a plain MUS may pin a
//! derivation detour whose axiom set is not minimal).

use std::collections::BTreeSet;
use std::cell::Cell;

use crate::error::{Error, Result};

/// A literal: positive or negative 1-based variable index.
pub type Lit = i32;

#[derive(Debug, Clone, Default)]
pub struct Cnf {
    pub n_vars: usize,
    pub clauses: Vec<Vec<Lit>>,
}

impl Cnf {
    pub fn new(n_vars: usize) -> Self {
        Cnf {
            n_vars,
            clauses: Vec::new(),
        }
    }

    pub fn push(&mut self, clause: Vec<Lit>) -> usize {
        debug_assert!(clause
            .iter()
            .all(|&l| l != 0 && (l.unsigned_abs() as usize) <= self.n_vars));
        self.clauses.push(clause);
        self.clauses.len() - 1
    }

    pub fn all_indices(&self) -> BTreeSet<usize> {
        (0..self.clauses.len()).collect()
    }
}

/// Counts decision-procedure invocations, like the tableau oracle counts
/// entailment tests.
pub struct SatOracle {
    calls: Cell<u64>,
}

impl Default for SatOracle {
    fn default() -> Self {
        Self::new()
    }
}

impl SatOracle {
    pub fn new() -> Self {
        SatOracle {
            calls: Cell::new(0),
        }
    }

    pub fn calls(&self) -> u64 {
        self.calls.get()
    }

    /// Satisfiability of the whole formula.
    pub fn sat(&self, f: &Cnf) -> bool {
        self.sat_subset(f, &f.all_indices())
    }

    /// Satisfiability of the clause subset given by index.
    pub fn sat_subset(&self, f: &Cnf, active: &BTreeSet<usize>) -> bool {
        self.solve_subset(f, active).is_some()
    }

    /// Like [`SatOracle::sat_subset`], returning a model when satisfiable.
    pub fn solve_subset(&self, f: &Cnf, active: &BTreeSet<usize>) -> Option<Vec<bool>> {
        self.calls.set(self.calls.get() + 1);
        let clauses: Vec<&[Lit]> = active.iter().map(|&i| f.clauses[i].as_slice()).collect();
        let mut assign: Vec<i8> = vec![0; f.n_vars + 1];
        if dpll(&clauses, &mut assign) {
            Some(assign.iter().skip(1).map(|&v| v == 1).collect())
        } else {
            None
        }
    }

    /// Does `target` belong to at least one minimal unsatisfiable subset of
    /// the formula (all clauses removable)?
    pub fn mus_membership(&self, f: &Cnf, target: usize) -> Result<bool> {
        let all = f.all_indices();
        if self.sat_subset(f, &all) {
            return Err(Error::PreconditionViolated(
                "the formula is satisfiable, so it has no minimal unsatisfiable subsets".into(),
            ));
        }
        let mut soft = all;
        soft.remove(&target);
        self.membership(f, &BTreeSet::new(), &soft, target)
    }

    /// Does soft clause `target` belong to at least one minimal
    /// unsatisfiable subset drawn from `soft ∪ {target}`, with every clause
    /// outside that family always present?
    pub fn constrained_mus_membership(
        &self,
        f: &Cnf,
        soft: &BTreeSet<usize>,
        target: usize,
    ) -> Result<bool> {
        let hard: BTreeSet<usize> = f
            .all_indices()
            .difference(soft)
            .copied()
            .collect();
        let mut rest = soft.clone();
        rest.remove(&target);
        let mut everything = hard.clone();
        everything.extend(soft.iter().copied());
        everything.insert(target);
        if self.sat_subset(f, &everything) {
            return Err(Error::PreconditionViolated(
                "the formula is satisfiable, so it has no minimal unsatisfiable subsets".into(),
            ));
        }
        self.membership(f, &hard, &rest, target)
    }

    /// `target` is in some minimal unsatisfiable subset iff some satisfiable
    /// `S ⊆ universe` becomes unsatisfiable with `target` added (everything
    /// in `hard` is always on). It suffices to test maximal satisfiable
    /// subsets, enumerated here with blocking clauses in a meta-formula;
    /// small universes are searched exhaustively instead.
    fn membership(
        &self,
        f: &Cnf,
        hard: &BTreeSet<usize>,
        universe: &BTreeSet<usize>,
        target: usize,
    ) -> Result<bool> {
        let hard_and = |s: &BTreeSet<usize>| -> BTreeSet<usize> {
            hard.union(s).copied().collect()
        };
        if f.clauses.len() < 20 {
            let items: Vec<usize> = universe.iter().copied().collect();
            for mask in 0..(1u64 << items.len()) {
                let s: BTreeSet<usize> = items
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, &c)| c)
                    .collect();
                if self.sat_subset(f, &hard_and(&s)) {
                    let mut with = s;
                    with.insert(target);
                    if !self.sat_subset(f, &hard_and(&with)) {
                        return Ok(true);
                    }
                }
            }
            return Ok(false);
        }

        // Meta-variable i+1 <=> universe item i is in the candidate.
        let items: Vec<usize> = universe.iter().copied().collect();
        let mut meta = Cnf::new(items.len());
        loop {
            let model = match self.solve_subset(&meta, &meta.all_indices()) {
                Some(m) => m,
                None => return Ok(false), // candidate space exhausted
            };
            let seed: BTreeSet<usize> = items
                .iter()
                .enumerate()
                .filter(|(i, _)| model.get(*i).copied().unwrap_or(false))
                .map(|(_, &c)| c)
                .collect();
            if self.sat_subset(f, &hard_and(&seed)) {
                // Grow to a maximal satisfiable subset, then test target.
                let mut s = seed;
                for &c in &items {
                    if !s.contains(&c) {
                        let mut t = s.clone();
                        t.insert(c);
                        if self.sat_subset(f, &hard_and(&t)) {
                            s = t;
                        }
                    }
                }
                let mut with = s.clone();
                with.insert(target);
                if !self.sat_subset(f, &hard_and(&with)) {
                    return Ok(true);
                }
                // Block this maximal set and everything below it.
                let clause: Vec<Lit> = items
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !s.contains(c))
                    .map(|(i, _)| (i + 1) as Lit)
                    .collect();
                if clause.is_empty() {
                    return Ok(false); // the whole universe is satisfiable with target
                }
                meta.push(clause);
            } else {
                // Shrink to a small unsatisfiable set and block everything
                // above it.
                let mut core = seed;
                for &c in &items {
                    if core.contains(&c) {
                        let mut t = core.clone();
                        t.remove(&c);
                        if !self.sat_subset(f, &hard_and(&t)) {
                            core = t;
                        }
                    }
                }
                let clause: Vec<Lit> = items
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| core.contains(c))
                    .map(|(i, _)| -((i + 1) as Lit))
                    .collect();
                meta.push(clause);
            }
        }
    }

    /// All minimal unsatisfiable subsets, every clause removable.
    pub fn enumerate_all_mus(&self, f: &Cnf) -> Result<BTreeSet<BTreeSet<usize>>> {
        self.enumerate_constrained_mus(f, &f.all_indices())
    }

    /// All minimal unsatisfiable subsets of the soft family, clauses outside
    /// it always present. Exhaustive over the soft powerset, so the family
    /// is capped at 22 members.
    pub fn enumerate_constrained_mus(
        &self,
        f: &Cnf,
        soft: &BTreeSet<usize>,
    ) -> Result<BTreeSet<BTreeSet<usize>>> {
        if soft.len() > 22 {
            return Err(Error::ResourceLimit(format!(
                "minimal-subset enumeration over {} removable clauses (cap 22)",
                soft.len()
            )));
        }
        let hard: BTreeSet<usize> = f.all_indices().difference(soft).copied().collect();
        let items: Vec<usize> = soft.iter().copied().collect();
        let mut minimal_masks: Vec<u64> = Vec::new();
        for mask in 0..(1u64 << items.len()) {
            if minimal_masks.iter().any(|m| m & mask == *m) {
                continue; // strictly contains a known minimal subset
            }
            let mut active = hard.clone();
            active.extend(
                items
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, &c)| c),
            );
            if !self.sat_subset(f, &active) {
                minimal_masks.push(mask);
            }
        }
        Ok(minimal_masks
            .into_iter()
            .map(|mask| {
                items
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, &c)| c)
                    .collect()
            })
            .collect())
    }
}

/// Plain recursive DPLL with unit propagation. `assign[v]` is 0 unknown,
/// 1 true, -1 false.
fn dpll(clauses: &[&[Lit]], assign: &mut Vec<i8>) -> bool {
    loop {
        let mut forced: Option<Lit> = None;
        let mut all_satisfied = true;
        for clause in clauses {
            let mut satisfied = false;
            let mut unassigned: Option<Lit> = None;
            let mut n_unassigned = 0;
            for &l in *clause {
                match assign[l.unsigned_abs() as usize] {
                    0 => {
                        n_unassigned += 1;
                        unassigned = Some(l);
                    }
                    v if (v == 1) == (l > 0) => {
                        satisfied = true;
                        break;
                    }
                    _ => {}
                }
            }
            if satisfied {
                continue;
            }
            match n_unassigned {
                0 => return false, // conflict
                1 => {
                    forced = Some(unassigned.unwrap());
                    all_satisfied = false;
                    break;
                }
                _ => all_satisfied = false,
            }
        }
        match forced {
            Some(l) => {
                assign[l.unsigned_abs() as usize] = if l > 0 { 1 } else { -1 };
                continue;
            }
            None => {
                if all_satisfied {
                    return true;
                }
                break;
            }
        }
    }
    // Branch on the first unassigned variable of an unsatisfied clause,
    // trying `true` first so that models are biased towards large sets when
    // variables encode set membership.
    let var = clauses
        .iter()
        .flat_map(|c| c.iter())
        .map(|l| l.unsigned_abs() as usize)
        .find(|&v| assign[v] == 0)
        .expect("some variable is unassigned");
    for value in [1i8, -1] {
        let mut trial = assign.clone();
        trial[var] = value;
        if dpll(clauses, &mut trial) {
            *assign = trial;
            return true;
        }
    }
    false
}
