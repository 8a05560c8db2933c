//! Brute-force model semantics over bounded domains.
//!
//! This module evaluates concepts and axioms directly against explicitly
//! enumerated interpretations. It is deliberately definition-shaped — no
//! tableau, no saturation, no clever data structures — so it can serve as an
//! independent reference when cross-checking the real reasoning engines.
//!
//! Enumeration is exponential in `domain_size * |concept names|` plus
//! `domain_size^2 * |role names|`, so callers must keep signatures and
//! domains small (the test suites use domains of at most 3 elements over a
//! handful of names). A found countermodel refutes entailment outright;
//! exhausting all interpretations up to the bound only establishes
//! entailment relative to that bound.

use std::collections::BTreeMap;

use crate::model::{ConceptExpr, Gci, HasSignature, Ontology, Signature};

/// A finite interpretation. Concept extensions are bitmasks over domain
/// elements `0..domain_size`; role extensions are bitmasks over pairs, with
/// pair `(i, j)` at bit `i * domain_size + j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interpretation {
    pub domain_size: usize,
    pub concepts: BTreeMap<String, u64>,
    pub roles: BTreeMap<String, u64>,
}

impl Interpretation {
    fn domain_mask(&self) -> u64 {
        (1u64 << self.domain_size) - 1
    }

    /// Extension of a concept expression as a bitmask.
    pub fn eval(&self, c: &ConceptExpr) -> u64 {
        let dmask = self.domain_mask();
        match c {
            ConceptExpr::Top => dmask,
            ConceptExpr::Bot => 0,
            ConceptExpr::Name(n) => self.concepts.get(n).copied().unwrap_or(0),
            ConceptExpr::Not(inner) => !self.eval(inner) & dmask,
            ConceptExpr::And(cs) => cs.iter().fold(dmask, |m, c| m & self.eval(c)),
            ConceptExpr::Or(cs) => cs.iter().fold(0, |m, c| m | self.eval(c)),
            ConceptExpr::Some(r, inner) => {
                let rel = self.roles.get(r).copied().unwrap_or(0);
                let filler = self.eval(inner);
                let mut out = 0u64;
                for i in 0..self.domain_size {
                    let row = (rel >> (i * self.domain_size)) & dmask;
                    if row & filler != 0 {
                        out |= 1 << i;
                    }
                }
                out
            }
            ConceptExpr::All(r, inner) => {
                let rel = self.roles.get(r).copied().unwrap_or(0);
                let filler = self.eval(inner);
                let mut out = 0u64;
                for i in 0..self.domain_size {
                    let row = (rel >> (i * self.domain_size)) & dmask;
                    if row & !filler & dmask == 0 {
                        out |= 1 << i;
                    }
                }
                out
            }
        }
    }

    /// Does the inclusion hold everywhere in this interpretation?
    pub fn satisfies_gci(&self, g: &Gci) -> bool {
        self.eval(&g.lhs) & !self.eval(&g.rhs) & self.domain_mask() == 0
    }

    /// Is this a model of every axiom of the ontology?
    pub fn is_model(&self, o: &Ontology) -> bool {
        for (_, g) in o.gcis() {
            if !self.satisfies_gci(g) {
                return false;
            }
        }
        for (_, r) in o.role_inclusions() {
            let sub = self.roles.get(&r.sub).copied().unwrap_or(0);
            let sup = self.roles.get(&r.sup).copied().unwrap_or(0);
            if sub & !sup != 0 {
                return false;
            }
        }
        true
    }
}

/// Search for a model of `o` containing an element in `goal.lhs` but not in
/// `goal.rhs`, over domains of size `1..=max_domain`. Returns the first
/// countermodel found (smallest domain, then enumeration order).
pub fn find_countermodel(o: &Ontology, goal: &Gci, max_domain: usize) -> Option<Interpretation> {
    let mut sig = o.signature();
    sig.extend(&goal.signature());
    for d in 1..=max_domain {
        if let Some(m) = find_countermodel_at(o, goal, &sig, d) {
            return Some(m);
        }
    }
    None
}

/// True when no countermodel with at most `max_domain` elements exists.
///
/// This agrees with real entailment whenever the instance admits small
/// countermodels; it is used to cross-validate the reasoning engines on
/// suites built to stay within the bound.
pub fn entails_up_to(o: &Ontology, goal: &Gci, max_domain: usize) -> bool {
    find_countermodel(o, goal, max_domain).is_none()
}

fn find_countermodel_at(
    o: &Ontology,
    goal: &Gci,
    sig: &Signature,
    d: usize,
) -> Option<Interpretation> {
    let concept_names: Vec<&String> = sig.concepts.iter().collect();
    let role_names: Vec<&String> = sig.roles.iter().collect();
    let nc = concept_names.len();
    let nr = role_names.len();
    assert!(d * nc < 63 && d * d * nr < 63, "signature too large for bounded search");

    // Axioms whose truth is independent of role extensions can be checked
    // before the inner role loop, pruning most concept assignments early.
    let mentions_roles = |c: &ConceptExpr| !c.signature().roles.is_empty();
    let mut concept_only_gcis = Vec::new();
    let mut role_gcis = Vec::new();
    for (_, g) in o.gcis() {
        if mentions_roles(&g.lhs) || mentions_roles(&g.rhs) {
            role_gcis.push(g);
        } else {
            concept_only_gcis.push(g);
        }
    }
    let goal_concept_only = !mentions_roles(&goal.lhs) && !mentions_roles(&goal.rhs);
    let has_role_inclusions = o.role_inclusions().next().is_some();

    let concept_space = 1u64 << (d * nc);
    let role_space = 1u64 << (d * d * nr);

    let mut interp = Interpretation {
        domain_size: d,
        concepts: BTreeMap::new(),
        roles: BTreeMap::new(),
    };
    for r in &role_names {
        interp.roles.insert((*r).clone(), 0);
    }

    let dmask = (1u64 << d) - 1;
    'concepts: for cbits in 0..concept_space {
        for (k, name) in concept_names.iter().enumerate() {
            interp
                .concepts
                .insert((*name).clone(), (cbits >> (k * d)) & dmask);
        }
        for g in &concept_only_gcis {
            if !interp.satisfies_gci(g) {
                continue 'concepts;
            }
        }
        if goal_concept_only && interp.satisfies_gci(goal) {
            continue 'concepts;
        }
        if nr == 0 {
            if role_gcis.iter().all(|g| interp.satisfies_gci(g))
                && (goal_concept_only || !interp.satisfies_gci(goal))
            {
                return Some(interp);
            }
            continue 'concepts;
        }
        'roles: for rbits in 0..role_space {
            let pair_mask = (1u64 << (d * d)) - 1;
            for (k, name) in role_names.iter().enumerate() {
                interp
                    .roles
                    .insert((*name).clone(), (rbits >> (k * d * d)) & pair_mask);
            }
            if has_role_inclusions {
                for (_, r) in o.role_inclusions() {
                    let sub = interp.roles.get(&r.sub).copied().unwrap_or(0);
                    let sup = interp.roles.get(&r.sup).copied().unwrap_or(0);
                    if sub & !sup != 0 {
                        continue 'roles;
                    }
                }
            }
            for g in &role_gcis {
                if !interp.satisfies_gci(g) {
                    continue 'roles;
                }
            }
            if !interp.satisfies_gci(goal) {
                return Some(interp);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_goal, parse_ontology};

    fn check(onto: &str, goal: &str, max: usize) -> bool {
        let o = parse_ontology(onto).unwrap();
        let g = parse_goal(goal).unwrap();
        entails_up_to(&o, &g, max)
    }

    #[test]
    fn chain_is_entailed() {
        assert!(check("(sub A B)\n(sub B C)", "(sub A C)", 3));
    }

    #[test]
    fn converse_is_refuted() {
        assert!(!check("(sub A B)\n(sub B C)", "(sub C A)", 3));
    }

    #[test]
    fn empty_ontology_refutes_atomic_inclusion() {
        assert!(!check("", "(sub A B)", 1));
        assert!(check("", "(sub A A)", 3));
        assert!(check("", "(sub A Top)", 3));
        assert!(check("", "(sub Bot A)", 3));
    }

    #[test]
    fn existential_witness_needs_two_elements() {
        // A ⊑ ∃r.B and ∃r.B ⊑ C force A ⊑ C; a one-element countermodel
        // attempt fails once r must point at a B-element.
        assert!(check("(sub A (some r B))\n(sub (some r B) C)", "(sub A C)", 3));
        assert!(!check("(sub A (some r B))", "(sub A C)", 2));
    }

    #[test]
    fn universal_restriction_semantics() {
        // Elements with no r-successor satisfy (all r C) vacuously.
        assert!(!check("(sub A (all r C))", "(sub A (some r C))", 3));
    }

    #[test]
    fn role_inclusion_is_respected() {
        assert!(check(
            "(sub A (some r B))\n(rsub r s)\n(sub (some s B) C)",
            "(sub A C)",
            3
        ));
        assert!(!check(
            "(sub A (some r B))\n(sub (some s B) C)",
            "(sub A C)",
            3
        ));
    }

    #[test]
    fn negation_and_disjunction() {
        assert!(check("(sub A (or B C))\n(sub A (not B))", "(sub A C)", 3));
        assert!(!check("(sub A (or B C))", "(sub A C)", 3));
    }

    #[test]
    fn countermodel_is_a_model_violating_goal() {
        let o = parse_ontology("(sub A B)").unwrap();
        let g = parse_goal("(sub B A)").unwrap();
        let m = find_countermodel(&o, &g, 3).unwrap();
        assert!(m.is_model(&o));
        assert!(!m.satisfies_gci(&g));
    }
}
