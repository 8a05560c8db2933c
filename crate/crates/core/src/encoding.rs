//! Propositional encoding of a saturation trace.
//!
//! Every ontology axiom β gets a selector variable p_β (variables 1..|O|, in
//! axiom order), every derived sequent a variable on first occurrence in
//! trace order. Each trace step becomes one clause: negated premise and
//! selector literals, positive conclusion literal; `init` facts become
//! positive units. The formula ψ_α adds a unit p_β per axiom and the single
//! negative unit ¬p_α for the goal sequent, so ψ_α is unsatisfiable exactly
//! when the recorded derivations force the goal.
//!
//! Justification queries treat the selector units as the removable family
//! and everything else as background: a subset S of axioms entails the goal
//! iff the background plus S's units is unsatisfiable, so the minimal
//! unsatisfiable selector subsets are precisely the justifications. Asking
//! instead for minimal unsatisfiable subsets over *all* clauses would
//! overcount: a derivation may route through a redundant axiom (say X₁ ⊑ X₂
//! next to an axiom already giving X₂) and the step clauses of the direct
//! route need not be part of that minimal clause set.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::cnf::{Cnf, Lit, SatOracle};
use crate::error::{Error, Result};
use crate::model::{AxiomId, Gci, Ontology};
use crate::saturation::{saturate, InferenceTrace};

#[derive(Debug, Clone)]
pub struct PinpointingFormula {
    pub cnf: Cnf,
    /// Selector variable of every ontology axiom (also out-of-scope ones).
    pub axiom_vars: BTreeMap<AxiomId, usize>,
    /// Clause index of the unit p_β, for axioms still in scope.
    pub axiom_units: BTreeMap<AxiomId, usize>,
    /// Variable of the goal sequent (fresh and unconstrained when the trace
    /// never concluded the goal — the formula is then satisfiable).
    pub goal_var: usize,
    /// Clause index of the unit ¬p_α.
    pub goal_clause: usize,
}

pub fn encode(trace: &InferenceTrace, o: &Ontology) -> PinpointingFormula {
    let mut axiom_vars = BTreeMap::new();
    for (i, ax) in o.iter().enumerate() {
        axiom_vars.insert(ax.id.clone(), i + 1);
    }
    let mut n_vars = o.len();
    let mut seq_vars: BTreeMap<usize, usize> = BTreeMap::new();
    let mut cnf = Cnf::new(0);
    for step in &trace.steps {
        let mut clause: Vec<Lit> = Vec::new();
        for p in &step.premises {
            let v = *seq_vars.entry(*p).or_insert_with(|| {
                n_vars += 1;
                n_vars
            });
            clause.push(-(v as Lit));
        }
        for a in &step.axioms {
            clause.push(-(axiom_vars[a] as Lit));
        }
        let v = *seq_vars.entry(step.conclusion).or_insert_with(|| {
            n_vars += 1;
            n_vars
        });
        clause.push(v as Lit);
        cnf.clauses.push(clause);
    }
    let mut axiom_units = BTreeMap::new();
    for ax in o.iter() {
        let idx = cnf.clauses.len();
        cnf.clauses.push(vec![axiom_vars[&ax.id] as Lit]);
        axiom_units.insert(ax.id.clone(), idx);
    }
    let goal_var = match trace.goal_sequent {
        Some(s) => seq_vars[&s],
        None => {
            n_vars += 1;
            n_vars
        }
    };
    let goal_clause = cnf.clauses.len();
    cnf.clauses.push(vec![-(goal_var as Lit)]);
    cnf.n_vars = n_vars;
    PinpointingFormula {
        cnf,
        axiom_vars,
        axiom_units,
        goal_var,
        goal_clause,
    }
}

impl PinpointingFormula {
    /// Axioms whose selector unit is still part of the formula.
    pub fn axioms_in_scope(&self) -> BTreeSet<AxiomId> {
        self.axiom_units.keys().cloned().collect()
    }

    /// Clause indices of the selector units — the removable family for
    /// justification queries.
    pub fn selector_units(&self) -> BTreeSet<usize> {
        self.axiom_units.values().copied().collect()
    }

    /// Keep only the clauses backward-reachable from the goal variable.
    /// Variable numbering is preserved; selector units of unreachable axioms
    /// are dropped (such axioms occur in no justification). Neither the
    /// satisfiability status nor the minimal unsatisfiable selector subsets
    /// change.
    pub fn restrict_to_cone(&self) -> PinpointingFormula {
        let positive_var = |clause: &[Lit]| -> Option<usize> {
            clause.iter().find(|&&l| l > 0).map(|&l| l as usize)
        };
        let mut reachable: BTreeSet<usize> = [self.goal_var].into();
        loop {
            let mut changed = false;
            for clause in &self.cnf.clauses {
                if let Some(v) = positive_var(clause) {
                    if reachable.contains(&v) {
                        for &l in clause {
                            if l < 0 && reachable.insert(l.unsigned_abs() as usize) {
                                changed = true;
                            }
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let mut kept = Cnf::new(self.cnf.n_vars);
        let mut index_map: BTreeMap<usize, usize> = BTreeMap::new();
        for (i, clause) in self.cnf.clauses.iter().enumerate() {
            let keep = match positive_var(clause) {
                Some(v) => reachable.contains(&v),
                None => true, // ¬p_α
            };
            if keep {
                index_map.insert(i, kept.clauses.len());
                kept.clauses.push(clause.clone());
            }
        }
        let axiom_units = self
            .axiom_units
            .iter()
            .filter_map(|(id, idx)| index_map.get(idx).map(|&n| (id.clone(), n)))
            .collect();
        PinpointingFormula {
            cnf: kept,
            axiom_vars: self.axiom_vars.clone(),
            axiom_units,
            goal_var: self.goal_var,
            goal_clause: index_map[&self.goal_clause],
        }
    }

    /// Standard DIMACS rendering, with comments binding selector variables
    /// to axiom ids so external tools can interpret the units.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        for (id, var) in &self.axiom_vars {
            if self.axiom_units.contains_key(id) {
                let _ = writeln!(out, "c axiom {id} var {var}");
            }
        }
        let _ = writeln!(out, "c goal var {}", self.goal_var);
        let _ = writeln!(out, "p cnf {} {}", self.cnf.n_vars, self.cnf.clauses.len());
        for clause in &self.cnf.clauses {
            for l in clause {
                let _ = write!(out, "{l} ");
            }
            let _ = writeln!(out, "0");
        }
        out
    }
}

/// The axioms that occur in at least one justification, decided per axiom by
/// membership of its selector unit in some minimal unsatisfiable selector
/// subset of the cone-restricted ψ_α.
pub fn union_via_membership(o: &Ontology, goal: &Gci) -> Result<BTreeSet<AxiomId>> {
    let trace = saturate(o, goal)?;
    if !trace.entailed() {
        return Err(Error::NotEntailed);
    }
    let f = encode(&trace, o).restrict_to_cone();
    let oracle = SatOracle::new();
    let soft = f.selector_units();
    let mut union = BTreeSet::new();
    for (id, &unit) in &f.axiom_units {
        if oracle.constrained_mus_membership(&f.cnf, &soft, unit)? {
            union.insert(id.clone());
        }
    }
    Ok(union)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brute;
    use crate::parser::{parse_goal, parse_ontology};
    use crate::tableau::Oracle;

    fn formula(onto: &str, goal: &str) -> (Ontology, Gci, PinpointingFormula) {
        let o = parse_ontology(onto).unwrap();
        let g = parse_goal(goal).unwrap();
        let t = saturate(&o, &g).unwrap();
        let f = encode(&t, &o);
        (o, g, f)
    }

    #[test]
    fn chain_formula_is_unsatisfiable_with_expected_shape() {
        let (_, _, f) = formula("(sub A B)\n(sub B C)", "(sub A C)");
        assert_eq!(f.axiom_vars[&AxiomId::new("ax1")], 1);
        assert_eq!(f.axiom_vars[&AxiomId::new("ax2")], 2);
        assert!(!SatOracle::new().sat(&f.cnf));
        // Units: one per axiom plus the negated goal.
        assert_eq!(f.cnf.clauses[f.goal_clause], vec![-(f.goal_var as i32)]);
        for (id, &idx) in &f.axiom_units {
            assert_eq!(f.cnf.clauses[idx], vec![f.axiom_vars[id] as i32]);
        }
        // The initialization fact A ⊢ A is a positive unit.
        assert!(f
            .cnf
            .clauses
            .iter()
            .any(|c| c.len() == 1 && c[0] > 0 && c[0] as usize > 2));
    }

    #[test]
    fn formula_of_a_non_entailed_goal_is_satisfiable() {
        let (_, _, f) = formula("(sub A B)", "(sub B A)");
        assert!(SatOracle::new().sat(&f.cnf));
    }

    #[test]
    fn unsatisfiability_matches_entailment() {
        let cases = [
            ("(sub A B)\n(sub B C)\n(sub C D)", "(sub A D)"),
            ("(sub A B)\n(sub C D)", "(sub A D)"),
            ("(sub A (some r B))\n(sub (some r B) C)", "(sub A C)"),
            ("(sub A (or B C))\n(sub B D)\n(sub C D)", "(sub A D)"),
            ("(sub A (or B C))\n(sub B D)", "(sub A D)"),
            ("(sub A (not A))", "(sub A Bot)"),
        ];
        let tableau = Oracle::new();
        let sat = SatOracle::new();
        for (onto, goal) in cases {
            let o = parse_ontology(onto).unwrap();
            let g = parse_goal(goal).unwrap();
            let t = saturate(&o, &g).unwrap();
            let f = encode(&t, &o);
            assert_eq!(
                !sat.sat(&f.cnf),
                tableau.entails(&o, &g).unwrap(),
                "{onto} / {goal}"
            );
        }
    }

    #[test]
    fn cone_restriction_drops_unrelated_axioms() {
        let (_, _, f) = formula("(sub A B)\n(sub B C)\n(sub E F)", "(sub A C)");
        assert_eq!(f.axioms_in_scope().len(), 3);
        let cone = f.restrict_to_cone();
        assert_eq!(
            cone.axioms_in_scope(),
            [AxiomId::new("ax1"), AxiomId::new("ax2")].into()
        );
        assert!(!SatOracle::new().sat(&cone.cnf));
        // Variable numbering survives the restriction.
        assert_eq!(cone.axiom_vars, f.axiom_vars);
        assert_eq!(cone.goal_var, f.goal_var);
    }

    #[test]
    fn membership_answers_survive_cone_restriction() {
        let (_, _, f) = formula(
            "(sub A B)\n(sub B C)\n(sub A C)\n(sub A (some r D))\n(sub E F)",
            "(sub A C)",
        );
        let cone = f.restrict_to_cone();
        let oracle = SatOracle::new();
        for (id, &unit) in &cone.axiom_units {
            let full = oracle
                .constrained_mus_membership(&f.cnf, &f.selector_units(), f.axiom_units[id])
                .unwrap();
            let restricted = oracle
                .constrained_mus_membership(&cone.cnf, &cone.selector_units(), unit)
                .unwrap();
            assert_eq!(full, restricted, "axiom {id}");
        }
    }

    #[test]
    fn union_matches_the_worked_examples() {
        // Two overlapping justifications: {ax3} and {ax1, ax2}; ax4 is noise.
        let o = parse_ontology("(sub A B)\n(sub B C)\n(sub A C)\n(sub A (some r D))").unwrap();
        let g = parse_goal("(sub A C)").unwrap();
        assert_eq!(
            union_via_membership(&o, &g).unwrap(),
            [AxiomId::new("ax1"), AxiomId::new("ax2"), AxiomId::new("ax3")].into()
        );
        // Single justification.
        let o = parse_ontology("(sub A B)\n(sub B C)").unwrap();
        assert_eq!(
            union_via_membership(&o, &g).unwrap(),
            [AxiomId::new("ax1"), AxiomId::new("ax2")].into()
        );
    }

    #[test]
    fn union_rejects_non_entailed_goals() {
        let o = parse_ontology("(sub A B)").unwrap();
        let g = parse_goal("(sub B A)").unwrap();
        assert!(matches!(
            union_via_membership(&o, &g),
            Err(Error::NotEntailed)
        ));
    }

    /// A derivation may route through a redundant axiom; selector-level
    /// minimality must keep it out of the union even though a clause-level
    /// minimal core of ψ_α exists that uses it.
    #[test]
    fn redundant_chain_axiom_stays_out_of_the_union() {
        let o = parse_ontology("(sub A (and X1 X2))\n(sub X2 B)\n(sub X1 X2)").unwrap();
        let g = parse_goal("(sub A B)").unwrap();
        assert_eq!(
            union_via_membership(&o, &g).unwrap(),
            [AxiomId::new("ax1"), AxiomId::new("ax2")].into()
        );
    }

    #[test]
    fn tautological_goal_has_empty_union_and_the_empty_justification() {
        let o = parse_ontology("(sub A B)").unwrap();
        let g = parse_goal("(sub C C)").unwrap();
        assert_eq!(union_via_membership(&o, &g).unwrap(), BTreeSet::new());
        let t = saturate(&o, &g).unwrap();
        let f = encode(&t, &o).restrict_to_cone();
        let muses = SatOracle::new()
            .enumerate_constrained_mus(&f.cnf, &f.selector_units())
            .unwrap();
        assert_eq!(muses, [BTreeSet::new()].into());
    }

    /// Minimal unsatisfiable selector subsets of the cone are exactly the
    /// brute-force justifications.
    #[test]
    fn minimal_selector_subsets_are_the_justifications() {
        let cases = [
            ("(sub A B)\n(sub B C)\n(sub A C)\n(sub A (some r D))", "(sub A C)"),
            ("(sub A B)\n(sub B C)\n(sub B D)\n(sub D C)", "(sub A C)"),
            ("(sub A (and X1 X2))\n(sub X2 B)\n(sub X1 X2)", "(sub A B)"),
            ("(sub A (or B C))\n(sub B D)\n(sub C D)\n(sub A D)", "(sub A D)"),
            ("(sub A (some r B))\n(sub B C)\n(sub (some r C) D)", "(sub A D)"),
        ];
        let tableau = Oracle::new();
        let sat = SatOracle::new();
        for (onto, goal) in cases {
            let o = parse_ontology(onto).unwrap();
            let g = parse_goal(goal).unwrap();
            let expected = brute::justifications(&o, &g, &tableau, brute::DEFAULT_CAP)
                .unwrap()
                .justifications;
            let t = saturate(&o, &g).unwrap();
            let f = encode(&t, &o).restrict_to_cone();
            let unit_to_axiom: BTreeMap<usize, AxiomId> = f
                .axiom_units
                .iter()
                .map(|(id, &idx)| (idx, id.clone()))
                .collect();
            let got: BTreeSet<BTreeSet<AxiomId>> = sat
                .enumerate_constrained_mus(&f.cnf, &f.selector_units())
                .unwrap()
                .into_iter()
                .map(|s| s.iter().map(|i| unit_to_axiom[i].clone()).collect())
                .collect();
            assert_eq!(got, expected, "{onto} / {goal}");
        }
    }

    #[test]
    fn dimacs_export_carries_the_variable_bindings() {
        let (_, _, f) = formula("(sub A B)\n(sub B C)", "(sub A C)");
        let text = f.to_dimacs();
        assert!(text.contains("c axiom ax1 var 1"));
        assert!(text.contains("c axiom ax2 var 2"));
        assert!(text.contains(&format!("c goal var {}", f.goal_var)));
        let header = format!("p cnf {} {}", f.cnf.n_vars, f.cnf.clauses.len());
        assert!(text.contains(&header));
        assert!(text.lines().any(|l| l == format!("-{} 0", f.goal_var)));
    }
}
