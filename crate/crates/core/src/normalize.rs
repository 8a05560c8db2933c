//! Structural transformation into the normal forms the saturation calculus
//! consumes.
//!
//! Every ontology axiom becomes one or more normal axioms, each remembering
//! the original axiom id it came from; a derivation step that uses a normal
//! axiom is charged to that original axiom. Fresh concept names (`_n0`,
//! `_n1`, …, skipping anything the input already uses) stand for complex
//! subexpressions; the polarity of the occurrence decides which half of the
//! definition is emitted, which keeps the transformation a conservative
//! extension: models of the input extend to the fresh names, and entailments
//! over the input signature are unchanged.
//!
//! The goal `C ⊑ D` is represented by two names with the matching halves
//! `goal_lhs ⊑ C` and `D ⊑ goal_rhs` (no axioms at all when the side is
//! already a name), so the input entails the goal exactly when the
//! normalized axiom set entails `goal_lhs ⊑ goal_rhs`.

use std::collections::BTreeSet;

use crate::model::{AxiomId, AxiomKind, ConceptExpr, Gci, HasSignature, Ontology, RoleInclusion};

/// An axiom in one of the five normal forms. All concept positions hold
/// names.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum NormalAxiom {
    /// `A₁ ⊓ … ⊓ Aₙ ⊑ B₁ ⊔ … ⊔ Bₘ`; empty sides mean `⊤` and `⊥`.
    Clause {
        lhs: BTreeSet<String>,
        rhs: BTreeSet<String>,
    },
    /// `A ⊑ ∃R.B`
    ExistsRhs {
        lhs: String,
        role: String,
        filler: String,
    },
    /// `∃R.A ⊑ B`
    ExistsLhs {
        role: String,
        filler: String,
        rhs: String,
    },
    /// `A ⊑ ∀R.B`
    ForallRhs {
        lhs: String,
        role: String,
        filler: String,
    },
    /// `R ⊑ S`
    RoleIncl { sub: String, sup: String },
}

impl NormalAxiom {
    /// Render back into an ordinary axiom kind (used by tests to compare
    /// the transformation against the unnormalized input with an
    /// independent reasoner).
    pub fn to_axiom_kind(&self) -> AxiomKind {
        let name = |n: &String| ConceptExpr::Name(n.clone());
        match self {
            NormalAxiom::Clause { lhs, rhs } => AxiomKind::Gci(Gci::new(
                ConceptExpr::and(lhs.iter().map(name).collect()),
                ConceptExpr::or(rhs.iter().map(name).collect()),
            )),
            NormalAxiom::ExistsRhs { lhs, role, filler } => AxiomKind::Gci(Gci::new(
                name(lhs),
                ConceptExpr::some(role.clone(), name(filler)),
            )),
            NormalAxiom::ExistsLhs { role, filler, rhs } => AxiomKind::Gci(Gci::new(
                ConceptExpr::some(role.clone(), name(filler)),
                name(rhs),
            )),
            NormalAxiom::ForallRhs { lhs, role, filler } => AxiomKind::Gci(Gci::new(
                name(lhs),
                ConceptExpr::all(role.clone(), name(filler)),
            )),
            NormalAxiom::RoleIncl { sub, sup } => AxiomKind::RoleInclusion(RoleInclusion {
                sub: sub.clone(),
                sup: sup.clone(),
            }),
        }
    }
}

/// A normal axiom plus the ontology axiom it came from. `None` marks the
/// axioms introduced for the goal — they are always available and never
/// charged to the ontology.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedAxiom {
    pub form: NormalAxiom,
    pub origin: Option<AxiomId>,
}

/// The normalized input for saturation.
#[derive(Debug, Clone)]
pub struct NormalizedTBox {
    pub axioms: Vec<NormalizedAxiom>,
    /// Name standing for the goal's left-hand side.
    pub goal_lhs: String,
    /// Name standing for the goal's right-hand side.
    pub goal_rhs: String,
}

pub fn normalize(o: &Ontology, goal: &Gci) -> NormalizedTBox {
    let mut used: BTreeSet<String> = o.signature().concepts;
    used.extend(goal.signature().concepts);
    let mut n = Normalizer {
        used,
        counter: 0,
        out: Vec::new(),
        origin: None,
    };
    for ax in o.iter() {
        n.origin = Some(ax.id.clone());
        match &ax.kind {
            AxiomKind::Gci(g) => n.convert_gci(&g.lhs, &g.rhs),
            AxiomKind::RoleInclusion(r) => n.emit(NormalAxiom::RoleIncl {
                sub: r.sub.clone(),
                sup: r.sup.clone(),
            }),
        }
    }
    n.origin = None;
    let goal_lhs = match &goal.lhs {
        ConceptExpr::Name(a) => a.clone(),
        other => {
            let a = n.fresh();
            n.convert_gci(&ConceptExpr::Name(a.clone()), other);
            a
        }
    };
    let goal_rhs = match &goal.rhs {
        ConceptExpr::Name(b) => b.clone(),
        other => {
            let b = n.fresh();
            n.convert_gci(other, &ConceptExpr::Name(b.clone()));
            b
        }
    };
    NormalizedTBox {
        axioms: n.out,
        goal_lhs,
        goal_rhs,
    }
}

struct Normalizer {
    used: BTreeSet<String>,
    counter: usize,
    out: Vec<NormalizedAxiom>,
    origin: Option<AxiomId>,
}

impl Normalizer {
    fn fresh(&mut self) -> String {
        loop {
            let candidate = format!("_n{}", self.counter);
            self.counter += 1;
            if self.used.insert(candidate.clone()) {
                return candidate;
            }
        }
    }

    fn emit(&mut self, form: NormalAxiom) {
        self.out.push(NormalizedAxiom {
            form,
            origin: self.origin.clone(),
        });
    }

    fn convert_gci(&mut self, lhs: &ConceptExpr, rhs: &ConceptExpr) {
        // Tautologies contribute nothing.
        if matches!(rhs, ConceptExpr::Top) || matches!(lhs, ConceptExpr::Bot) {
            return;
        }
        // Top-level splits that avoid fresh names entirely.
        if let ConceptExpr::Or(parts) = lhs {
            for p in parts {
                self.convert_gci(p, rhs);
            }
            return;
        }
        if let ConceptExpr::And(parts) = rhs {
            for p in parts {
                self.convert_gci(lhs, p);
            }
            return;
        }
        match rhs {
            ConceptExpr::Some(role, filler) => {
                let a = self.lhs_name(lhs);
                let b = self.rhs_name(filler);
                self.emit(NormalAxiom::ExistsRhs {
                    lhs: a,
                    role: role.clone(),
                    filler: b,
                });
                return;
            }
            ConceptExpr::All(role, filler) => {
                let a = self.lhs_name(lhs);
                let b = self.rhs_name(filler);
                self.emit(NormalAxiom::ForallRhs {
                    lhs: a,
                    role: role.clone(),
                    filler: b,
                });
                return;
            }
            _ => {}
        }
        if let ConceptExpr::Some(role, filler) = lhs {
            let a = self.lhs_name(filler);
            let b = self.rhs_name(rhs);
            self.emit(NormalAxiom::ExistsLhs {
                role: role.clone(),
                filler: a,
                rhs: b,
            });
            return;
        }
        let (lhs_names, vacuous) = self.conj_names(lhs);
        if vacuous {
            return;
        }
        let (rhs_names, tautologous) = self.disj_names(rhs);
        if tautologous {
            return;
        }
        self.emit(NormalAxiom::Clause {
            lhs: lhs_names,
            rhs: rhs_names,
        });
    }

    /// Flatten a left-hand side conjunction into names. The bool is true
    /// when the side contains `⊥` (the axiom is vacuous).
    fn conj_names(&mut self, c: &ConceptExpr) -> (BTreeSet<String>, bool) {
        let mut names = BTreeSet::new();
        let mut stack = vec![c];
        while let Some(cur) = stack.pop() {
            match cur {
                ConceptExpr::Top => {}
                ConceptExpr::Bot => return (names, true),
                ConceptExpr::And(parts) => stack.extend(parts.iter()),
                ConceptExpr::Name(n) => {
                    names.insert(n.clone());
                }
                other => {
                    let n = self.neg_name(other);
                    names.insert(n);
                }
            }
        }
        (names, false)
    }

    /// Flatten a right-hand side disjunction into names. The bool is true
    /// when the side contains `⊤` (the axiom is a tautology).
    fn disj_names(&mut self, c: &ConceptExpr) -> (BTreeSet<String>, bool) {
        let mut names = BTreeSet::new();
        let mut stack = vec![c];
        while let Some(cur) = stack.pop() {
            match cur {
                ConceptExpr::Bot => {}
                ConceptExpr::Top => return (names, true),
                ConceptExpr::Or(parts) => stack.extend(parts.iter()),
                ConceptExpr::Name(n) => {
                    names.insert(n.clone());
                }
                other => {
                    let n = self.pos_name(other);
                    names.insert(n);
                }
            }
        }
        (names, false)
    }

    fn lhs_name(&mut self, c: &ConceptExpr) -> String {
        match c {
            ConceptExpr::Name(n) => n.clone(),
            other => self.neg_name(other),
        }
    }

    fn rhs_name(&mut self, c: &ConceptExpr) -> String {
        match c {
            ConceptExpr::Name(n) => n.clone(),
            other => self.pos_name(other),
        }
    }

    /// A name `n` with `C ⊑ n` enforced — for occurrences of `C` on the
    /// left of the original inclusion.
    fn neg_name(&mut self, c: &ConceptExpr) -> String {
        match c {
            ConceptExpr::Name(n) => n.clone(),
            ConceptExpr::Top => {
                let n = self.fresh();
                self.emit(NormalAxiom::Clause {
                    lhs: BTreeSet::new(),
                    rhs: [n.clone()].into(),
                });
                n
            }
            ConceptExpr::Bot => self.fresh(), // ⊥ ⊑ n needs nothing
            ConceptExpr::And(_) => {
                let n = self.fresh();
                let (names, vacuous) = self.conj_names(c);
                if !vacuous {
                    self.emit(NormalAxiom::Clause {
                        lhs: names,
                        rhs: [n.clone()].into(),
                    });
                }
                n
            }
            ConceptExpr::Or(parts) => {
                let n = self.fresh();
                for p in parts {
                    let (names, vacuous) = self.conj_names(p);
                    if !vacuous {
                        self.emit(NormalAxiom::Clause {
                            lhs: names,
                            rhs: [n.clone()].into(),
                        });
                    }
                }
                n
            }
            ConceptExpr::Some(role, filler) => {
                let n = self.fresh();
                let a = self.lhs_name(filler);
                self.emit(NormalAxiom::ExistsLhs {
                    role: role.clone(),
                    filler: a,
                    rhs: n.clone(),
                });
                n
            }
            ConceptExpr::All(role, filler) => {
                // ∀R.C ⊑ n  ⟺  ⊤ ⊑ n ⊔ ∃R.¬C
                let n = self.fresh();
                let m = self.fresh();
                self.emit(NormalAxiom::Clause {
                    lhs: BTreeSet::new(),
                    rhs: [n.clone(), m.clone()].into(),
                });
                let k = self.pos_name(&ConceptExpr::not((**filler).clone()));
                self.emit(NormalAxiom::ExistsRhs {
                    lhs: m,
                    role: role.clone(),
                    filler: k,
                });
                n
            }
            ConceptExpr::Not(inner) => {
                // ¬C ⊑ n  ⟺  ⊤ ⊑ n ⊔ C
                let n = self.fresh();
                let c_name = self.rhs_name(inner);
                self.emit(NormalAxiom::Clause {
                    lhs: BTreeSet::new(),
                    rhs: [n.clone(), c_name].into(),
                });
                n
            }
        }
    }

    /// A name `n` with `n ⊑ C` enforced — for occurrences of `C` on the
    /// right of the original inclusion.
    fn pos_name(&mut self, c: &ConceptExpr) -> String {
        match c {
            ConceptExpr::Name(n) => n.clone(),
            ConceptExpr::Top => self.fresh(), // n ⊑ ⊤ needs nothing
            ConceptExpr::Bot => {
                let n = self.fresh();
                self.emit(NormalAxiom::Clause {
                    lhs: [n.clone()].into(),
                    rhs: BTreeSet::new(),
                });
                n
            }
            ConceptExpr::And(parts) => {
                let n = self.fresh();
                for p in parts {
                    let (names, tautologous) = self.disj_names(p);
                    if !tautologous {
                        self.emit(NormalAxiom::Clause {
                            lhs: [n.clone()].into(),
                            rhs: names,
                        });
                    }
                }
                n
            }
            ConceptExpr::Or(_) => {
                let n = self.fresh();
                let (names, tautologous) = self.disj_names(c);
                if !tautologous {
                    self.emit(NormalAxiom::Clause {
                        lhs: [n.clone()].into(),
                        rhs: names,
                    });
                }
                n
            }
            ConceptExpr::Some(role, filler) => {
                let n = self.fresh();
                let b = self.rhs_name(filler);
                self.emit(NormalAxiom::ExistsRhs {
                    lhs: n.clone(),
                    role: role.clone(),
                    filler: b,
                });
                n
            }
            ConceptExpr::All(role, filler) => {
                let n = self.fresh();
                let b = self.rhs_name(filler);
                self.emit(NormalAxiom::ForallRhs {
                    lhs: n.clone(),
                    role: role.clone(),
                    filler: b,
                });
                n
            }
            ConceptExpr::Not(inner) => {
                // n ⊑ ¬C  ⟺  n ⊓ C ⊑ ⊥
                let n = self.fresh();
                let c_name = self.lhs_name(inner);
                self.emit(NormalAxiom::Clause {
                    lhs: [n.clone(), c_name].into(),
                    rhs: BTreeSet::new(),
                });
                n
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Axiom;
    use crate::parser::{parse_goal, parse_ontology};
    use crate::tableau::Oracle;

    fn norm(onto: &str, goal: &str) -> NormalizedTBox {
        let o = parse_ontology(onto).unwrap();
        let g = parse_goal(goal).unwrap();
        normalize(&o, &g)
    }

    #[test]
    fn atomic_axioms_stay_atomic() {
        let n = norm("(sub A B)", "(sub A B)");
        assert_eq!(n.axioms.len(), 1);
        assert_eq!(
            n.axioms[0].form,
            NormalAxiom::Clause {
                lhs: ["A".to_string()].into(),
                rhs: ["B".to_string()].into(),
            }
        );
        assert_eq!(n.axioms[0].origin, Some(AxiomId::new("ax1")));
        assert_eq!((n.goal_lhs.as_str(), n.goal_rhs.as_str()), ("A", "B"));
    }

    #[test]
    fn restricted_forms_pass_through() {
        let n = norm(
            "(sub A (some r B))\n(sub (some r A) B)\n(sub A (all r B))\n(rsub r s)",
            "(sub A B)",
        );
        let forms: Vec<&NormalAxiom> = n.axioms.iter().map(|a| &a.form).collect();
        assert_eq!(forms.len(), 4);
        assert!(matches!(forms[0], NormalAxiom::ExistsRhs { .. }));
        assert!(matches!(forms[1], NormalAxiom::ExistsLhs { .. }));
        assert!(matches!(forms[2], NormalAxiom::ForallRhs { .. }));
        assert!(matches!(forms[3], NormalAxiom::RoleIncl { .. }));
    }

    #[test]
    fn lhs_disjunction_splits_without_fresh_names() {
        let n = norm("(sub (or A B) C)", "(sub A C)");
        assert_eq!(n.axioms.len(), 2);
        for a in &n.axioms {
            assert_eq!(a.origin, Some(AxiomId::new("ax1")));
            match &a.form {
                NormalAxiom::Clause { lhs, rhs } => {
                    assert_eq!(lhs.len(), 1);
                    assert_eq!(rhs.iter().collect::<Vec<_>>(), vec!["C"]);
                }
                other => panic!("unexpected form {other:?}"),
            }
        }
    }

    #[test]
    fn tautologies_and_vacuities_vanish() {
        let n = norm("(sub A Top)\n(sub Bot B)\n(sub A (or B Top))", "(sub A B)");
        assert!(n.axioms.is_empty());
    }

    #[test]
    fn fresh_names_avoid_user_names() {
        let n = norm("(sub _n0 (not B))", "(sub _n0 B)");
        // The fresh name for ¬B must skip the user's _n0: the definition
        // clause _n1 ⊓ B ⊑ ⊥ uses _n1, and the main clause is _n0 ⊑ _n1.
        assert_eq!(n.axioms.len(), 2);
        assert_eq!(
            n.axioms[0].form,
            NormalAxiom::Clause {
                lhs: ["_n1".to_string(), "B".to_string()].into(),
                rhs: BTreeSet::new(),
            }
        );
        assert_eq!(
            n.axioms[1].form,
            NormalAxiom::Clause {
                lhs: ["_n0".to_string()].into(),
                rhs: ["_n1".to_string()].into(),
            }
        );
    }

    #[test]
    fn complex_goal_gets_half_definitions() {
        let n = norm("(sub A B)", "(sub (and A C) (or B D))");
        assert!(n.goal_lhs.starts_with("_n"));
        assert!(n.goal_rhs.starts_with("_n"));
        // goal_lhs ⊑ A ⊓ C splits into two clauses; B ⊔ D ⊑ goal_rhs into two.
        let goal_axioms: Vec<_> = n.axioms.iter().filter(|a| a.origin.is_none()).collect();
        assert_eq!(goal_axioms.len(), 4);
    }

    /// The transformation must preserve the goal entailment exactly. The
    /// tableau over the rendered normal axioms acts as the referee.
    #[test]
    fn goal_entailment_is_preserved() {
        let cases = [
            ("(sub A B)\n(sub B C)", "(sub A C)", true),
            ("(sub A B)\n(sub B C)", "(sub C A)", false),
            ("(sub A (not B))\n(sub A (or B C))", "(sub A C)", true),
            ("(sub A (not B))", "(sub A C)", false),
            ("(sub A (some r (and B C)))", "(sub A (some r B))", true),
            ("(sub A (some r (and B C)))", "(sub A (some r D))", false),
            ("(sub A (all r B))\n(sub A (some r C))", "(sub A (some r (and B C)))", true),
            ("(sub (some r Top) B)\n(sub A (some r C))", "(sub A B)", true),
            ("(sub A (all r (not B)))\n(sub A (some r B))", "(sub A Bot)", true),
            ("(sub (all r B) C)\n(sub A (all r B))", "(sub A C)", true),
            ("(sub (all r B) C)", "(sub A C)", false),
            ("(sub Top (or A B))\n(sub B A)", "(sub Top A)", true),
            ("(sub A B)", "(sub (and A (not A)) C)", true),
            ("(sub A B)", "(sub C (or D (not D)))", true),
            ("(sub (not A) B)", "(sub Top (or A B))", true),
        ];
        let oracle = Oracle::new();
        for (onto, goal, want) in cases {
            let o = parse_ontology(onto).unwrap();
            let g = parse_goal(goal).unwrap();
            assert_eq!(oracle.entails(&o, &g).unwrap(), want, "direct: {onto} / {goal}");
            let n = normalize(&o, &g);
            let rendered: Vec<Axiom> = n
                .axioms
                .iter()
                .enumerate()
                .map(|(i, a)| Axiom {
                    id: AxiomId::new(format!("n{i}")),
                    kind: a.form.to_axiom_kind(),
                })
                .collect();
            let rendered = Ontology::new(rendered).unwrap();
            let ng = Gci::atomic(n.goal_lhs.clone(), n.goal_rhs.clone());
            assert_eq!(
                oracle.entails(&rendered, &ng).unwrap(),
                want,
                "normalized: {onto} / {goal}"
            );
        }
    }
}
