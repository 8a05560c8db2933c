//! Syntactic locality and locality-based modules.
//!
//! An axiom is *⊥-local* with respect to a signature Σ when replacing every
//! concept name outside Σ by `Bot` and every role outside Σ by the empty role
//! turns it into a tautology; *⊤-local* replaces names by `Top` and the
//! universal role instead. Local axioms cannot contribute to entailments over
//! Σ, so the module extracted here — all axioms that fail the locality test,
//! iterated to a signature fixpoint — contains every justification of every
//! goal whose signature lies inside Σ. That containment is what lets the rest
//! of this crate work on the (usually much smaller) module instead of the
//! whole ontology.
//!
//! The ⊥⊤*-module alternates ⊥- and ⊤-extraction until neither shrinks the
//! axiom set further; it is the tightest of the three and the default
//! preprocessing step for pinpointing.

use std::collections::BTreeSet;

use crate::model::{
    Axiom, AxiomId, AxiomKind, ConceptExpr, Gci, HasSignature, Ontology, Signature,
};

/// Truth status of a concept after substituting names outside the signature.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    /// Equivalent to `Bot` under the substitution.
    Bot,
    /// Equivalent to `Top` under the substitution.
    Top,
    /// Not syntactically forced either way.
    Other,
}

/// Which constant replaces out-of-signature names.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Substitution {
    BotEmpty,
    TopUniversal,
}

fn eval(c: &ConceptExpr, sig: &Signature, sub: Substitution) -> Status {
    use Status::*;
    match c {
        ConceptExpr::Top => Top,
        ConceptExpr::Bot => Bot,
        ConceptExpr::Name(n) => {
            if sig.contains_concept(n) {
                Other
            } else {
                match sub {
                    Substitution::BotEmpty => Bot,
                    Substitution::TopUniversal => Top,
                }
            }
        }
        ConceptExpr::Not(inner) => match eval(inner, sig, sub) {
            Bot => Top,
            Top => Bot,
            Other => Other,
        },
        ConceptExpr::And(cs) => {
            let evals: Vec<Status> = cs.iter().map(|m| eval(m, sig, sub)).collect();
            if evals.iter().any(|s| *s == Bot) {
                Bot
            } else if evals.iter().all(|s| *s == Top) {
                Top
            } else {
                Other
            }
        }
        ConceptExpr::Or(cs) => {
            let evals: Vec<Status> = cs.iter().map(|m| eval(m, sig, sub)).collect();
            if evals.iter().any(|s| *s == Top) {
                Top
            } else if evals.iter().all(|s| *s == Bot) {
                Bot
            } else {
                Other
            }
        }
        ConceptExpr::Some(r, filler) => {
            let f = eval(filler, sig, sub);
            let role_known = sig.contains_role(r);
            match sub {
                Substitution::BotEmpty => {
                    // ∃∅.C ≡ ⊥, and ∃r.⊥ ≡ ⊥ for any role.
                    if !role_known || f == Bot {
                        Bot
                    } else {
                        Other
                    }
                }
                Substitution::TopUniversal => {
                    if f == Bot {
                        Bot
                    } else if !role_known && f == Top {
                        // ∃U.⊤ holds everywhere: domains are non-empty.
                        Top
                    } else {
                        Other
                    }
                }
            }
        }
        ConceptExpr::All(r, filler) => {
            let f = eval(filler, sig, sub);
            let role_known = sig.contains_role(r);
            match sub {
                Substitution::BotEmpty => {
                    // ∀∅.C ≡ ⊤, and ∀r.⊤ ≡ ⊤ for any role.
                    if !role_known || f == Top {
                        Top
                    } else {
                        Other
                    }
                }
                Substitution::TopUniversal => {
                    if f == Top {
                        Top
                    } else if !role_known && f == Bot {
                        // ∀U.⊥ fails everywhere: domains are non-empty.
                        Bot
                    } else {
                        Other
                    }
                }
            }
        }
    }
}

fn gci_local(g: &Gci, sig: &Signature, sub: Substitution) -> bool {
    eval(&g.lhs, sig, sub) == Status::Bot || eval(&g.rhs, sig, sub) == Status::Top
}

/// Is `axiom` a tautology once names outside `sig` are replaced by `Bot` and
/// the empty role?
pub fn is_bot_local(axiom: &Axiom, sig: &Signature) -> bool {
    match &axiom.kind {
        AxiomKind::Gci(g) => gci_local(g, sig, Substitution::BotEmpty),
        // ∅ ⊑ s holds; r ⊑ ∅ does not (in general), nor does r ⊑ s.
        AxiomKind::RoleInclusion(r) => !sig.contains_role(&r.sub),
    }
}

/// Is `axiom` a tautology once names outside `sig` are replaced by `Top` and
/// the universal role?
pub fn is_top_local(axiom: &Axiom, sig: &Signature) -> bool {
    match &axiom.kind {
        AxiomKind::Gci(g) => gci_local(g, sig, Substitution::TopUniversal),
        AxiomKind::RoleInclusion(r) => !sig.contains_role(&r.sup),
    }
}

fn extract(
    o: &Ontology,
    seed: &Signature,
    local: impl Fn(&Axiom, &Signature) -> bool,
) -> Ontology {
    let mut sig = seed.clone();
    let mut member: BTreeSet<AxiomId> = BTreeSet::new();
    loop {
        let mut grew = false;
        for ax in o.iter() {
            if !member.contains(&ax.id) && !local(ax, &sig) {
                member.insert(ax.id.clone());
                sig.extend(&ax.signature());
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    o.restrict(&member)
}

/// The ⊥-module of `o` for the seed signature.
pub fn bot_module(o: &Ontology, seed: &Signature) -> Ontology {
    extract(o, seed, is_bot_local)
}

/// The ⊤-module of `o` for the seed signature.
pub fn top_module(o: &Ontology, seed: &Signature) -> Ontology {
    extract(o, seed, is_top_local)
}

/// The ⊥⊤*-module: alternate ⊥- and ⊤-extraction until a fixpoint.
pub fn star_module(o: &Ontology, seed: &Signature) -> Ontology {
    let mut current = bot_module(o, seed);
    loop {
        let after_top = top_module(&current, seed);
        let after_bot = bot_module(&after_top, seed);
        if after_bot.len() == current.len() {
            return after_bot;
        }
        current = after_bot;
    }
}

/// The ⊥⊤*-module seeded with the goal's signature — the standard
/// preprocessing step before pinpointing `goal` in `o`.
pub fn star_module_for_goal(o: &Ontology, goal: &Gci) -> Ontology {
    star_module(o, &goal.signature())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_goal, parse_ontology};

    fn ids(o: &Ontology) -> Vec<&str> {
        o.iter().map(|a| a.id.as_str()).collect()
    }

    fn sig_of(goal: &str) -> Signature {
        parse_goal(goal).unwrap().signature()
    }

    #[test]
    fn bot_locality_basics() {
        let o = parse_ontology("(sub A B)").unwrap();
        let ax = o.get(&AxiomId::new("ax1")).unwrap();
        // A ∉ Σ ⇒ lhs becomes ⊥ ⇒ local.
        assert!(is_bot_local(ax, &sig_of("(sub B B)")));
        // A ∈ Σ, B ∉ Σ ⇒ A ⊑ ⊥: not a tautology.
        assert!(!is_bot_local(ax, &sig_of("(sub A A)")));
        // Both in Σ: nothing substituted, not local.
        assert!(!is_bot_local(ax, &sig_of("(sub A B)")));
    }

    #[test]
    fn top_locality_basics() {
        let o = parse_ontology("(sub A B)").unwrap();
        let ax = o.get(&AxiomId::new("ax1")).unwrap();
        // B ∉ Σ ⇒ rhs becomes ⊤ ⇒ local.
        assert!(is_top_local(ax, &sig_of("(sub A A)")));
        assert!(!is_top_local(ax, &sig_of("(sub B B)")));
    }

    #[test]
    fn existential_with_unknown_role_is_bot_local_on_lhs() {
        let o = parse_ontology("(sub (some r A) B)").unwrap();
        let ax = o.get(&AxiomId::new("ax1")).unwrap();
        // r ∉ Σ: lhs ≡ ∃∅.A ≡ ⊥.
        assert!(is_bot_local(ax, &sig_of("(sub A B)")));
        let sig = parse_ontology("(sub A (some r B))").unwrap().signature();
        assert!(!is_bot_local(ax, &sig));
    }

    #[test]
    fn universal_with_unknown_role_is_bot_local_on_rhs() {
        let o = parse_ontology("(sub A (all r B))").unwrap();
        let ax = o.get(&AxiomId::new("ax1")).unwrap();
        // r ∉ Σ: rhs ≡ ∀∅.B ≡ ⊤.
        assert!(is_bot_local(ax, &sig_of("(sub A A)")));
    }

    #[test]
    fn role_inclusion_locality() {
        let o = parse_ontology("(rsub r s)").unwrap();
        let ax = o.get(&AxiomId::new("ax1")).unwrap();
        let mut sig = Signature::default();
        assert!(is_bot_local(ax, &sig)); // r ∉ Σ ⇒ ∅ ⊑ s
        assert!(is_top_local(ax, &sig)); // s ∉ Σ ⇒ r ⊑ U
        sig.roles.insert("r".into());
        assert!(!is_bot_local(ax, &sig));
        assert!(is_top_local(ax, &sig));
        sig.roles.insert("s".into());
        assert!(!is_bot_local(ax, &sig));
        assert!(!is_top_local(ax, &sig));
    }

    #[test]
    fn chain_module_for_endpoint_goal() {
        let o = parse_ontology(
            "(sub A B)\n(sub B C)\n(sub A C)\n(sub A (some r D))",
        )
        .unwrap();
        let m = star_module_for_goal(&o, &parse_goal("(sub A C)").unwrap());
        assert_eq!(ids(&m), vec!["ax1", "ax2", "ax3"]);
    }

    #[test]
    fn unique_path_module_is_whole_chain() {
        let o = parse_ontology("(sub A B)\n(sub B C)").unwrap();
        let m = star_module_for_goal(&o, &parse_goal("(sub A C)").unwrap());
        assert_eq!(ids(&m), vec!["ax1", "ax2"]);
    }

    #[test]
    fn diamond_module_keeps_all_paths() {
        let o = parse_ontology(
            "(sub A B)\n(sub B C)\n(sub B D)\n(sub D C)",
        )
        .unwrap();
        let m = star_module_for_goal(&o, &parse_goal("(sub A C)").unwrap());
        assert_eq!(ids(&m), vec!["ax1", "ax2", "ax3", "ax4"]);
    }

    #[test]
    fn star_module_strictly_tighter_than_bot_or_top_alone() {
        // ⊥-extraction keeps ax2 (ax1 pulls X into the signature, and X ⊑ Y
        // is not ⊥-local once X is known); ⊤-extraction keeps ax3 (⊤ ⊑ A is
        // no tautology). Alternating discards both.
        let o = parse_ontology(
            "(sub A (and B X))\n(sub X Y)\n(sub P A)\n(sub P Z)",
        )
        .unwrap();
        let goal = parse_goal("(sub A B)").unwrap();
        let bot = bot_module(&o, &goal.signature());
        let top = top_module(&o, &goal.signature());
        let star = star_module_for_goal(&o, &goal);
        assert_eq!(ids(&bot), vec!["ax1", "ax2"]);
        assert_eq!(ids(&top), vec!["ax1", "ax3"]);
        assert_eq!(ids(&star), vec!["ax1"]);
    }

    #[test]
    fn module_preserves_textual_order_and_ids() {
        let o = parse_ontology(
            "b: (sub A B)\na: (sub B C)\nc: (sub X Y)",
        )
        .unwrap();
        let m = star_module_for_goal(&o, &parse_goal("(sub A C)").unwrap());
        assert_eq!(ids(&m), vec!["b", "a"]);
    }

    #[test]
    fn empty_seed_gives_empty_module() {
        let o = parse_ontology("(sub A B)\n(sub B C)").unwrap();
        let m = star_module(&o, &Signature::default());
        assert_eq!(m.len(), 0);
    }

    #[test]
    fn module_entails_goal_iff_ontology_does() {
        let cases = [
            ("(sub A B)\n(sub B C)\n(sub C D)\n(sub X Y)", "(sub A D)", true),
            ("(sub A B)\n(sub C D)", "(sub A D)", false),
            (
                "(sub A (some r B))\n(rsub r s)\n(sub (some s B) C)\n(sub Q (all t P))",
                "(sub A C)",
                true,
            ),
        ];
        let oracle = crate::tableau::Oracle::new();
        for (onto, goal, want) in cases {
            let o = parse_ontology(onto).unwrap();
            let g = parse_goal(goal).unwrap();
            let m = star_module_for_goal(&o, &g);
            assert_eq!(oracle.entails(&o, &g).unwrap(), want, "{onto}");
            assert_eq!(oracle.entails(&m, &g).unwrap(), want, "module of {onto}");
        }
    }
}
