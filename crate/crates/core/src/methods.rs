//! Interchangeable strategies for the union-of-justifications pipeline.
//!
//! Every method runs the same outer shape — extract the goal's ⊥⊤*-module,
//! fail fast when the goal is not entailed, then produce core, one
//! justification, and the union — but with different machinery underneath:
//! tableau calls driving a hitting-set tree, SAT membership queries over the
//! saturation encoding, or exhaustive subset enumeration. The registry binds
//! them to the names the CLI exposes, so callers pick one at runtime and new
//! strategies only need [`MethodRegistry::register`].

use std::collections::{BTreeMap, BTreeSet};

use crate::brute;
use crate::cnf::SatOracle;
use crate::encoding::encode;
use crate::error::{Error, Result};
use crate::hst::{self, SearchStats};
use crate::locality::star_module_for_goal;
use crate::model::{AxiomId, Gci, Ontology};
use crate::saturation::saturate;
use crate::tableau::Oracle;

/// What a pinpointing run reports, independent of the method used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PinpointResult {
    pub method: &'static str,
    /// Ids of the module the computation ran over.
    pub module: BTreeSet<AxiomId>,
    /// Intersection of all justifications.
    pub core: BTreeSet<AxiomId>,
    /// One justification.
    pub justification: BTreeSet<AxiomId>,
    /// Union of all justifications.
    pub union: BTreeSet<AxiomId>,
    /// Justifications seen along the way. Complete only when
    /// `complete_enumeration` is set; the union methods may report fewer.
    pub justifications: BTreeSet<BTreeSet<AxiomId>>,
    pub complete_enumeration: bool,
    /// Entailment tests (tableau methods) or SAT solver calls (musmem).
    pub oracle_calls: u64,
    /// Hitting-set-tree counters, when a tree search ran.
    pub stats: Option<SearchStats>,
}

pub trait UnionMethod {
    fn name(&self) -> &'static str;
    fn compute(&self, o: &Ontology, goal: &Gci) -> Result<PinpointResult>;
}

/// Tableau-driven deletion tests and the pruned hitting-set-tree search.
pub struct BlackboxMethod;

impl UnionMethod for BlackboxMethod {
    fn name(&self) -> &'static str {
        "blackbox"
    }

    fn compute(&self, o: &Ontology, goal: &Gci) -> Result<PinpointResult> {
        let module = star_module_for_goal(o, goal);
        let oracle = Oracle::new();
        if !oracle.entails(&module, goal)? {
            return Err(Error::NotEntailed);
        }
        let core = hst::compute_core(&module, goal, &oracle)?;
        let justification = hst::single_justification(&module, goal, &oracle, &core)?;
        let outcome = hst::union_of_justifications(&module, goal, &oracle, &core)?;
        Ok(PinpointResult {
            method: self.name(),
            module: module.id_set(),
            core,
            justification,
            union: outcome.union,
            justifications: outcome.justifications,
            complete_enumeration: false,
            oracle_calls: oracle.calls(),
            stats: Some(outcome.stats),
        })
    }
}

/// Saturation trace → CNF → per-axiom membership in a minimal unsatisfiable
/// selector subset. Core and the single justification fall out of the same
/// formula: dropping β's selector unit leaves the formula satisfiable exactly
/// when β is in the core, and a deletion sweep over the remaining units is a
/// justification.
pub struct MusMembershipMethod;

impl UnionMethod for MusMembershipMethod {
    fn name(&self) -> &'static str {
        "musmem"
    }

    fn compute(&self, o: &Ontology, goal: &Gci) -> Result<PinpointResult> {
        let module = star_module_for_goal(o, goal);
        let trace = saturate(&module, goal)?;
        if !trace.entailed() {
            return Err(Error::NotEntailed);
        }
        let f = encode(&trace, &module).restrict_to_cone();
        let sat = SatOracle::new();
        let soft = f.selector_units();

        let mut core = BTreeSet::new();
        for (id, &unit) in &f.axiom_units {
            let mut active = f.cnf.all_indices();
            active.remove(&unit);
            if sat.sat_subset(&f.cnf, &active) {
                core.insert(id.clone());
            }
        }

        let mut active = f.cnf.all_indices();
        for (id, &unit) in &f.axiom_units {
            if core.contains(id) {
                continue;
            }
            let mut candidate = active.clone();
            candidate.remove(&unit);
            if !sat.sat_subset(&f.cnf, &candidate) {
                active = candidate;
            }
        }
        let justification: BTreeSet<AxiomId> = f
            .axiom_units
            .iter()
            .filter(|(_, idx)| active.contains(idx))
            .map(|(id, _)| id.clone())
            .collect();

        let mut union = BTreeSet::new();
        for (id, &unit) in &f.axiom_units {
            if sat.constrained_mus_membership(&f.cnf, &soft, unit)? {
                union.insert(id.clone());
            }
        }

        Ok(PinpointResult {
            method: self.name(),
            module: module.id_set(),
            core,
            justification: justification.clone(),
            union,
            justifications: [justification].into(),
            complete_enumeration: false,
            oracle_calls: sat.calls(),
            stats: None,
        })
    }
}

/// Exhaustive subset enumeration; the referee the other methods are checked
/// against.
pub struct BruteForceMethod;

impl UnionMethod for BruteForceMethod {
    fn name(&self) -> &'static str {
        "brute"
    }

    fn compute(&self, o: &Ontology, goal: &Gci) -> Result<PinpointResult> {
        let oracle = Oracle::new();
        let r = brute::justifications(o, goal, &oracle, brute::DEFAULT_CAP)?;
        // Same ascending deletion sweep the other methods run, replayed
        // against the enumerated family instead of an oracle, so all methods
        // report the same representative justification.
        let mut keep = r.module.id_set();
        for id in r.module.id_set() {
            let mut candidate = keep.clone();
            candidate.remove(&id);
            if r.justifications.iter().any(|j| j.is_subset(&candidate)) {
                keep = candidate;
            }
        }
        let justification = keep;
        Ok(PinpointResult {
            method: self.name(),
            module: r.module.id_set(),
            core: r.core,
            justification,
            union: r.union,
            justifications: r.justifications,
            complete_enumeration: true,
            oracle_calls: r.oracle_calls,
            stats: None,
        })
    }
}

pub struct MethodRegistry {
    methods: BTreeMap<&'static str, Box<dyn UnionMethod>>,
}

impl MethodRegistry {
    pub fn new() -> Self {
        MethodRegistry {
            methods: BTreeMap::new(),
        }
    }

    /// The three shipped strategies: blackbox, brute, musmem.
    pub fn with_builtins() -> Self {
        let mut r = Self::new();
        r.register(Box::new(BlackboxMethod));
        r.register(Box::new(MusMembershipMethod));
        r.register(Box::new(BruteForceMethod));
        r
    }

    pub fn register(&mut self, method: Box<dyn UnionMethod>) {
        self.methods.insert(method.name(), method);
    }

    pub fn get(&self, name: &str) -> Result<&dyn UnionMethod> {
        self.methods
            .get(name)
            .map(|b| b.as_ref())
            .ok_or_else(|| Error::UnknownMethod {
                name: name.to_string(),
                available: self.names().join(", "),
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.methods.keys().copied().collect()
    }
}

impl Default for MethodRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_goal, parse_ontology};

    fn run(method: &str, onto: &str, goal: &str) -> Result<PinpointResult> {
        let o = parse_ontology(onto).unwrap();
        let g = parse_goal(goal).unwrap();
        MethodRegistry::with_builtins()
            .get(method)
            .unwrap()
            .compute(&o, &g)
    }

    const FIXTURES: &[(&str, &str)] = &[
        (
            "(sub A B)\n(sub B C)\n(sub A C)\n(sub A (some r D))",
            "(sub A C)",
        ),
        ("(sub A B)\n(sub B C)", "(sub A C)"),
        (
            "(sub A B)\n(sub B C)\n(sub B D)\n(sub D C)",
            "(sub A C)",
        ),
        (
            "(sub A (or B C))\n(sub B D)\n(sub C D)\n(sub A D)",
            "(sub A D)",
        ),
        (
            "(sub A (and X1 X2))\n(sub X2 B)\n(sub X1 X2)",
            "(sub A B)",
        ),
        ("(sub A (some r B))\n(sub (some r B) C)\n(sub E F)", "(sub A C)"),
        ("(sub A B)", "(sub C C)"),
    ];

    #[test]
    fn all_methods_agree_on_module_core_justification_and_union() {
        let registry = MethodRegistry::with_builtins();
        for (onto, goal) in FIXTURES {
            let o = parse_ontology(onto).unwrap();
            let g = parse_goal(goal).unwrap();
            let brute = registry.get("brute").unwrap().compute(&o, &g).unwrap();
            assert!(
                brute.justifications.contains(&brute.justification)
                    || brute.justification.is_empty()
            );
            for name in ["blackbox", "musmem"] {
                let r = registry.get(name).unwrap().compute(&o, &g).unwrap();
                assert_eq!(r.module, brute.module, "{name} module on {onto}");
                assert_eq!(r.core, brute.core, "{name} core on {onto}");
                assert_eq!(r.union, brute.union, "{name} union on {onto}");
                assert_eq!(
                    r.justification, brute.justification,
                    "{name} justification on {onto}"
                );
            }
        }
    }

    #[test]
    fn every_method_reports_not_entailed() {
        for name in ["blackbox", "musmem", "brute"] {
            assert!(matches!(
                run(name, "(sub A B)", "(sub B A)"),
                Err(Error::NotEntailed)
            ));
        }
    }

    #[test]
    fn brute_enumeration_is_flagged_complete() {
        let r = run("brute", "(sub A B)\n(sub B C)\n(sub A C)", "(sub A C)").unwrap();
        assert!(r.complete_enumeration);
        assert_eq!(r.justifications.len(), 2);
        let r = run("blackbox", "(sub A B)\n(sub B C)\n(sub A C)", "(sub A C)").unwrap();
        assert!(!r.complete_enumeration);
    }

    #[test]
    fn unique_justification_shortcut_is_visible_in_stats() {
        let r = run("blackbox", "(sub A B)\n(sub B C)", "(sub A C)").unwrap();
        let stats = r.stats.unwrap();
        assert!(stats.unique_justification_shortcut);
        assert_eq!(r.justifications.len(), 1);
    }

    #[test]
    fn unknown_method_lists_the_alternatives() {
        let registry = MethodRegistry::with_builtins();
        match registry.get("magic").map(|_| ()) {
            Err(Error::UnknownMethod { name, available }) => {
                assert_eq!(name, "magic");
                assert_eq!(available, "blackbox, brute, musmem");
            }
            other => panic!("expected UnknownMethod, got {other:?}"),
        }
        assert_eq!(registry.names(), ["blackbox", "brute", "musmem"]);
    }

    #[test]
    fn registration_makes_a_method_selectable() {
        struct Stub;
        impl UnionMethod for Stub {
            fn name(&self) -> &'static str {
                "stub"
            }
            fn compute(&self, _: &Ontology, _: &Gci) -> Result<PinpointResult> {
                Err(Error::ResourceLimit("stub".into()))
            }
        }
        let mut registry = MethodRegistry::with_builtins();
        registry.register(Box::new(Stub));
        assert!(registry.get("stub").is_ok());
        assert_eq!(registry.names().len(), 4);
    }

    #[test]
    fn oracle_calls_are_reported_per_method_run() {
        let r = run("blackbox", "(sub A B)\n(sub B C)", "(sub A C)").unwrap();
        assert!(r.oracle_calls > 0);
        let r = run("musmem", "(sub A B)\n(sub B C)", "(sub A C)").unwrap();
        assert!(r.oracle_calls > 0);
    }
}
