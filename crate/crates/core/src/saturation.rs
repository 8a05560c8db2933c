//! Consequence-based saturation over the normal forms of [`crate::normalize`],
//! recording every derivation it performs.
//!
//! The calculus derives sequents `K ⊢ Δ`: the context `K` is a conjunction of
//! literals over concept names, and `Δ` is a disjunction of atoms — literals
//! or existentials `∃R.K'` pointing at a successor context. Contexts are
//! created on demand, starting from the root `{goal_lhs, ¬goal_rhs}`; the
//! goal inclusion is entailed exactly when the empty disjunction is derived
//! in the root, i.e. when no individual can satisfy `goal_lhs ⊓ ¬goal_rhs`.
//!
//! Within a context the rules are ordered resolution with selection: axiom
//! clauses act as nuclei with all body names selected, and a derived sequent
//! participates in inferences only through its maximal atom. Existential
//! atoms order above concept literals (they speak about a deeper term), so
//! a sequent holding an existential works exclusively on its largest one —
//! refining, eliminating, or discharging it — and only existential-free
//! sequents resolve on literals or feed clause bodies. Tautologies are never
//! recorded. The ordering keeps saturation tractable without costing
//! completeness — refutational completeness of ordered resolution holds for
//! every clause set, in particular for the clauses contributed by any
//! subset of the ontology.
//!
//! Unlike a reasoner that only wants a yes/no answer, this engine records
//! *all* rule instances, including re-derivations of sequents it already
//! knows. Each recorded step charges the original ontology axioms whose
//! normal forms (or role-hierarchy links) it used, which is exactly the
//! information the propositional encoding needs to reason about which axiom
//! subsets entail the goal. The only instances dropped are weakenings —
//! steps whose conclusion is a superset of one of their own same-context
//! premises — which are redundant for any axiom subset because that premise
//! is available whenever the instance is.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::model::{AxiomId, Gci, HasSignature, Ontology};
use crate::normalize::{normalize, NormalAxiom};

/// Cap on distinct contexts before saturation gives up.
pub const DEFAULT_CONTEXT_BUDGET: usize = 10_000;
/// Cap on distinct sequents before saturation gives up.
pub const DEFAULT_SEQUENT_BUDGET: usize = 500_000;

/// A possibly negated concept name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Literal {
    pub name: String,
    pub negated: bool,
}

impl Literal {
    pub fn pos(name: impl Into<String>) -> Self {
        Literal {
            name: name.into(),
            negated: false,
        }
    }

    pub fn neg(name: impl Into<String>) -> Self {
        Literal {
            name: name.into(),
            negated: true,
        }
    }

    fn complement(&self) -> Self {
        Literal {
            name: self.name.clone(),
            negated: !self.negated,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "~{}", self.name)
        } else {
            write!(f, "{}", self.name)
        }
    }
}

/// A conjunction of literals, used both as a context and as the constraint
/// set of a successor.
pub type Context = BTreeSet<Literal>;

/// One disjunct of a derived sequent.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Atom {
    Lit(Literal),
    /// `∃role.K` where `K` is an index into [`InferenceTrace::contexts`].
    Exists(String, usize),
}

pub type Delta = BTreeSet<Atom>;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Sequent {
    /// Index into [`InferenceTrace::contexts`].
    pub context: usize,
    pub delta: Delta,
}

/// One recorded rule instance.
#[derive(Debug, Clone)]
pub struct TraceStep {
    /// Index of the concluded sequent.
    pub conclusion: usize,
    /// Indices of the premise sequents, in rule order.
    pub premises: Vec<usize>,
    /// Original ontology axioms charged for this step.
    pub axioms: BTreeSet<AxiomId>,
    pub rule: &'static str,
}

/// The full saturation output: every context, sequent, and derivation step.
#[derive(Debug, Clone)]
pub struct InferenceTrace {
    pub contexts: Vec<Context>,
    pub sequents: Vec<Sequent>,
    pub steps: Vec<TraceStep>,
    /// Index of the root refutation `{goal_lhs, ¬goal_rhs} ⊢ ∅`, when that
    /// sequent was derived.
    pub goal_sequent: Option<usize>,
    pub goal_lhs: String,
    pub goal_rhs: String,
}

impl InferenceTrace {
    pub fn entailed(&self) -> bool {
        self.goal_sequent.is_some()
    }

    fn fmt_atom(&self, a: &Atom) -> String {
        match a {
            Atom::Lit(l) => l.to_string(),
            Atom::Exists(role, k) => format!("some {role} K{k}"),
        }
    }

    fn fmt_sequent(&self, s: &Sequent) -> String {
        let delta = if s.delta.is_empty() {
            "<empty>".to_string()
        } else {
            s.delta
                .iter()
                .map(|a| self.fmt_atom(a))
                .collect::<Vec<_>>()
                .join(" | ")
        };
        format!("K{} |- {delta}", s.context)
    }
}

impl fmt::Display for InferenceTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, ctx) in self.contexts.iter().enumerate() {
            let lits = ctx.iter().map(|l| l.to_string()).collect::<Vec<_>>();
            writeln!(f, "K{i} = {{{}}}", lits.join(", "))?;
        }
        for (i, step) in self.steps.iter().enumerate() {
            let mut tail = step.rule.to_string();
            if !step.axioms.is_empty() {
                let axs = step
                    .axioms
                    .iter()
                    .map(|a| a.to_string())
                    .collect::<Vec<_>>();
                tail.push_str(&format!(" {}", axs.join(",")));
            }
            if !step.premises.is_empty() {
                let ps = step
                    .premises
                    .iter()
                    .map(|p| format!("s{p}"))
                    .collect::<Vec<_>>();
                tail.push_str(&format!(" <- {}", ps.join(" ")));
            }
            writeln!(
                f,
                "step {i}: s{} [{tail}]  {}",
                step.conclusion,
                self.fmt_sequent(&self.sequents[step.conclusion])
            )?;
        }
        match self.goal_sequent {
            Some(s) => writeln!(f, "goal {} |- {}: derived as s{s}", self.goal_lhs, self.goal_rhs),
            None => writeln!(f, "goal {} |- {}: not derivable", self.goal_lhs, self.goal_rhs),
        }
    }
}

/// Saturate with default budgets.
pub fn saturate(o: &Ontology, goal: &Gci) -> Result<InferenceTrace> {
    saturate_with_budgets(o, goal, DEFAULT_CONTEXT_BUDGET, DEFAULT_SEQUENT_BUDGET)
}

/// Decide entailment by saturation alone.
pub fn entails(o: &Ontology, goal: &Gci) -> Result<bool> {
    Ok(saturate(o, goal)?.entailed())
}

pub fn saturate_with_budgets(
    o: &Ontology,
    goal: &Gci,
    context_budget: usize,
    sequent_budget: usize,
) -> Result<InferenceTrace> {
    let nt = normalize(o, goal);

    let mut engine = Engine {
        clauses: Vec::new(),
        top_clauses: Vec::new(),
        exists_rhs: Vec::new(),
        exists_lhs: Vec::new(),
        forall_rhs: Vec::new(),
        clause_by_name: BTreeMap::new(),
        exists_rhs_by_lhs: BTreeMap::new(),
        forall_by_lhs: BTreeMap::new(),
        supports: BTreeMap::new(),
        contexts: Vec::new(),
        ctx_ids: BTreeMap::new(),
        sequents: Vec::new(),
        seq_ids: BTreeMap::new(),
        steps: Vec::new(),
        seen: BTreeSet::new(),
        by_max_lit: BTreeMap::new(),
        by_exists: BTreeMap::new(),
        by_succ: BTreeMap::new(),
        bottom: BTreeMap::new(),
        todo: VecDeque::new(),
        context_budget,
        sequent_budget,
    };

    let mut roles: BTreeSet<String> = o.signature().roles;
    roles.extend(goal.signature().roles);
    let mut edges: Vec<(String, String, BTreeSet<AxiomId>)> = Vec::new();
    for na in &nt.axioms {
        let origin: BTreeSet<AxiomId> = na.origin.iter().cloned().collect();
        match &na.form {
            NormalAxiom::Clause { lhs, rhs } => {
                let idx = engine.clauses.len();
                engine.clauses.push((lhs.clone(), rhs.clone(), origin));
                if lhs.is_empty() {
                    engine.top_clauses.push(idx);
                } else {
                    for n in lhs {
                        engine
                            .clause_by_name
                            .entry(n.clone())
                            .or_default()
                            .push(idx);
                    }
                }
            }
            NormalAxiom::ExistsRhs { lhs, role, filler } => {
                let idx = engine.exists_rhs.len();
                engine
                    .exists_rhs
                    .push((lhs.clone(), role.clone(), filler.clone(), origin));
                engine
                    .exists_rhs_by_lhs
                    .entry(lhs.clone())
                    .or_default()
                    .push(idx);
                roles.insert(role.clone());
            }
            NormalAxiom::ExistsLhs { role, filler, rhs } => {
                engine
                    .exists_lhs
                    .push((role.clone(), filler.clone(), rhs.clone(), origin));
                roles.insert(role.clone());
            }
            NormalAxiom::ForallRhs { lhs, role, filler } => {
                let idx = engine.forall_rhs.len();
                engine
                    .forall_rhs
                    .push((lhs.clone(), role.clone(), filler.clone(), origin));
                engine
                    .forall_by_lhs
                    .entry(lhs.clone())
                    .or_default()
                    .push(idx);
                roles.insert(role.clone());
            }
            NormalAxiom::RoleIncl { sub, sup } => {
                roles.insert(sub.clone());
                roles.insert(sup.clone());
                edges.push((sub.clone(), sup.clone(), origin));
            }
        }
    }
    engine.compute_supports(&roles, &edges);

    let root: Context = [
        Literal::pos(nt.goal_lhs.clone()),
        Literal::neg(nt.goal_rhs.clone()),
    ]
    .into();
    let root_id = engine.ensure_context(root)?;
    debug_assert_eq!(root_id, 0);

    while let Some(q) = engine.todo.pop_front() {
        engine.process(q)?;
    }

    let goal_sequent = engine.seq_ids.get(&(0, Delta::new())).copied();
    Ok(InferenceTrace {
        contexts: engine.contexts,
        sequents: engine.sequents,
        steps: engine.steps,
        goal_sequent,
        goal_lhs: nt.goal_lhs,
        goal_rhs: nt.goal_rhs,
    })
}

/// Dedup key for a rule instance: rule tag, axiom/clause index, atom or
/// literal ordinal, role-support ordinal, and the premise tuple. The charged
/// axiom set is a function of the first four slots, so it stays out of the
/// key.
type InstanceKey = (u8, usize, usize, usize, Vec<usize>);

/// A delta containing complementary literals is valid in every
/// interpretation and never contributes to a refutation.
fn is_tautology(delta: &Delta) -> bool {
    delta.iter().any(|a| match a {
        Atom::Lit(l) if !l.negated => delta.contains(&Atom::Lit(l.complement())),
        _ => false,
    })
}

struct Engine {
    // Normalized input, partitioned by form. Origin sets are empty for the
    // axioms that define the goal names.
    clauses: Vec<(BTreeSet<String>, BTreeSet<String>, BTreeSet<AxiomId>)>,
    top_clauses: Vec<usize>,
    exists_rhs: Vec<(String, String, String, BTreeSet<AxiomId>)>, // lhs, role, filler
    exists_lhs: Vec<(String, String, String, BTreeSet<AxiomId>)>, // role, filler, rhs
    forall_rhs: Vec<(String, String, String, BTreeSet<AxiomId>)>, // lhs, role, filler
    clause_by_name: BTreeMap<String, Vec<usize>>,
    exists_rhs_by_lhs: BTreeMap<String, Vec<usize>>,
    forall_by_lhs: BTreeMap<String, Vec<usize>>,
    /// For each pair (r, s) with r ⊑* s: the minimal sets of role axioms
    /// witnessing it. Alternative witnesses give alternative derivations.
    supports: BTreeMap<(String, String), Vec<BTreeSet<AxiomId>>>,

    contexts: Vec<Context>,
    ctx_ids: BTreeMap<Context, usize>,
    sequents: Vec<Sequent>,
    seq_ids: BTreeMap<(usize, Delta), usize>,
    steps: Vec<TraceStep>,
    seen: BTreeSet<InstanceKey>,

    /// Existential-free sequents (per context) whose maximal literal is the
    /// key.
    by_max_lit: BTreeMap<(usize, Literal), Vec<usize>>,
    /// Sequents (per context) whose maximal atom is an existential.
    by_exists: BTreeMap<usize, Vec<usize>>,
    /// Sequents anywhere whose maximal atom is `∃R.K` for the keyed `K`.
    by_succ: BTreeMap<usize, Vec<usize>>,
    /// Contexts with a derived empty delta, and that sequent's index.
    bottom: BTreeMap<usize, usize>,

    todo: VecDeque<usize>,
    context_budget: usize,
    sequent_budget: usize,
}

impl Engine {
    fn compute_supports(
        &mut self,
        roles: &BTreeSet<String>,
        edges: &[(String, String, BTreeSet<AxiomId>)],
    ) {
        let mut sup: BTreeMap<(String, String), BTreeSet<BTreeSet<AxiomId>>> = BTreeMap::new();
        for r in roles {
            sup.insert((r.clone(), r.clone()), [BTreeSet::new()].into());
        }
        loop {
            let mut changed = false;
            let snapshot: Vec<((String, String), BTreeSet<BTreeSet<AxiomId>>)> =
                sup.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
            for ((x, y), sets) in &snapshot {
                for (esub, esup, eax) in edges {
                    if esub != y {
                        continue;
                    }
                    for s in sets {
                        let cand: BTreeSet<AxiomId> = s.union(eax).cloned().collect();
                        let entry = sup.entry((x.clone(), esup.clone())).or_default();
                        if entry.iter().any(|t| t.is_subset(&cand)) {
                            continue;
                        }
                        let mut keep: BTreeSet<BTreeSet<AxiomId>> = entry
                            .iter()
                            .filter(|t| !cand.is_subset(t))
                            .cloned()
                            .collect();
                        keep.insert(cand);
                        *entry = keep;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        self.supports = sup
            .into_iter()
            .map(|(k, v)| (k, v.into_iter().collect()))
            .collect();
    }

    fn ensure_context(&mut self, ctx: Context) -> Result<usize> {
        if let Some(&id) = self.ctx_ids.get(&ctx) {
            return Ok(id);
        }
        if self.contexts.len() >= self.context_budget {
            return Err(Error::ResourceLimit(format!(
                "saturation exceeded the context budget of {}",
                self.context_budget
            )));
        }
        let id = self.contexts.len();
        self.contexts.push(ctx.clone());
        self.ctx_ids.insert(ctx.clone(), id);
        for (ord, lit) in ctx.iter().enumerate() {
            self.record_raw(
                id,
                [Atom::Lit(lit.clone())].into(),
                Vec::new(),
                BTreeSet::new(),
                "init",
                (0, id, ord, 0),
            )?;
        }
        for ci in self.top_clauses.clone() {
            let (_, rhs, axioms) = self.clauses[ci].clone();
            let delta: Delta = rhs.iter().map(|n| Atom::Lit(Literal::pos(n))).collect();
            self.record_raw(id, delta, Vec::new(), axioms, "hyper", (7, id, ci, 0))?;
        }
        Ok(id)
    }

    /// Record a rule instance unless its conclusion merely weakens one of
    /// its own same-context premises.
    fn record(
        &mut self,
        ctx: usize,
        delta: Delta,
        premises: Vec<usize>,
        axioms: BTreeSet<AxiomId>,
        rule: &'static str,
        key: (u8, usize, usize, usize),
    ) -> Result<()> {
        if premises.iter().any(|&p| {
            self.sequents[p].context == ctx && self.sequents[p].delta.is_subset(&delta)
        }) {
            return Ok(());
        }
        self.record_raw(ctx, delta, premises, axioms, rule, key)
    }

    fn record_raw(
        &mut self,
        ctx: usize,
        delta: Delta,
        premises: Vec<usize>,
        axioms: BTreeSet<AxiomId>,
        rule: &'static str,
        key: (u8, usize, usize, usize),
    ) -> Result<()> {
        if is_tautology(&delta) {
            return Ok(());
        }
        let full_key: InstanceKey = (key.0, key.1, key.2, key.3, premises.clone());
        if !self.seen.insert(full_key) {
            return Ok(());
        }
        let id = match self.seq_ids.get(&(ctx, delta.clone())) {
            Some(&id) => id,
            None => {
                if self.sequents.len() >= self.sequent_budget {
                    return Err(Error::ResourceLimit(format!(
                        "saturation exceeded the sequent budget of {}",
                        self.sequent_budget
                    )));
                }
                let id = self.sequents.len();
                self.sequents.push(Sequent {
                    context: ctx,
                    delta: delta.clone(),
                });
                self.seq_ids.insert((ctx, delta.clone()), id);
                match delta.iter().next_back() {
                    Some(Atom::Lit(l)) => {
                        self.by_max_lit
                            .entry((ctx, l.clone()))
                            .or_default()
                            .push(id);
                    }
                    Some(Atom::Exists(_, k)) => {
                        self.by_exists.entry(ctx).or_default().push(id);
                        self.by_succ.entry(*k).or_default().push(id);
                    }
                    None => {}
                }
                self.todo.push_back(id);
                id
            }
        };
        // A step concluding one of its own premises says nothing.
        if premises.contains(&id) {
            return Ok(());
        }
        self.steps.push(TraceStep {
            conclusion: id,
            premises,
            axioms,
            rule,
        });
        Ok(())
    }

    fn process(&mut self, q: usize) -> Result<()> {
        let seq = self.sequents[q].clone();
        let ctx = seq.context;

        match seq.delta.iter().next_back().cloned() {
            None => {
                if !self.bottom.contains_key(&ctx) {
                    self.bottom.insert(ctx, q);
                    for host in self.by_succ.get(&ctx).cloned().unwrap_or_default() {
                        self.fire_bot(host, ctx, q)?;
                    }
                }
            }
            Some(Atom::Lit(l)) => {
                if !l.negated {
                    for ci in self.clause_by_name.get(&l.name).cloned().unwrap_or_default() {
                        self.fire_hyper(ci, q)?;
                    }
                    for ai in self
                        .exists_rhs_by_lhs
                        .get(&l.name)
                        .cloned()
                        .unwrap_or_default()
                    {
                        self.fire_exists_intro(ai, q)?;
                    }
                    for ai in self.forall_by_lhs.get(&l.name).cloned().unwrap_or_default() {
                        for holder in self.by_exists.get(&ctx).cloned().unwrap_or_default() {
                            let ord = self.sequents[holder].delta.len() - 1;
                            self.fire_forall(ai, holder, ord, q)?;
                        }
                    }
                }
                for partner in self
                    .by_max_lit
                    .get(&(ctx, l.complement()))
                    .cloned()
                    .unwrap_or_default()
                {
                    if l.negated {
                        self.fire_resolve(q, partner, &l.name)?;
                    } else {
                        self.fire_resolve(partner, q, &l.name)?;
                    }
                }
            }
            Some(Atom::Exists(role, k)) => {
                let ord = seq.delta.len() - 1;
                for ai in 0..self.exists_lhs.len() {
                    self.fire_exists_elim(ai, q, ord, role.clone(), k)?;
                }
                for ai in 0..self.forall_rhs.len() {
                    let a = self.forall_rhs[ai].0.clone();
                    for provider in self
                        .by_max_lit
                        .get(&(ctx, Literal::pos(a)))
                        .cloned()
                        .unwrap_or_default()
                    {
                        self.fire_forall(ai, q, ord, provider)?;
                    }
                }
                if let Some(&bot) = self.bottom.get(&k) {
                    self.fire_bot(q, k, bot)?;
                }
            }
        }
        Ok(())
    }

    /// Hyperresolution with a clause `A₁ ⊓ … ⊓ Aₙ ⊑ B₁ ⊔ … ⊔ Bₘ`: one
    /// premise per conjunct, each matched on its maximal literal and
    /// contributing its remainder to the conclusion. Only combinations
    /// involving `q` are enumerated here — `q` is pinned at its first
    /// matching position; the rest fired when their own last premise was
    /// processed.
    fn fire_hyper(&mut self, clause_idx: usize, q: usize) -> Result<()> {
        let (lhs, rhs, axioms) = self.clauses[clause_idx].clone();
        let ctx = self.sequents[q].context;
        let names: Vec<String> = lhs.into_iter().collect();
        let cands: Vec<Vec<usize>> = names
            .iter()
            .map(|n| {
                self.by_max_lit
                    .get(&(ctx, Literal::pos(n)))
                    .cloned()
                    .unwrap_or_default()
            })
            .collect();
        if cands.iter().any(|c| c.is_empty()) {
            return Ok(());
        }
        for pin in 0..names.len() {
            if !cands[pin].contains(&q) {
                continue;
            }
            let mut odometer = vec![0usize; names.len()];
            'combos: loop {
                let picked: Vec<usize> = odometer
                    .iter()
                    .enumerate()
                    .map(|(j, &i)| if j == pin { q } else { cands[j][i] })
                    .collect();
                // Combinations whose first q sits before `pin` were already
                // enumerated under that pin.
                if !picked[..pin].contains(&q) {
                    let mut delta: Delta =
                        rhs.iter().map(|n| Atom::Lit(Literal::pos(n))).collect();
                    for (p, name) in picked.iter().zip(&names) {
                        let lit = Atom::Lit(Literal::pos(name));
                        delta.extend(
                            self.sequents[*p].delta.iter().filter(|a| **a != lit).cloned(),
                        );
                    }
                    self.record(ctx, delta, picked, axioms.clone(), "hyper", (1, clause_idx, 0, 0))?;
                }
                let mut pos = 0;
                loop {
                    if pos == pin {
                        pos += 1;
                    }
                    if pos >= odometer.len() {
                        break 'combos;
                    }
                    odometer[pos] += 1;
                    if odometer[pos] < cands[pos].len() {
                        break;
                    }
                    odometer[pos] = 0;
                    pos += 1;
                }
            }
        }
        Ok(())
    }

    /// Resolution inside a delta: `K ⊢ M ∨ ¬A` and `K ⊢ N ∨ A` give
    /// `K ⊢ M ∨ N`. Both resolved literals are maximal in their premises.
    fn fire_resolve(&mut self, qneg: usize, qpos: usize, name: &str) -> Result<()> {
        let neg = Atom::Lit(Literal::neg(name));
        let pos = Atom::Lit(Literal::pos(name));
        let sneg = self.sequents[qneg].clone();
        let spos = self.sequents[qpos].clone();
        let ord = sneg.delta.iter().position(|a| *a == neg).expect("negative literal present");
        let mut delta: Delta = sneg.delta.iter().filter(|a| **a != neg).cloned().collect();
        delta.extend(spos.delta.iter().filter(|a| **a != pos).cloned());
        self.record(
            sneg.context,
            delta,
            vec![qneg, qpos],
            BTreeSet::new(),
            "resolve",
            (2, 0, ord, 0),
        )
    }

    /// `K ⊢ M ∨ A` with `A ⊑ ∃R.B` gives `K ⊢ M ∨ ∃R.{B}`.
    fn fire_exists_intro(&mut self, ax_idx: usize, q: usize) -> Result<()> {
        let (a, role, b, axioms) = self.exists_rhs[ax_idx].clone();
        let seq = self.sequents[q].clone();
        let lit = Atom::Lit(Literal::pos(a));
        let succ = self.ensure_context([Literal::pos(b)].into())?;
        let mut delta: Delta = seq.delta.iter().filter(|x| **x != lit).cloned().collect();
        delta.insert(Atom::Exists(role, succ));
        self.record(seq.context, delta, vec![q], axioms, "exists-intro", (3, ax_idx, 0, 0))
    }

    /// `K ⊢ M ∨ ∃S.K'` with `∃R.F ⊑ C` and `S ⊑* R`: successors either
    /// satisfy `F` (then the parent is in `C`) or refine to `K' ∪ {¬F}`.
    fn fire_exists_elim(
        &mut self,
        ax_idx: usize,
        q: usize,
        atom_ord: usize,
        atom_role: String,
        succ: usize,
    ) -> Result<()> {
        let (role, filler, rhs, origin) = self.exists_lhs[ax_idx].clone();
        let sups = match self.supports.get(&(atom_role.clone(), role)) {
            Some(s) => s.clone(),
            None => return Ok(()),
        };
        let seq = self.sequents[q].clone();
        let k = self.contexts[succ].clone();
        let atom = Atom::Exists(atom_role.clone(), succ);
        for (sup_ord, sup) in sups.iter().enumerate() {
            let axioms: BTreeSet<AxiomId> = origin.union(sup).cloned().collect();
            let mut delta: Delta = seq.delta.iter().filter(|x| **x != atom).cloned().collect();
            delta.insert(Atom::Lit(Literal::pos(rhs.clone())));
            if k.contains(&Literal::neg(filler.clone())) {
                continue;
            }
            if !k.contains(&Literal::pos(filler.clone())) {
                let mut refined = k.clone();
                refined.insert(Literal::neg(filler.clone()));
                let k2 = self.ensure_context(refined)?;
                delta.insert(Atom::Exists(atom_role.clone(), k2));
            }
            self.record(
                seq.context,
                delta,
                vec![q],
                axioms,
                "exists-elim",
                (4, ax_idx, atom_ord, sup_ord),
            )?;
        }
        Ok(())
    }

    /// `K ⊢ M ∨ ∃S.K'` and `K ⊢ N ∨ A` with `A ⊑ ∀R.B`, `S ⊑* R`: either
    /// some disjunct of `M ∨ N` holds, or the successor also satisfies `B`.
    fn fire_forall(
        &mut self,
        ax_idx: usize,
        holder: usize,
        atom_ord: usize,
        provider: usize,
    ) -> Result<()> {
        let (a, role, b, origin) = self.forall_rhs[ax_idx].clone();
        let hseq = self.sequents[holder].clone();
        let (atom_role, succ) = match hseq.delta.iter().nth(atom_ord) {
            Some(Atom::Exists(r, k)) => (r.clone(), *k),
            _ => return Ok(()),
        };
        let sups = match self.supports.get(&(atom_role.clone(), role)) {
            Some(s) => s.clone(),
            None => return Ok(()),
        };
        let pseq = self.sequents[provider].clone();
        if pseq.context != hseq.context {
            return Ok(());
        }
        let k = self.contexts[succ].clone();
        let atom = Atom::Exists(atom_role.clone(), succ);
        let alit = Atom::Lit(Literal::pos(a));
        for (sup_ord, sup) in sups.iter().enumerate() {
            let axioms: BTreeSet<AxiomId> = origin.union(sup).cloned().collect();
            let mut delta: Delta = hseq.delta.iter().filter(|x| **x != atom).cloned().collect();
            delta.extend(pseq.delta.iter().filter(|x| **x != alit).cloned());
            if !k.contains(&Literal::neg(b.clone())) {
                let mut refined = k.clone();
                refined.insert(Literal::pos(b.clone()));
                let k2 = self.ensure_context(refined)?;
                delta.insert(Atom::Exists(atom_role.clone(), k2));
            }
            self.record(
                hseq.context,
                delta,
                vec![holder, provider],
                axioms,
                "forall",
                (5, ax_idx, atom_ord, sup_ord),
            )?;
        }
        Ok(())
    }

    /// `K ⊢ M ∨ ∃R.K'` where `K' ⊢ ∅`: the successor cannot exist. Fires on
    /// the host's maximal atom only; smaller existentials surface once it is
    /// gone.
    fn fire_bot(&mut self, host: usize, succ: usize, bot_seq: usize) -> Result<()> {
        let hseq = self.sequents[host].clone();
        match hseq.delta.iter().next_back() {
            Some(atom @ Atom::Exists(_, k)) if *k == succ => {
                let ord = hseq.delta.len() - 1;
                let delta: Delta = hseq.delta.iter().filter(|x| *x != atom).cloned().collect();
                self.record(
                    hseq.context,
                    delta,
                    vec![host, bot_seq],
                    BTreeSet::new(),
                    "bot-exists",
                    (6, 0, ord, 0),
                )
            }
            _ => Ok(()),
        }
    }
}
