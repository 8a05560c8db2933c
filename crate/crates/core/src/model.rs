//! Core data model: concept expressions, axioms, ontologies, signatures.
//!
//! An ontology is an ordered list of uniquely-identified axioms. Order is
//! textual order and is preserved by every operation that returns a
//! sub-ontology; identifiers are preserved as well, so axiom sets computed by
//! the pinpointing algorithms can always be traced back to input lines.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

// ===== identifiers =====

/// Identifier of an axiom, e.g. `ax12`.
///
/// Ordering is "natural": runs of digits compare numerically, so
/// `ax2 < ax10`. This is the ordering behind every deterministic sweep in the
/// crate (justification shrinking, child creation in the search tree, printed
/// axiom sets).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AxiomId(String);

impl AxiomId {
    pub fn new(s: impl Into<String>) -> Self {
        AxiomId(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for AxiomId {
    fn from(s: &str) -> Self {
        AxiomId::new(s)
    }
}

impl Ord for AxiomId {
    fn cmp(&self, other: &Self) -> Ordering {
        natural_cmp(&self.0, &other.0).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for AxiomId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Compare strings segment-wise, treating digit runs as numbers.
/// Ties (e.g. `ax01` vs `ax1`) are broken by the caller via plain string
/// comparison so the order stays total.
fn natural_cmp(a: &str, b: &str) -> Ordering {
    let ab = a.as_bytes();
    let bb = b.as_bytes();
    let (mut i, mut j) = (0, 0);
    while i < ab.len() && j < bb.len() {
        if ab[i].is_ascii_digit() && bb[j].is_ascii_digit() {
            let si = i;
            while i < ab.len() && ab[i].is_ascii_digit() {
                i += 1;
            }
            let sj = j;
            while j < bb.len() && bb[j].is_ascii_digit() {
                j += 1;
            }
            let na = a[si..i].trim_start_matches('0');
            let nb = b[sj..j].trim_start_matches('0');
            let ord = na.len().cmp(&nb.len()).then_with(|| na.cmp(nb));
            if ord != Ordering::Equal {
                return ord;
            }
        } else {
            let ord = ab[i].cmp(&bb[j]);
            if ord != Ordering::Equal {
                return ord;
            }
            i += 1;
            j += 1;
        }
    }
    (ab.len() - i).cmp(&(bb.len() - j))
}

// ===== concepts =====

/// A concept expression of the supported description logic.
///
/// `And` and `Or` always carry at least two operands; the helper
/// constructors [`ConceptExpr::and`] and [`ConceptExpr::or`] collapse the
/// degenerate cases. Structural equality and ordering are derived, which
/// makes expressions usable as map keys (the saturation engine relies on
/// this).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConceptExpr {
    Top,
    Bot,
    Name(String),
    Not(Box<ConceptExpr>),
    And(Vec<ConceptExpr>),
    Or(Vec<ConceptExpr>),
    /// Existential restriction `(some r C)`.
    Some(String, Box<ConceptExpr>),
    /// Universal restriction `(all r C)`.
    All(String, Box<ConceptExpr>),
}

impl ConceptExpr {
    pub fn name(n: impl Into<String>) -> Self {
        ConceptExpr::Name(n.into())
    }

    pub fn not(c: ConceptExpr) -> Self {
        ConceptExpr::Not(Box::new(c))
    }

    pub fn some(role: impl Into<String>, c: ConceptExpr) -> Self {
        ConceptExpr::Some(role.into(), Box::new(c))
    }

    pub fn all(role: impl Into<String>, c: ConceptExpr) -> Self {
        ConceptExpr::All(role.into(), Box::new(c))
    }

    /// Conjunction of `cs`; yields `Top` for zero operands and the operand
    /// itself for one.
    pub fn and(mut cs: Vec<ConceptExpr>) -> Self {
        match cs.len() {
            0 => ConceptExpr::Top,
            1 => cs.pop().unwrap(),
            _ => ConceptExpr::And(cs),
        }
    }

    /// Disjunction of `cs`; yields `Bot` for zero operands and the operand
    /// itself for one.
    pub fn or(mut cs: Vec<ConceptExpr>) -> Self {
        match cs.len() {
            0 => ConceptExpr::Bot,
            1 => cs.pop().unwrap(),
            _ => ConceptExpr::Or(cs),
        }
    }

    fn collect_signature(&self, sig: &mut Signature) {
        match self {
            ConceptExpr::Top | ConceptExpr::Bot => {}
            ConceptExpr::Name(n) => {
                sig.concepts.insert(n.clone());
            }
            ConceptExpr::Not(c) => c.collect_signature(sig),
            ConceptExpr::And(cs) | ConceptExpr::Or(cs) => {
                for c in cs {
                    c.collect_signature(sig);
                }
            }
            ConceptExpr::Some(r, c) | ConceptExpr::All(r, c) => {
                sig.roles.insert(r.clone());
                c.collect_signature(sig);
            }
        }
    }
}

impl fmt::Display for ConceptExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConceptExpr::Top => f.write_str("Top"),
            ConceptExpr::Bot => f.write_str("Bot"),
            ConceptExpr::Name(n) => f.write_str(n),
            ConceptExpr::Not(c) => write!(f, "(not {c})"),
            ConceptExpr::And(cs) => {
                f.write_str("(and")?;
                for c in cs {
                    write!(f, " {c}")?;
                }
                f.write_str(")")
            }
            ConceptExpr::Or(cs) => {
                f.write_str("(or")?;
                for c in cs {
                    write!(f, " {c}")?;
                }
                f.write_str(")")
            }
            ConceptExpr::Some(r, c) => write!(f, "(some {r} {c})"),
            ConceptExpr::All(r, c) => write!(f, "(all {r} {c})"),
        }
    }
}

// ===== axioms =====

/// General concept inclusion `lhs ⊑ rhs`, printed as `(sub lhs rhs)`.
///
/// Also the type of query goals.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gci {
    pub lhs: ConceptExpr,
    pub rhs: ConceptExpr,
}

impl Gci {
    pub fn new(lhs: ConceptExpr, rhs: ConceptExpr) -> Self {
        Gci { lhs, rhs }
    }

    /// Inclusion between two concept names.
    pub fn atomic(lhs: impl Into<String>, rhs: impl Into<String>) -> Self {
        Gci::new(ConceptExpr::name(lhs), ConceptExpr::name(rhs))
    }

    /// True when both sides are plain concept names.
    pub fn is_atomic(&self) -> bool {
        matches!(
            (&self.lhs, &self.rhs),
            (ConceptExpr::Name(_), ConceptExpr::Name(_))
        )
    }
}

impl fmt::Display for Gci {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(sub {} {})", self.lhs, self.rhs)
    }
}

/// Role inclusion `sub ⊑ sup`, printed as `(rsub sub sup)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RoleInclusion {
    pub sub: String,
    pub sup: String,
}

impl fmt::Display for RoleInclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(rsub {} {})", self.sub, self.sup)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AxiomKind {
    Gci(Gci),
    RoleInclusion(RoleInclusion),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Axiom {
    pub id: AxiomId,
    pub kind: AxiomKind,
}

impl Axiom {
    pub fn gci(id: impl Into<String>, lhs: ConceptExpr, rhs: ConceptExpr) -> Self {
        Axiom {
            id: AxiomId::new(id),
            kind: AxiomKind::Gci(Gci::new(lhs, rhs)),
        }
    }

    pub fn role_inclusion(id: impl Into<String>, sub: impl Into<String>, sup: impl Into<String>) -> Self {
        Axiom {
            id: AxiomId::new(id),
            kind: AxiomKind::RoleInclusion(RoleInclusion {
                sub: sub.into(),
                sup: sup.into(),
            }),
        }
    }

    pub fn as_gci(&self) -> Option<&Gci> {
        match &self.kind {
            AxiomKind::Gci(g) => Some(g),
            AxiomKind::RoleInclusion(_) => None,
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            AxiomKind::Gci(g) => write!(f, "{}: {}", self.id, g),
            AxiomKind::RoleInclusion(r) => write!(f, "{}: {}", self.id, r),
        }
    }
}

// ===== signature =====

/// The concept and role names occurring in some syntactic object.
/// `Top`/`Bot` are logical symbols, not names, and never appear here.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    pub concepts: BTreeSet<String>,
    pub roles: BTreeSet<String>,
}

impl Signature {
    pub fn union(mut self, other: &Signature) -> Signature {
        self.extend(other);
        self
    }

    pub fn extend(&mut self, other: &Signature) {
        self.concepts.extend(other.concepts.iter().cloned());
        self.roles.extend(other.roles.iter().cloned());
    }

    pub fn contains_concept(&self, name: &str) -> bool {
        self.concepts.contains(name)
    }

    pub fn contains_role(&self, name: &str) -> bool {
        self.roles.contains(name)
    }
}

/// Anything with a signature: concepts, axioms, goals, whole ontologies.
pub trait HasSignature {
    fn signature(&self) -> Signature;
}

impl HasSignature for ConceptExpr {
    fn signature(&self) -> Signature {
        let mut sig = Signature::default();
        self.collect_signature(&mut sig);
        sig
    }
}

impl HasSignature for Gci {
    fn signature(&self) -> Signature {
        let mut sig = self.lhs.signature();
        sig.extend(&self.rhs.signature());
        sig
    }
}

impl HasSignature for Axiom {
    fn signature(&self) -> Signature {
        match &self.kind {
            AxiomKind::Gci(g) => g.signature(),
            AxiomKind::RoleInclusion(r) => {
                let mut sig = Signature::default();
                sig.roles.insert(r.sub.clone());
                sig.roles.insert(r.sup.clone());
                sig
            }
        }
    }
}

impl HasSignature for Ontology {
    fn signature(&self) -> Signature {
        let mut sig = Signature::default();
        for ax in self.iter() {
            sig.extend(&ax.signature());
        }
        sig
    }
}

// ===== ontology =====

/// An ordered collection of axioms with unique identifiers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ontology {
    axioms: Vec<Axiom>,
    by_id: BTreeMap<AxiomId, usize>,
}

impl Ontology {
    /// Build an ontology, rejecting duplicate identifiers.
    pub fn new(axioms: Vec<Axiom>) -> Result<Self> {
        let mut by_id = BTreeMap::new();
        for (i, ax) in axioms.iter().enumerate() {
            if by_id.insert(ax.id.clone(), i).is_some() {
                return Err(Error::DuplicateId {
                    id: ax.id.to_string(),
                });
            }
        }
        Ok(Ontology { axioms, by_id })
    }

    pub fn empty() -> Self {
        Ontology {
            axioms: Vec::new(),
            by_id: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.axioms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axioms.is_empty()
    }

    /// Axioms in textual order.
    pub fn iter(&self) -> impl Iterator<Item = &Axiom> {
        self.axioms.iter()
    }

    pub fn get(&self, id: &AxiomId) -> Option<&Axiom> {
        self.by_id.get(id).map(|&i| &self.axioms[i])
    }

    pub fn contains(&self, id: &AxiomId) -> bool {
        self.by_id.contains_key(id)
    }

    /// All identifiers, in textual order.
    pub fn ids(&self) -> impl Iterator<Item = &AxiomId> {
        self.axioms.iter().map(|a| &a.id)
    }

    /// The identifiers as a set.
    pub fn id_set(&self) -> BTreeSet<AxiomId> {
        self.ids().cloned().collect()
    }

    /// Concept inclusions with their identifiers, in textual order.
    pub fn gcis(&self) -> impl Iterator<Item = (&AxiomId, &Gci)> {
        self.axioms.iter().filter_map(|a| match &a.kind {
            AxiomKind::Gci(g) => Some((&a.id, g)),
            AxiomKind::RoleInclusion(_) => None,
        })
    }

    /// Role inclusions with their identifiers, in textual order.
    pub fn role_inclusions(&self) -> impl Iterator<Item = (&AxiomId, &RoleInclusion)> {
        self.axioms.iter().filter_map(|a| match &a.kind {
            AxiomKind::RoleInclusion(r) => Some((&a.id, r)),
            AxiomKind::Gci(_) => None,
        })
    }

    /// Sub-ontology containing exactly the axioms in `keep`, in the original
    /// textual order. Identifiers not present in the ontology are ignored.
    pub fn restrict(&self, keep: &BTreeSet<AxiomId>) -> Ontology {
        let axioms: Vec<Axiom> = self
            .axioms
            .iter()
            .filter(|a| keep.contains(&a.id))
            .cloned()
            .collect();
        Ontology::new(axioms).expect("subset of unique ids stays unique")
    }

    /// Sub-ontology without the axioms in `remove`.
    pub fn without(&self, remove: &BTreeSet<AxiomId>) -> Ontology {
        let axioms: Vec<Axiom> = self
            .axioms
            .iter()
            .filter(|a| !remove.contains(&a.id))
            .cloned()
            .collect();
        Ontology::new(axioms).expect("subset of unique ids stays unique")
    }

    /// Sub-ontology without a single axiom.
    pub fn without_one(&self, remove: &AxiomId) -> Ontology {
        let axioms: Vec<Axiom> = self
            .axioms
            .iter()
            .filter(|a| &a.id != remove)
            .cloned()
            .collect();
        Ontology::new(axioms).expect("subset of unique ids stays unique")
    }
}

/// Canonical text form: one axiom per line, identifiers always explicit.
/// `parse_ontology(serialize_ontology(o)) == o` holds for every ontology,
/// including identifier and ordering round-trips.
pub fn serialize_ontology(o: &Ontology) -> String {
    let lines: Vec<String> = o.iter().map(|a| a.to_string()).collect();
    lines.join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_id_order() {
        let mut ids: Vec<AxiomId> = ["ax10", "ax2", "ax1", "j3", "ax21"]
            .iter()
            .map(|s| AxiomId::new(*s))
            .collect();
        ids.sort();
        let sorted: Vec<&str> = ids.iter().map(|i| i.as_str()).collect();
        assert_eq!(sorted, vec!["ax1", "ax2", "ax10", "ax21", "j3"]);
    }

    #[test]
    fn natural_id_order_is_total_on_zero_padding() {
        let a = AxiomId::new("ax01");
        let b = AxiomId::new("ax1");
        assert_ne!(a.cmp(&b), Ordering::Equal);
        assert_eq!(a.cmp(&b), b.cmp(&a).reverse());
    }

    #[test]
    fn duplicate_ids_rejected() {
        let axioms = vec![
            Axiom::gci("ax1", ConceptExpr::name("A"), ConceptExpr::name("B")),
            Axiom::gci("ax1", ConceptExpr::name("B"), ConceptExpr::name("C")),
        ];
        assert!(matches!(
            Ontology::new(axioms),
            Err(Error::DuplicateId { .. })
        ));
    }

    #[test]
    fn restrict_preserves_order() {
        let o = Ontology::new(vec![
            Axiom::gci("ax1", ConceptExpr::name("A"), ConceptExpr::name("B")),
            Axiom::gci("ax2", ConceptExpr::name("B"), ConceptExpr::name("C")),
            Axiom::gci("ax3", ConceptExpr::name("C"), ConceptExpr::name("D")),
        ])
        .unwrap();
        let keep: BTreeSet<AxiomId> = [AxiomId::new("ax3"), AxiomId::new("ax1")].into();
        let sub = o.restrict(&keep);
        let ids: Vec<&str> = sub.ids().map(|i| i.as_str()).collect();
        assert_eq!(ids, vec!["ax1", "ax3"]);
    }

    #[test]
    fn concept_display_round_trips_structure() {
        let c = ConceptExpr::some(
            "r",
            ConceptExpr::and(vec![
                ConceptExpr::name("A"),
                ConceptExpr::not(ConceptExpr::name("B")),
                ConceptExpr::Top,
            ]),
        );
        assert_eq!(c.to_string(), "(some r (and A (not B) Top))");
    }

    #[test]
    fn signature_excludes_top_bot() {
        let g = Gci::new(
            ConceptExpr::and(vec![ConceptExpr::name("A"), ConceptExpr::Top]),
            ConceptExpr::some("r", ConceptExpr::Bot),
        );
        let sig = g.signature();
        assert_eq!(sig.concepts.into_iter().collect::<Vec<_>>(), vec!["A"]);
        assert_eq!(sig.roles.into_iter().collect::<Vec<_>>(), vec!["r"]);
    }

    #[test]
    fn serialize_empty_is_empty_string() {
        assert_eq!(serialize_ontology(&Ontology::empty()), "");
    }
}
