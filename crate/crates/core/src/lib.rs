//! Axiom pinpointing for ALC ontologies.
//!
//! Given an ontology `O` and an entailed inclusion `α`, a *justification* is
//! a ⊆-minimal subset of `O` that still entails `α`. This crate computes the
//! intersection (the *core*) and the union of all justifications — both
//! without enumerating every justification — and derives the optimal repairs
//! of the entailment from them:
//!
//! - a deletion-based core test and a pruned hitting-set-tree search over a
//!   black-box entailment oracle ([`hst`]),
//! - a reduction to minimal-unsatisfiable-subformula membership on a SAT
//!   encoding of a consequence-based saturation trace ([`encoding`]),
//! - exhaustive baselines used to cross-check both ([`brute`], [`semantics`]).
//!
//! The [`methods`] module exposes the union algorithms behind a common trait
//! with runtime registration, and [`repair`] turns justification structure
//! into minimal hitting sets and optimal repairs.

pub mod brute;
pub mod cnf;
pub mod encoding;
pub mod error;
pub mod generate;
pub mod hst;
pub mod locality;
pub mod methods;
pub mod model;
pub mod normalize;
pub mod parser;
pub mod repair;
pub mod saturation;
pub mod semantics;
pub mod tableau;

pub use error::{Error, Result};
pub use model::{Axiom, AxiomId, AxiomKind, ConceptExpr, Gci, HasSignature, Ontology, RoleInclusion, Signature};
pub use tableau::Oracle;
