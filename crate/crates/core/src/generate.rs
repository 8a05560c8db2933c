//! Deterministic pseudo-random ontologies for benchmarks and the
//! cross-validation suites. Same seed, same ontology — the stream is pinned
//! to ChaCha8 so results are reproducible across platforms and releases.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{Axiom, AxiomKind, ConceptExpr, Ontology};

/// Constructor palette. `El` draws from ⊓, ∃, ⊤ only; `Alc` adds ¬, ⊔, ∀, ⊥.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    El,
    Alc,
}

impl std::str::FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "el" => Ok(Profile::El),
            "alc" => Ok(Profile::Alc),
            _ => Err(Error::Parse {
                line: 0,
                column: 0,
                message: format!("unknown profile `{s}`; expected `el` or `alc`"),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct GenConfig {
    pub n_axioms: usize,
    pub n_concepts: usize,
    pub n_roles: usize,
    pub profile: Profile,
}

impl GenConfig {
    /// `n_axioms` axioms over the default signature of 8 concept names and
    /// 3 roles.
    pub fn new(profile: Profile, n_axioms: usize) -> Self {
        GenConfig {
            n_axioms,
            n_concepts: 8,
            n_roles: 3,
            profile,
        }
    }
}

pub fn generate(cfg: &GenConfig, seed: u64) -> Ontology {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let concepts: Vec<String> = (0..cfg.n_concepts).map(concept_name).collect();
    let roles: Vec<String> = (0..cfg.n_roles).map(role_name).collect();
    let mut axioms = Vec::with_capacity(cfg.n_axioms);
    for i in 0..cfg.n_axioms {
        // Atomic left-hand sides dominate so that atomic inclusions have
        // interesting consequence structure.
        let lhs = if rng.gen::<f64>() < 0.7 {
            name(&mut rng, &concepts)
        } else {
            concept(&mut rng, cfg, &concepts, &roles, 1)
        };
        let rhs = concept(&mut rng, cfg, &concepts, &roles, 2);
        axioms.push(Axiom::gci(format!("ax{}", i + 1), lhs, rhs));
    }
    Ontology::new(axioms).expect("generated ids are distinct")
}

/// One parseable line per axiom; `parse_ontology(render(o))` reproduces the
/// axioms in order (ids are positional in both directions).
pub fn render(o: &Ontology) -> String {
    let mut out = String::new();
    for ax in o.iter() {
        match &ax.kind {
            AxiomKind::Gci(g) => out.push_str(&g.to_string()),
            AxiomKind::RoleInclusion(r) => out.push_str(&r.to_string()),
        }
        out.push('\n');
    }
    out
}

fn concept_name(i: usize) -> String {
    if i < 26 {
        ((b'A' + i as u8) as char).to_string()
    } else {
        format!("N{i}")
    }
}

fn role_name(i: usize) -> String {
    match i {
        0 => "r".into(),
        1 => "s".into(),
        2 => "t".into(),
        _ => format!("r{i}"),
    }
}

fn name(rng: &mut ChaCha8Rng, concepts: &[String]) -> ConceptExpr {
    ConceptExpr::name(&concepts[rng.gen_range(0..concepts.len())])
}

fn concept(
    rng: &mut ChaCha8Rng,
    cfg: &GenConfig,
    concepts: &[String],
    roles: &[String],
    depth: usize,
) -> ConceptExpr {
    let x = rng.gen::<f64>();
    if depth == 0 {
        return match cfg.profile {
            Profile::El if x < 0.92 => name(rng, concepts),
            Profile::El => ConceptExpr::Top,
            Profile::Alc if x < 0.90 => name(rng, concepts),
            Profile::Alc if x < 0.96 => ConceptExpr::Top,
            Profile::Alc => ConceptExpr::Bot,
        };
    }
    let sub = |rng: &mut ChaCha8Rng| concept(rng, cfg, concepts, roles, depth - 1);
    let role = |rng: &mut ChaCha8Rng| roles[rng.gen_range(0..roles.len())].clone();
    match cfg.profile {
        Profile::El => {
            if x < 0.60 {
                name(rng, concepts)
            } else if x < 0.80 {
                let (a, b) = (sub(rng), sub(rng));
                ConceptExpr::and(vec![a, b])
            } else if x < 0.95 {
                let r = role(rng);
                ConceptExpr::some(r, sub(rng))
            } else {
                ConceptExpr::Top
            }
        }
        Profile::Alc => {
            if x < 0.45 {
                name(rng, concepts)
            } else if x < 0.57 {
                let (a, b) = (sub(rng), sub(rng));
                ConceptExpr::and(vec![a, b])
            } else if x < 0.69 {
                let (a, b) = (sub(rng), sub(rng));
                ConceptExpr::or(vec![a, b])
            } else if x < 0.79 {
                let r = role(rng);
                ConceptExpr::some(r, sub(rng))
            } else if x < 0.87 {
                let r = role(rng);
                ConceptExpr::all(r, sub(rng))
            } else if x < 0.95 {
                ConceptExpr::not(sub(rng))
            } else if x < 0.98 {
                ConceptExpr::Top
            } else {
                ConceptExpr::Bot
            }
        }
    }
}
