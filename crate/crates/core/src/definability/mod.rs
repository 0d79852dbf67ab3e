//! Σ-definability: signature copies, label propagation and verified definitions.
//!
//! `C` is Σ-definable with respect to `O` iff `O ∪ O* ⊨ C ⊑ C*`, where `O*` and `C*` rename
//! every non-Σ symbol to a fresh copy. Definitions are the disjuncts of the label of
//! `C ⊑ C*` in a proof-tracing saturation of `O ∪ O*`.

mod interpolant;
mod label;

use std::collections::BTreeMap;

pub use interpolant::interpolant_from_proof;
pub use label::{compute_labels, dnf, Label, LabelExpr, LabelLimits};

use crate::error::Error;
use crate::model::{canonicalize, signature_of, Axiom, Concept, Ontology, Signature, Symbol};
use crate::reasoner::{proofs, saturate, saturate_goal_directed, Inclusion, ProofLimits, System};

/// The injective renaming of non-Σ symbols to fresh copies.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RenameMap {
    pub forward: BTreeMap<Symbol, Symbol>,
    pub sigma: Signature,
}

impl RenameMap {
    pub fn apply(&self, s: &Symbol) -> Symbol {
        self.forward.get(s).cloned().unwrap_or_else(|| s.clone())
    }

    pub fn concept(&self, c: &Concept) -> Concept {
        c.rename(&|s| self.apply(s))
    }

    pub fn ontology(&self, o: &Ontology) -> Ontology {
        o.rename(&|s| self.apply(s))
    }
}

/// Builds `(O*, C*)` by renaming every symbol of `O` and `C` outside `sigma` to its `@c` copy.
pub fn rename_copy(o: &Ontology, c: &Concept, sigma: &Signature) -> (Ontology, Concept, RenameMap) {
    let used = signature_of(o).union(&signature_of(c));
    let forward = used.difference(sigma).into_iter().map(|s| (s.clone(), s.fresh_copy())).collect();
    let map = RenameMap { forward, sigma: sigma.clone() };
    (map.ontology(o), map.concept(c), map)
}

/// Whether `c` is definable over `sigma` with respect to `o`.
pub fn is_definable(o: &Ontology, c: &Concept, sigma: &Signature) -> Result<bool, Error> {
    let (o_star, c_star, _) = rename_copy(o, c, sigma);
    let log = saturate(&o.union(&o_star), &[c.clone(), c_star.clone()], System::B)?;
    Ok(log.entails(c, &c_star))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DefineOptions {
    pub limits: LabelLimits,
    /// Keep one size-minimal representative per class of definitions equivalent wrt `O`.
    pub semantic_dedup: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DefinitionStats {
    pub conclusions: usize,
    pub inferences: usize,
    pub inferences_visited: usize,
    pub label_size: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DefinitionResult {
    pub definable: bool,
    /// Canonical, deduplicated, ordered by size and then structurally.
    pub definitions: Vec<Concept>,
    pub truncated: bool,
    pub stats: DefinitionStats,
}

pub fn define(o: &Ontology, c: &Concept, sigma: &Signature, limits: LabelLimits) -> Result<DefinitionResult, Error> {
    define_with(o, c, sigma, &DefineOptions { limits, semantic_dedup: false })
}

/// Decides definability and returns every definition found in the label of `C ⊑ C*`, each
/// verified against `O` before it is returned.
///
/// When `O ⊨ C ⊑ ⊥` (or `O ⊨ ⊤ ⊑ C`) the label is not computed: the result is `⊥` (or `⊤`),
/// together with `C` itself when `sig(C) ⊆ Σ`. When caps leave the label empty, an
/// interpolant is read off a basic-calculus proof instead.
///
/// Errors with [`Error::ResourceLimit`] when the goal is derived but every candidate was
/// cut by the caps, and with [`Error::InternalSoundness`] when a candidate fails
/// verification or no candidate exists at all.
pub fn define_with(o: &Ontology, c: &Concept, sigma: &Signature, opts: &DefineOptions) -> Result<DefinitionResult, Error> {
    let c = canonicalize(c);
    let (o_star, c_star, _) = rename_copy(o, &c, sigma);
    let log = saturate(&o.union(&o_star), &[c.clone(), c_star.clone()], System::B)?;
    let mut stats = DefinitionStats { conclusions: log.conclusion_count(), inferences: log.inference_count(), ..Default::default() };
    if !log.entails(&c, &c_star) {
        return Ok(DefinitionResult { definable: false, stats, ..Default::default() });
    }
    // when C collapses to ⊥ or ⊤ every definition is equivalent to it, and the collapse puts
    // most of the log into one cycle
    let collapsed = if log.entails(&c, &Concept::Bottom) {
        Some(Concept::Bottom)
    } else if log.entails(&Concept::Top, &c) {
        Some(Concept::Top)
    } else {
        None
    };
    let (candidates, truncated) = match collapsed {
        Some(d) => {
            let mut candidates = vec![d];
            let mut truncated = false;
            if signature_of(&c).is_subset(sigma) && !candidates.contains(&c) {
                if c.size() <= opts.limits.max_concept_size {
                    candidates.push(c.clone());
                } else {
                    truncated = true;
                }
            }
            stats.label_size = candidates.len();
            (candidates, truncated)
        }
        None => {
            let label = compute_labels(&log, &Inclusion::new(c.clone(), c_star.clone()), sigma, opts.limits)?;
            stats.inferences_visited = label.inferences_visited;
            stats.label_size = label.conjuncts.len();
            if label.is_epsilon() && !label.truncated {
                return Err(Error::InternalSoundness(format!("{c} ⊑ {c_star} is derived but its label is empty")));
            }
            let candidates: Vec<Concept> = if label.is_epsilon() {
                interpolant_fallback(o, &o_star, &c, &c_star, sigma, opts.limits.max_concept_size)?
                    .ok_or(Error::ResourceLimit { what: "label entries within the size cap", limit: opts.limits.max_concept_size })?
            } else {
                label.conjuncts.into_disjuncts().into_iter().map(|d| canonicalize(&d)).collect()
            };
            (candidates, label.truncated)
        }
    };
    let mut definitions = verify(o, &c, sigma, candidates)?;
    definitions.sort_by(|a, b| a.size().cmp(&b.size()).then_with(|| a.cmp(b)));
    definitions.dedup();
    if opts.semantic_dedup {
        definitions = semantic_dedup(o, definitions)?;
    }
    Ok(DefinitionResult { definable: true, definitions, truncated, stats })
}

/// Proofs tried when a truncated label is empty.
const FALLBACK_PROOFS: usize = 1000;

/// A single interpolant within the size cap, read off some basic-calculus proof of
/// `C ⊑ C*`, when a truncated label produced nothing.
fn interpolant_fallback(
    o: &Ontology,
    o_star: &Ontology,
    c: &Concept,
    c_star: &Concept,
    sigma: &Signature,
    max_size: usize,
) -> Result<Option<Vec<Concept>>, Error> {
    let log = saturate(&o.union(o_star), &[c.clone(), c_star.clone()], System::A)?;
    let goal = Inclusion::new(c.clone(), c_star.clone());
    let partition = (&signature_of(o), &signature_of(o_star));
    for proof in proofs(&log, &goal, ProofLimits { max_proofs: FALLBACK_PROOFS }) {
        if let Ok(d) = interpolant_from_proof(&proof, sigma, partition) {
            let d = canonicalize(&d);
            if d.size() <= max_size {
                return Ok(Some(vec![d]));
            }
        }
    }
    Ok(None)
}

/// Total candidate size registered as goals in one verification saturation.
const VERIFY_CHUNK: usize = 64;

/// Splits `cs` into runs whose total size stays within [`VERIFY_CHUNK`].
fn chunks(cs: &[Concept]) -> Vec<&[Concept]> {
    let mut out = Vec::new();
    let (mut start, mut total) = (0, 0);
    for (i, d) in cs.iter().enumerate() {
        if i > start && total + d.size() > VERIFY_CHUNK {
            out.push(&cs[start..i]);
            (start, total) = (i, 0);
        }
        total += d.size();
    }
    if start < cs.len() {
        out.push(&cs[start..]);
    }
    out
}

/// Checks every candidate against `O` with goal-directed basic-calculus saturations over
/// bounded chunks.
fn verify(o: &Ontology, c: &Concept, sigma: &Signature, candidates: Vec<Concept>) -> Result<Vec<Concept>, Error> {
    for d in &candidates {
        if !signature_of(d).is_subset(sigma) {
            return Err(Error::InternalSoundness(format!("candidate {d} leaves the signature {sigma}")));
        }
    }
    for chunk in chunks(&candidates) {
        let mut goals = chunk.to_vec();
        goals.push(c.clone());
        let log = saturate_goal_directed(o, &goals)?;
        for d in chunk {
            if !(log.entails(c, d) && log.entails(d, c)) {
                return Err(Error::InternalSoundness(format!("candidate {d} is not equivalent to {c}")));
            }
        }
    }
    Ok(candidates)
}

/// Keeps the first (smallest) member of each class of definitions equivalent wrt `o`.
fn semantic_dedup(o: &Ontology, sorted: Vec<Concept>) -> Result<Vec<Concept>, Error> {
    let mut kept: Vec<Concept> = Vec::new();
    for chunk in chunks(&sorted) {
        let mut goals = kept.clone();
        goals.extend(chunk.iter().cloned());
        let log = saturate_goal_directed(o, &goals)?;
        for d in chunk {
            if !kept.iter().any(|k| log.entails(k, d) && log.entails(d, k)) {
                kept.push(d.clone());
            }
        }
    }
    Ok(kept)
}

/// The nested family `A_0 ≡ ∃r.A_1 ⊓ ∃s.A_1, …, A_{n-1} ≡ ∃r.A_n ⊓ ∃s.A_n, A_n ≡ D_1,
/// A_n ≡ D_2` with `C = A_0` and `Σ = {r, s, D_1, D_2}`.
///
/// # Panics
/// If `n == 0`.
pub fn generate_family(n: usize) -> (Ontology, Concept, Signature) {
    assert!(n >= 1, "the family starts at n = 1");
    let a = |i: usize| Concept::name(format!("A_{i}"));
    let mut axioms: Vec<Axiom> = (0..n)
        .map(|i| Axiom::EquivalentClasses(a(i), Concept::and([Concept::exists("r", a(i + 1)), Concept::exists("s", a(i + 1))])))
        .collect();
    axioms.push(Axiom::EquivalentClasses(a(n), Concept::name("D_1")));
    axioms.push(Axiom::EquivalentClasses(a(n), Concept::name("D_2")));
    let sigma = [Symbol::role("r"), Symbol::role("s"), Symbol::concept("D_1"), Symbol::concept("D_2")].into_iter().collect();
    (Ontology::new(axioms), a(0), sigma)
}
