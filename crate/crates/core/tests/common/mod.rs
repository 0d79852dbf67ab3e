//! Generators and checks shared by the integration suites.
#![allow(dead_code)]

use std::collections::BTreeSet;

use eldef_core::oracle::{eval_concept, Interpretation};
use eldef_core::reasoner::{saturate, InferenceLog, Rule, System};
use eldef_core::{canonicalize, signature_of, subconcept_closure, Axiom, Concept, Ontology, Signature, Symbol};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn n(s: &str) -> Concept {
    Concept::name(s)
}

pub fn random_concept(rng: &mut impl Rng, names: &[&str], roles: &[&str], depth: usize) -> Concept {
    let leaf = |rng: &mut dyn rand::RngCore| -> Concept {
        match rng.gen_range(0..10) {
            0 => Concept::Top,
            1 => Concept::Bottom,
            _ => n(names.choose(rng).expect("names")),
        }
    };
    if depth == 0 {
        return leaf(rng);
    }
    match rng.gen_range(0..4) {
        0 => leaf(rng),
        1 => Concept::exists(*roles.choose(rng).expect("roles"), random_concept(rng, names, roles, depth - 1)),
        _ => {
            let k = rng.gen_range(2..=3);
            Concept::Conj((0..k).map(|_| random_concept(rng, names, roles, depth - 1)).collect())
        }
    }
}

pub fn random_axiom(rng: &mut impl Rng, names: &[&str], roles: &[&str], depth: usize) -> Axiom {
    let l = random_concept(rng, names, roles, depth);
    let r = random_concept(rng, names, roles, depth);
    if rng.gen_bool(0.25) {
        Axiom::EquivalentClasses(l, r)
    } else {
        Axiom::SubClassOf(l, r)
    }
}

pub fn random_ontology(rng: &mut impl Rng, axioms: usize, names: &[&str], roles: &[&str], depth: usize) -> Ontology {
    Ontology::new((0..axioms).map(|_| random_axiom(rng, names, roles, depth)))
}

pub fn random_subset(rng: &mut impl Rng, sig: &Signature) -> Signature {
    sig.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect()
}

/// Every subset of `sig`.
pub fn subsets(sig: &Signature) -> Vec<Signature> {
    let all: Vec<Symbol> = sig.iter().cloned().collect();
    (0u32..1 << all.len())
        .map(|mask| all.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, s)| s.clone()).collect())
        .collect()
}

/// The micro-corpus concept pool over concept names `A`, `B` and role `r`.
pub fn micro_pool() -> Vec<Concept> {
    vec![
        Concept::Top,
        Concept::Bottom,
        n("A"),
        n("B"),
        Concept::and([n("A"), n("B")]),
        Concept::exists("r", Concept::Top),
        Concept::exists("r", n("A")),
        Concept::exists("r", n("B")),
        Concept::exists("r", Concept::and([n("A"), n("B")])),
    ]
}

/// Every non-tautological axiom over the pool: `X ⊑ Y` with `X ≠ Y`, `X ≠ ⊥`, `Y ≠ ⊤`,
/// and `X ≡ Y` for distinct `X`, `Y`.
pub fn micro_axioms() -> Vec<Axiom> {
    let pool = micro_pool();
    let mut out = Vec::new();
    for (i, x) in pool.iter().enumerate() {
        for (j, y) in pool.iter().enumerate() {
            if i != j && !x.is_bottom() && !y.is_top() {
                out.push(Axiom::sub(x.clone(), y.clone()));
            }
            if i < j {
                out.push(Axiom::equiv(x.clone(), y.clone()));
            }
        }
    }
    out
}

/// All ontologies of 1 to `max_axioms` distinct pool axioms.
pub fn micro_corpus(max_axioms: usize) -> Vec<Ontology> {
    fn go(axioms: &[Axiom], from: usize, left: usize, chosen: &mut Vec<Axiom>, out: &mut Vec<Ontology>) {
        if !chosen.is_empty() {
            out.push(Ontology::new(chosen.iter().cloned()));
        }
        if left == 0 {
            return;
        }
        for i in from..axioms.len() {
            chosen.push(axioms[i].clone());
            go(axioms, i + 1, left - 1, chosen, out);
            chosen.pop();
        }
    }
    let mut out = Vec::new();
    go(&micro_axioms(), 0, max_axioms, &mut Vec::new(), &mut out);
    out
}

/// Pairs `(l, r)` of universe members on which the two engines disagree.
pub fn engine_disagreements(o: &Ontology, goals: &[Concept]) -> Vec<(Concept, Concept)> {
    let a = saturate(o, goals, System::A).expect("saturation A");
    let b = saturate(o, goals, System::B).expect("saturation B");
    let universe: Vec<Concept> = subconcept_closure(o, goals).into_iter().collect();
    let mut out = Vec::new();
    for l in &universe {
        for r in &universe {
            if a.entails(l, r) != b.entails(l, r) {
                out.push((l.clone(), r.clone()));
            }
        }
    }
    out
}

/// Conclusions of a basic-calculus log whose right side occurs neither in the left side
/// nor in `o` or the goals, excluding `R_⊤`, `R_⊥` and `R_∃⊥` conclusions.
pub fn occurrence_violations(log: &InferenceLog, o: &Ontology, goals: &[Concept]) -> Vec<String> {
    let occurring = subconcept_closure(o, goals);
    let mut out = Vec::new();
    for rec in log.records() {
        if matches!(rec.rule, Rule::RTop | Rule::RBot | Rule::RExistsBot) {
            continue;
        }
        let inc = log.inclusion(rec.conclusion);
        let in_lhs = subconcept_closure(&Ontology::empty(), std::slice::from_ref(&inc.lhs)).contains(&inc.rhs);
        if !in_lhs && !occurring.contains(&inc.rhs) {
            out.push(format!("{} by {}", inc, rec.rule));
        }
    }
    out
}

/// Checks every definition of `c`: signature within `sigma`, equivalence to `c` under both
/// engines, and equal extensions in every model. Returns one message per failing definition.
pub fn check_definitions(o: &Ontology, c: &Concept, sigma: &Signature, defs: &[Concept], models: &[Interpretation]) -> Vec<String> {
    defs.iter().filter_map(|d| check_definition(o, c, sigma, d, models).err()).collect()
}

fn check_definition(o: &Ontology, c: &Concept, sigma: &Signature, d: &Concept, models: &[Interpretation]) -> Result<(), String> {
    if !signature_of(d).is_subset(sigma) {
        return Err(format!("{d} leaves {sigma}"));
    }
    for system in System::ALL {
        let log = saturate(o, &[c.clone(), d.clone()], system).map_err(|e| format!("{d}: {e}"))?;
        if !(log.entails(c, d) && log.entails(d, c)) {
            return Err(format!("{d} not equivalent to {c} under {system}"));
        }
    }
    if models.iter().any(|m| eval_concept(m, c) != eval_concept(m, d)) {
        return Err(format!("{d} and {c} differ in a sampled model"));
    }
    Ok(())
}

/// Structural facts about a family definition: every `D_i` leaf sits under exactly `depth`
/// restrictions. Returns the number of leaves.
pub fn family_leaves(d: &Concept, depth: usize) -> Option<usize> {
    match d {
        Concept::Name(x) if depth == 0 && (x.as_ref() == "D_1" || x.as_ref() == "D_2") => Some(1),
        Concept::Exists(r, f) if depth > 0 && (r.as_ref() == "r" || r.as_ref() == "s") => family_leaves(f, depth - 1),
        Concept::Conj(parts) => parts.iter().map(|p| family_leaves(p, depth)).sum(),
        _ => None,
    }
}

pub fn canonical_set(cs: &[Concept]) -> BTreeSet<Concept> {
    cs.iter().map(canonicalize).collect()
}
