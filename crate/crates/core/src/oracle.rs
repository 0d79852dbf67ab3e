//! Brute-force ground truth, independent of the saturation engines.
//!
//! * [`eval_concept`] / [`is_model`]: set semantics over finite interpretations.
//! * [`canonical_model`]: an entailment oracle computed as a fixpoint over element types.
//! * [`brute_force_define`]: exhaustive search for Σ-definitions among small concepts.
//! * [`sample_models`]: seeded random finite models of an ontology.
//!
//! Nothing here calls into [`crate::reasoner`].

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::model::{canonicalize, signature_of, subconcept_closure, Axiom, Concept, Ontology, Signature, SymbolKind};

/// A finite interpretation over elements `0..size`.
///
/// `⊤` and `⊥` are not stored: they evaluate to all elements and to nothing.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Interpretation {
    pub size: usize,
    pub concept_ext: BTreeMap<Arc<str>, BTreeSet<usize>>,
    pub role_ext: BTreeMap<Arc<str>, BTreeSet<(usize, usize)>>,
}

impl Interpretation {
    pub fn new(size: usize) -> Self {
        Interpretation { size, ..Default::default() }
    }

    pub fn universe(&self) -> BTreeSet<usize> {
        (0..self.size).collect()
    }

    pub fn with_concept(mut self, name: &str, elems: impl IntoIterator<Item = usize>) -> Self {
        self.concept_ext.entry(name.into()).or_default().extend(elems);
        self
    }

    pub fn with_role(mut self, name: &str, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        self.role_ext.entry(name.into()).or_default().extend(pairs);
        self
    }
}

/// The extension of `c`; unmapped names denote the empty set.
pub fn eval_concept(i: &Interpretation, c: &Concept) -> BTreeSet<usize> {
    match c {
        Concept::Top => i.universe(),
        Concept::Bottom => BTreeSet::new(),
        Concept::Name(n) => i.concept_ext.get(n).cloned().unwrap_or_default(),
        Concept::Conj(parts) => {
            let mut acc = i.universe();
            for p in parts {
                let ext = eval_concept(i, p);
                acc.retain(|x| ext.contains(x));
                if acc.is_empty() {
                    break;
                }
            }
            acc
        }
        Concept::Exists(r, filler) => {
            let Some(pairs) = i.role_ext.get(r) else { return BTreeSet::new() };
            let ext = eval_concept(i, filler);
            pairs.iter().filter(|(_, y)| ext.contains(y)).map(|&(x, _)| x).collect()
        }
    }
}

pub fn satisfies(i: &Interpretation, axiom: &Axiom) -> bool {
    match axiom {
        Axiom::SubClassOf(l, r) => eval_concept(i, l).is_subset(&eval_concept(i, r)),
        Axiom::EquivalentClasses(l, r) => eval_concept(i, l) == eval_concept(i, r),
    }
}

pub fn is_model(i: &Interpretation, o: &Ontology) -> bool {
    o.axioms().iter().all(|a| satisfies(i, a))
}

/// The canonical model of an ontology over its subconcept closure.
///
/// Element `x_D` stands for concept `D`. For consistent `x_C`, membership of `x_C` in the
/// extension of any EL concept `E` holds exactly when `O ⊨ C ⊑ E`.
#[derive(Clone, Debug)]
pub struct CanonicalModel {
    pub interpretation: Interpretation,
    pub elements: Vec<Concept>,
    index: HashMap<Concept, usize>,
    inconsistent: BTreeSet<usize>,
}

impl CanonicalModel {
    pub fn element(&self, c: &Concept) -> Option<usize> {
        self.index.get(&canonicalize(c)).copied()
    }

    pub fn is_inconsistent(&self, elem: usize) -> bool {
        self.inconsistent.contains(&elem)
    }

    pub fn inconsistent(&self) -> &BTreeSet<usize> {
        &self.inconsistent
    }

    /// `O ⊨ lhs ⊑ rhs`, for `lhs` in the closure the model was built over.
    pub fn entails(&self, lhs: &Concept, rhs: &Concept) -> Option<bool> {
        let x = self.element(lhs)?;
        Some(self.is_inconsistent(x) || eval_concept(&self.interpretation, rhs).contains(&x))
    }

    /// The model restricted to consistent elements, renumbered densely.
    pub fn consistent_part(&self) -> Interpretation {
        let keep: Vec<usize> = (0..self.elements.len()).filter(|x| !self.is_inconsistent(*x)).collect();
        let renum: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let i = &self.interpretation;
        Interpretation {
            size: keep.len(),
            concept_ext: i.concept_ext.iter().map(|(k, v)| (k.clone(), v.iter().filter_map(|x| renum.get(x).copied()).collect())).collect(),
            role_ext: i
                .role_ext
                .iter()
                .map(|(k, v)| {
                    let pairs = v.iter().filter_map(|(x, y)| Some((*renum.get(x)?, *renum.get(y)?))).collect();
                    (k.clone(), pairs)
                })
                .collect(),
        }
    }
}

/// Builds the canonical model over `subconcept_closure(o, goals)` by a naive fixpoint on
/// the set of closure concepts each element is forced into.
pub fn canonical_model(o: &Ontology, goals: &[Concept]) -> CanonicalModel {
    let elements: Vec<Concept> = subconcept_closure(o, goals).into_iter().collect();
    let n = elements.len();
    let index: HashMap<Concept, usize> = elements.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
    let bottom = index[&Concept::Bottom];
    let top = index[&Concept::Top];

    // told consequences: concept -> concepts it is forced into by an axiom
    let mut told: Vec<Vec<usize>> = vec![Vec::new(); n];
    for ax in o.axioms() {
        let (l, r) = ax.sides();
        let (l, r) = (index[&canonicalize(l)], index[&canonicalize(r)]);
        told[l].push(r);
        if matches!(ax, Axiom::EquivalentClasses(..)) {
            told[r].push(l);
        }
    }

    let mut types: Vec<Vec<bool>> = vec![vec![false; n]; n];
    let mut edges: Vec<BTreeSet<(Arc<str>, usize)>> = vec![BTreeSet::new(); n];
    for (x, row) in types.iter_mut().enumerate() {
        row[x] = true;
        row[top] = true;
    }
    let mut changed = true;
    while changed {
        changed = false;
        for x in 0..n {
            for c in 0..n {
                if !types[x][c] {
                    continue;
                }
                let mut forced: Vec<usize> = told[c].clone();
                match &elements[c] {
                    Concept::Conj(parts) => forced.extend(parts.iter().map(|p| index[p])),
                    Concept::Exists(r, filler) => {
                        changed |= edges[x].insert((r.clone(), index[filler.as_ref()]));
                    }
                    _ => {}
                }
                for f in forced {
                    if !types[x][f] {
                        types[x][f] = true;
                        changed = true;
                    }
                }
            }
            for (k, concept) in elements.iter().enumerate() {
                if types[x][k] {
                    continue;
                }
                let holds = match concept {
                    Concept::Conj(parts) => parts.iter().all(|p| types[x][index[p]]),
                    Concept::Exists(r, filler) => {
                        let f = index[filler.as_ref()];
                        edges[x].iter().any(|(r2, y)| r2 == r && types[*y][f])
                    }
                    _ => false,
                };
                if holds {
                    types[x][k] = true;
                    changed = true;
                }
            }
            if !types[x][bottom] && edges[x].iter().any(|(_, y)| types[*y][bottom]) {
                types[x][bottom] = true;
                changed = true;
            }
        }
    }

    let inconsistent: BTreeSet<usize> = (0..n).filter(|&x| types[x][bottom]).collect();
    let mut interp = Interpretation::new(n);
    for x in (0..n).filter(|x| !inconsistent.contains(x)) {
        for (k, concept) in elements.iter().enumerate() {
            if let Concept::Name(a) = concept {
                if types[x][k] {
                    interp.concept_ext.entry(a.clone()).or_default().insert(x);
                }
            }
        }
        for (r, y) in &edges[x] {
            if !inconsistent.contains(y) {
                interp.role_ext.entry(r.clone()).or_default().insert((x, *y));
            }
        }
    }
    CanonicalModel { interpretation: interp, elements, index, inconsistent }
}

/// Oracle entailment: `o ⊨ lhs ⊑ rhs`.
pub fn oracle_entails(o: &Ontology, lhs: &Concept, rhs: &Concept) -> bool {
    canonical_model(o, std::slice::from_ref(lhs)).entails(lhs, rhs).expect("lhs is a goal")
}

pub fn oracle_equivalent(o: &Ontology, a: &Concept, b: &Concept) -> bool {
    oracle_entails(o, a, b) && oracle_entails(o, b, a)
}

/// Every canonical EL concept over `sigma` with existential depth at most `max_depth` and
/// [`Concept::size`] at most `max_size`, without structural duplicates.
///
/// Concepts equivalent to `⊥` under the empty ontology other than `⊥` itself (a conjunction
/// containing `⊥`, or `∃r.⊥`) are not produced.
pub fn enumerate_sigma_concepts(sigma: &Signature, max_depth: usize, max_size: usize) -> Vec<Concept> {
    let names: Vec<Concept> = sigma.concepts().map(|s| Concept::Name(s.name.clone())).collect();
    let roles: Vec<Arc<str>> = sigma.roles().map(|s| s.name.clone()).collect();
    let mut e = Enumerator { names, roles, memo: HashMap::new() };
    if max_size == 0 {
        return Vec::new();
    }
    let mut out = vec![Concept::Top, Concept::Bottom];
    out.extend(e.conjunctive(max_depth, max_size));
    out
}

struct Enumerator {
    names: Vec<Concept>,
    roles: Vec<Arc<str>>,
    memo: HashMap<(usize, usize), Vec<Concept>>,
}

impl Enumerator {
    /// Names and existential restrictions: the building blocks of canonical conjunctions.
    fn atoms(&mut self, depth: usize, size: usize) -> Vec<Concept> {
        let mut out = Vec::new();
        if size == 0 {
            return out;
        }
        out.extend(self.names.iter().cloned());
        if depth > 0 && size > 1 {
            let mut fillers = vec![Concept::Top];
            fillers.extend(self.conjunctive(depth - 1, size - 1));
            for r in self.roles.clone() {
                for f in &fillers {
                    out.push(Concept::Exists(r.clone(), Box::new(f.clone())));
                }
            }
        }
        out.sort();
        out
    }

    /// Atoms and conjunctions of at least two distinct atoms (no `⊤`, no `⊥`).
    fn conjunctive(&mut self, depth: usize, size: usize) -> Vec<Concept> {
        if let Some(v) = self.memo.get(&(depth, size)) {
            return v.clone();
        }
        let atoms = self.atoms(depth, size);
        let sizes: Vec<usize> = atoms.iter().map(Concept::size).collect();
        let mut out = atoms.clone();
        let mut chosen = Vec::new();
        fn extend(atoms: &[Concept], sizes: &[usize], from: usize, budget: usize, chosen: &mut Vec<usize>, out: &mut Vec<Concept>) {
            for i in from..atoms.len() {
                if sizes[i] > budget {
                    continue;
                }
                chosen.push(i);
                if chosen.len() >= 2 {
                    out.push(Concept::Conj(chosen.iter().map(|&j| atoms[j].clone()).collect()));
                }
                extend(atoms, sizes, i + 1, budget - sizes[i], chosen, out);
                chosen.pop();
            }
        }
        extend(&atoms, &sizes, 0, size, &mut chosen, &mut out);
        self.memo.insert((depth, size), out.clone());
        out
    }
}

/// All enumerated Σ-concepts `d` with `o ⊨ c ≡ d`, decided on canonical models.
pub fn brute_force_define(o: &Ontology, c: &Concept, sigma: &Signature, max_depth: usize, max_size: usize) -> BTreeSet<Concept> {
    brute_force_define_among(o, c, &enumerate_sigma_concepts(sigma, max_depth, max_size))
}

/// The members of `candidates` equivalent to `c` wrt `o`.
pub fn brute_force_define_among(o: &Ontology, c: &Concept, candidates: &[Concept]) -> BTreeSet<Concept> {
    let c = canonicalize(c);
    let model = canonical_model(o, std::slice::from_ref(&c));
    let x = model.element(&c).expect("goal is in the closure");
    let mut out = BTreeSet::new();
    for d in candidates {
        let below = model.is_inconsistent(x) || eval_concept(&model.interpretation, d).contains(&x);
        if below && oracle_entails(o, d, &c) {
            out.insert(d.clone());
        }
    }
    out
}

/// A random interpretation of `sig`: 1 to 4 elements, every membership and every role
/// pair present independently with probability ½.
pub fn random_interpretation(sig: &Signature, rng: &mut impl Rng) -> Interpretation {
    let size = rng.gen_range(1..=4);
    let mut i = Interpretation::new(size);
    for s in sig.iter() {
        match s.kind {
            SymbolKind::Concept => {
                let ext = (0..size).filter(|_| rng.gen_bool(0.5)).collect();
                i.concept_ext.insert(s.name.clone(), ext);
            }
            SymbolKind::Role => {
                let mut pairs = BTreeSet::new();
                for x in 0..size {
                    for y in 0..size {
                        if rng.gen_bool(0.5) {
                            pairs.insert((x, y));
                        }
                    }
                }
                i.role_ext.insert(s.name.clone(), pairs);
            }
        }
    }
    i
}

/// Adds memberships and role pairs until `x ∈ c`. Fails only when `⊥` has to be made true.
fn force(i: &mut Interpretation, x: usize, c: &Concept, rng: &mut impl Rng) -> bool {
    match c {
        Concept::Top => true,
        Concept::Bottom => false,
        Concept::Name(n) => {
            i.concept_ext.entry(n.clone()).or_default().insert(x);
            true
        }
        Concept::Conj(parts) => parts.iter().all(|p| force(i, x, p, rng)),
        Concept::Exists(r, filler) => {
            if eval_concept(i, c).contains(&x) {
                return true;
            }
            let y = rng.gen_range(0..i.size);
            i.role_ext.entry(r.clone()).or_default().insert((x, y));
            force(i, y, filler, rng)
        }
    }
}

/// Repairs a random interpretation of `sig(o) ∪ extra` into a model of `o` by monotone
/// additions; `None` when the repair would need `⊥` to hold somewhere.
pub fn sample_model(o: &Ontology, extra: &Signature, rng: &mut impl Rng) -> Option<Interpretation> {
    let sig = signature_of(o).union(extra);
    let mut i = random_interpretation(&sig, rng);
    // each pass only adds; the number of possible additions is finite
    loop {
        let mut repaired = false;
        for ax in o.axioms() {
            let (l, r) = ax.sides();
            let pairs: Vec<(&Concept, &Concept)> = match ax {
                Axiom::SubClassOf(..) => vec![(l, r)],
                Axiom::EquivalentClasses(..) => vec![(l, r), (r, l)],
            };
            for (from, to) in pairs {
                let missing: Vec<usize> = eval_concept(&i, from).difference(&eval_concept(&i, to)).copied().collect();
                for x in missing {
                    if !force(&mut i, x, to, rng) {
                        return None;
                    }
                    repaired = true;
                }
            }
        }
        if !repaired {
            break;
        }
    }
    debug_assert!(is_model(&i, o));
    Some(i)
}

/// Up to `count` models of `o` interpreting `sig(o) ∪ extra`, from a fixed seed.
pub fn sample_models(o: &Ontology, extra: &Signature, count: usize, seed: u64) -> Vec<Interpretation> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count && attempts < count * 20 {
        attempts += 1;
        if let Some(m) = sample_model(o, extra, &mut rng) {
            out.push(m);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Symbol;
    use crate::parser::{parse_concept, parse_ontology};

    fn n(s: &str) -> Concept {
        Concept::name(s)
    }

    fn cuisine() -> Ontology {
        parse_ontology(
            "Ontology(SubClassOf(ObjectIntersectionOf(Dumplings Entree) Gnocci) \
             SubClassOf(Gnocci Dumplings) SubClassOf(Dumplings Entree))",
        )
        .unwrap()
    }

    #[test]
    fn eval_examples() {
        let i = Interpretation::new(2).with_concept("A", [1]).with_role("r", [(0, 1)]);
        assert_eq!(eval_concept(&i, &Concept::Top), BTreeSet::from([0, 1]));
        assert!(eval_concept(&i, &Concept::Bottom).is_empty());
        // universe {1,2} renumbered to {0,1}: A ↦ {1}, r ↦ {(2,1)} becomes A ↦ {0}, r ↦ {(1,0)}
        let i = Interpretation::new(2).with_concept("A", [0]).with_role("r", [(1, 0)]);
        assert_eq!(eval_concept(&i, &Concept::exists("r", n("A"))), BTreeSet::from([1]));
    }

    #[test]
    fn conjunction_is_intersection_on_random_interpretations() {
        let sig: Signature = [Symbol::concept("A"), Symbol::concept("B"), Symbol::role("r")].into_iter().collect();
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..200 {
            let i = random_interpretation(&sig, &mut rng);
            let a = eval_concept(&i, &n("A"));
            let b = eval_concept(&i, &Concept::exists("r", n("B")));
            let both = eval_concept(&i, &Concept::Conj(vec![n("A"), Concept::exists("r", n("B"))]));
            assert_eq!(both, a.intersection(&b).copied().collect());
        }
    }

    #[test]
    fn model_checks() {
        let i = Interpretation::new(1);
        assert!(is_model(&i, &Ontology::empty()));
        let m = Interpretation::new(1).with_concept("Dumplings", [0]).with_concept("Entree", [0]).with_concept("Gnocci", [0]);
        assert!(is_model(&m, &cuisine()));
        let m = Interpretation::new(1).with_concept("Dumplings", [0]).with_concept("Entree", [0]);
        assert!(!is_model(&m, &cuisine()));
    }

    #[test]
    fn canonical_model_examples() {
        let o = Ontology::new([Axiom::sub(n("A"), Concept::Bottom)]);
        let m = canonical_model(&o, &[]);
        let xa = m.element(&n("A")).unwrap();
        assert!(m.is_inconsistent(xa));
        assert_eq!(m.entails(&n("A"), &n("Anything")), Some(true));

        let m = canonical_model(&cuisine(), &[]);
        let x = m.element(&n("Dumplings")).unwrap();
        assert!(eval_concept(&m.interpretation, &n("Gnocci")).contains(&x));
        assert!(!oracle_entails(&cuisine(), &n("Entree"), &n("Dumplings")));
        assert!(is_model(&m.consistent_part(), &cuisine()));
    }

    #[test]
    fn canonical_model_handles_existentials() {
        let o = parse_ontology(
            "Ontology(SubClassOf(A ObjectSomeValuesFrom(r B)) SubClassOf(B C) \
             SubClassOf(ObjectSomeValuesFrom(r C) D) SubClassOf(E ObjectSomeValuesFrom(s F)) SubClassOf(F owl:Nothing))",
        )
        .unwrap();
        assert!(oracle_entails(&o, &n("A"), &n("D")));
        assert!(oracle_entails(&o, &n("A"), &parse_concept("ObjectSomeValuesFrom(r ObjectIntersectionOf(B C))").unwrap()));
        assert!(!oracle_entails(&o, &n("D"), &n("A")));
        assert!(oracle_entails(&o, &n("E"), &Concept::Bottom));
        let m = canonical_model(&o, &[]);
        assert!(is_model(&m.consistent_part(), &o));
    }

    #[test]
    fn enumeration_examples() {
        let sig: Signature = [Symbol::concept("A")].into_iter().collect();
        assert_eq!(enumerate_sigma_concepts(&sig, 0, 2), vec![Concept::Top, Concept::Bottom, n("A")]);
        let sig: Signature = [Symbol::concept("Entree")].into_iter().collect();
        assert_eq!(enumerate_sigma_concepts(&sig, 0, 10).len(), 3);
        let sig: Signature = [Symbol::role("r"), Symbol::concept("D_1")].into_iter().collect();
        let all = enumerate_sigma_concepts(&sig, 1, 3);
        assert!(all.contains(&Concept::exists("r", n("D_1"))));
        assert!(all.contains(&Concept::and([n("D_1"), Concept::exists("r", n("D_1"))])));
    }

    #[test]
    fn enumeration_is_canonical_and_duplicate_free() {
        let sig: Signature = [Symbol::concept("A"), Symbol::concept("B"), Symbol::role("r")].into_iter().collect();
        let all = enumerate_sigma_concepts(&sig, 2, 6);
        let set: BTreeSet<_> = all.iter().cloned().collect();
        assert_eq!(set.len(), all.len());
        for c in &all {
            assert_eq!(&canonicalize(c), c);
            assert!(c.size() <= 6 && c.role_depth() <= 2);
        }
    }

    #[test]
    fn brute_force_examples() {
        let c = parse_concept("ObjectIntersectionOf(Dumplings Entree)").unwrap();
        let sig: Signature = [Symbol::concept("Gnocci")].into_iter().collect();
        assert!(brute_force_define(&cuisine(), &c, &sig, 1, 4).contains(&n("Gnocci")));
        assert!(brute_force_define(&cuisine(), &n("Dumplings"), &Signature::new(), 2, 6).is_empty());
    }

    #[test]
    fn sampled_models_are_models() {
        let o = cuisine();
        let models = sample_models(&o, &Signature::new(), 100, 1);
        assert_eq!(models.len(), 100);
        assert!(models.iter().all(|m| is_model(m, &o)));
    }
}
