//! Worklist saturation for both rule systems.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use super::universe::{ConceptId, Shape, Universe};
use super::{ConclusionId, InferenceId, InferenceLog, InferenceRecord, Rule, SaturationLimits, SideData, System};
use crate::error::Error;
use crate::model::{subconcept_closure, Axiom, Concept, Ontology};

/// Dense bit matrix row.
#[derive(Clone, Debug)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn get(&self, i: ConceptId) -> bool {
        self.0[i as usize / 64] >> (i % 64) & 1 == 1
    }

    fn set(&mut self, i: ConceptId) {
        self.0[i as usize / 64] |= 1 << (i % 64);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum SideKey {
    None,
    Axiom(usize),
    Role(std::sync::Arc<str>),
}

struct Store {
    limits: SaturationLimits,
    /// record inferences; off for entailment-only runs
    trace: bool,
    universe: Universe,
    conclusions: Vec<(ConceptId, ConceptId)>,
    index: HashMap<(ConceptId, ConceptId), ConclusionId>,
    inferences: Vec<InferenceRecord>,
    producers: Vec<Vec<InferenceId>>,
    seen: HashSet<(Rule, Vec<ConclusionId>, ConclusionId, SideKey)>,
    /// lhs -> rhs membership, and the same as lists in derivation order
    subs: Vec<Bits>,
    subs_list: Vec<Vec<ConceptId>>,
    /// rhs -> lhs list
    preds: Vec<Vec<ConceptId>>,
    queue: VecDeque<ConclusionId>,
}

impl Store {
    fn new(universe: Universe, limits: SaturationLimits) -> Self {
        let n = universe.len();
        Store {
            limits,
            trace: true,
            universe,
            conclusions: Vec::new(),
            index: HashMap::new(),
            inferences: Vec::new(),
            producers: Vec::new(),
            seen: HashSet::new(),
            subs: vec![Bits::new(n); n],
            subs_list: vec![Vec::new(); n],
            preds: vec![Vec::new(); n],
            queue: VecDeque::new(),
        }
    }

    fn id(&self, l: ConceptId, r: ConceptId) -> ConclusionId {
        self.index[&(l, r)]
    }

    fn has(&self, l: ConceptId, r: ConceptId) -> bool {
        self.subs[l as usize].get(r)
    }

    /// Records an inference; returns the conclusion id and whether the conclusion is new.
    fn add(
        &mut self,
        rule: Rule,
        premises: Vec<ConclusionId>,
        (l, r): (ConceptId, ConceptId),
        side: SideData,
    ) -> Result<(ConclusionId, bool), Error> {
        let (cid, fresh) = match self.index.get(&(l, r)) {
            Some(&cid) => (cid, false),
            None => {
                if self.conclusions.len() >= self.limits.max_conclusions {
                    return Err(Error::ResourceLimit { what: "derived inclusions", limit: self.limits.max_conclusions });
                }
                let cid = self.conclusions.len() as ConclusionId;
                self.conclusions.push((l, r));
                self.index.insert((l, r), cid);
                self.producers.push(Vec::new());
                self.subs[l as usize].set(r);
                self.subs_list[l as usize].push(r);
                self.preds[r as usize].push(l);
                self.queue.push_back(cid);
                (cid, true)
            }
        };
        if !self.trace {
            return Ok((cid, fresh));
        }
        let key_side = match &side {
            SideData::None | SideData::Chain(_) => SideKey::None,
            SideData::Axiom(i) => SideKey::Axiom(*i),
            SideData::Role(name) => SideKey::Role(name.clone()),
        };
        if self.seen.insert((rule, premises.clone(), cid, key_side)) {
            if self.inferences.len() >= self.limits.max_inferences {
                return Err(Error::ResourceLimit { what: "inferences", limit: self.limits.max_inferences });
            }
            let iid = self.inferences.len() as InferenceId;
            self.inferences.push(InferenceRecord { rule, premises, conclusion: cid, side });
            self.producers[cid as usize].push(iid);
        }
        Ok((cid, fresh))
    }

    fn role_side(&self, k: ConceptId) -> SideData {
        match self.universe.shapes[k as usize] {
            Shape::Exists(r, _) => SideData::Role(self.universe.role_name(r).clone()),
            _ => SideData::None,
        }
    }

    fn into_log(self, system: System, ontology: &Ontology) -> InferenceLog {
        InferenceLog {
            system,
            ontology: ontology.clone(),
            universe: self.universe,
            conclusions: self.conclusions,
            conclusion_index: self.index,
            inferences: self.inferences,
            producers: self.producers,
        }
    }
}

/// Axioms indexed by the universe ids of their sides.
struct AxiomIndex {
    /// lhs -> (axiom index, rhs) for SubClassOf
    sub_by_lhs: Vec<Vec<(usize, ConceptId)>>,
    /// side -> (axiom index, other side) for EquivalentClasses, both orientations
    equiv_by_side: Vec<Vec<(usize, ConceptId)>>,
    subs: Vec<(usize, ConceptId, ConceptId)>,
    equivs: Vec<(usize, ConceptId, ConceptId)>,
}

impl AxiomIndex {
    fn new(o: &Ontology, u: &Universe) -> Self {
        let n = u.len();
        let mut idx =
            AxiomIndex { sub_by_lhs: vec![Vec::new(); n], equiv_by_side: vec![Vec::new(); n], subs: Vec::new(), equivs: Vec::new() };
        for (i, ax) in o.axioms().iter().enumerate() {
            match ax {
                Axiom::SubClassOf(l, r) => {
                    let (l, r) = (u.id_of(l).unwrap(), u.id_of(r).unwrap());
                    idx.sub_by_lhs[l as usize].push((i, r));
                    idx.subs.push((i, l, r));
                }
                Axiom::EquivalentClasses(l, r) => {
                    let (l, r) = (u.id_of(l).unwrap(), u.id_of(r).unwrap());
                    idx.equiv_by_side[l as usize].push((i, r));
                    idx.equiv_by_side[r as usize].push((i, l));
                    idx.equivs.push((i, l, r));
                }
            }
        }
        idx
    }
}

pub(super) fn run(o: &Ontology, goals: &[Concept], system: System, limits: &SaturationLimits) -> Result<InferenceLog, Error> {
    let mut members = subconcept_closure(o, goals);
    if system == System::B {
        // `S_∃⊥` needs `∃r.⊥` to be available for every role used in an existential.
        let roles: BTreeSet<_> = members
            .iter()
            .filter_map(|c| match c {
                Concept::Exists(r, _) => Some(r.clone()),
                _ => None,
            })
            .collect();
        for r in roles {
            members.insert(Concept::Exists(r, Box::new(Concept::Bottom)));
        }
    }
    let universe = Universe::new(members);
    let axioms = AxiomIndex::new(o, &universe);
    let mut store = Store::new(universe, *limits);
    match system {
        System::A => saturate_a(&mut store, &axioms, None)?,
        System::B => saturate_b(&mut store, &axioms)?,
    }
    Ok(store.into_log(system, o))
}

/// Entailment-only basic-calculus saturation: no inferences are recorded, and only goals
/// and the fillers of existentials they reach are saturated as left sides.
pub(super) fn run_goal_directed(o: &Ontology, goals: &[Concept], limits: &SaturationLimits) -> Result<InferenceLog, Error> {
    let universe = Universe::new(subconcept_closure(o, goals));
    let axioms = AxiomIndex::new(o, &universe);
    let ids: Vec<ConceptId> = goals.iter().map(|g| universe.id_of(g).expect("goals are in the universe")).collect();
    let mut store = Store::new(universe, *limits);
    store.trace = false;
    saturate_a(&mut store, &axioms, Some(&ids))?;
    Ok(store.into_log(System::A, o))
}

fn saturate_a(st: &mut Store, ax: &AxiomIndex, goals: Option<&[ConceptId]>) -> Result<(), Error> {
    let n = st.universe.len() as ConceptId;
    let (top, bottom) = (st.universe.top(), st.universe.bottom());
    // concepts used as left sides; with `goals` given, only those reached from a goal
    let mut active = vec![goals.is_none(); n as usize];
    if goals.is_none() {
        for c in 0..n {
            st.add(Rule::R0, vec![], (c, c), SideData::None)?;
            st.add(Rule::RTop, vec![], (c, top), SideData::None)?;
            st.add(Rule::RBot, vec![], (bottom, c), SideData::None)?;
        }
    }
    let mut activate = |st: &mut Store, c: ConceptId| -> Result<(), Error> {
        if std::mem::replace(&mut active[c as usize], true) {
            return Ok(());
        }
        st.add(Rule::R0, vec![], (c, c), SideData::None)?;
        st.add(Rule::RTop, vec![], (c, top), SideData::None)?;
        if c == bottom {
            for d in 0..n {
                st.add(Rule::RBot, vec![], (bottom, d), SideData::None)?;
            }
        }
        Ok(())
    };
    for &g in goals.unwrap_or_default() {
        activate(st, g)?;
    }
    while let Some(cid) = st.queue.pop_front() {
        let (x, e) = st.conclusions[cid as usize];
        for &(i, f) in &ax.sub_by_lhs[e as usize] {
            st.add(Rule::RSub, vec![cid], (x, f), SideData::Axiom(i))?;
        }
        for &(i, f) in &ax.equiv_by_side[e as usize] {
            st.add(Rule::RSub, vec![cid], (x, f), SideData::Axiom(i))?;
        }
        if let Shape::Conj(parts) = st.universe.shapes[e as usize].clone() {
            for p in parts {
                st.add(Rule::RAndMinus, vec![cid], (x, p), SideData::None)?;
            }
        }
        conj_intro(st, Rule::RAndPlus, x, e)?;
        // (x ⊑ ∃r.f0) as the first premise of R_∃ / R_∃⊥
        if let Shape::Exists(r, f0) = st.universe.shapes[e as usize] {
            activate(st, f0)?;
            let mut i = 0;
            while i < st.subs_list[f0 as usize].len() {
                let f = st.subs_list[f0 as usize][i];
                let second = st.id(f0, f);
                if f == bottom {
                    st.add(Rule::RExistsBot, vec![cid, second], (x, bottom), SideData::None)?;
                }
                if let Some(k) = st.universe.exists(r, f) {
                    let side = st.role_side(k);
                    st.add(Rule::RExists, vec![cid, second], (x, k), side)?;
                }
                i += 1;
            }
        }
        // (x ⊑ e) as the second premise, for every ∃r.x with a derived subsumee
        for k in st.universe.exists_with_filler[x as usize].clone() {
            let Shape::Exists(r, _) = st.universe.shapes[k as usize] else { unreachable!() };
            let target = st.universe.exists(r, e);
            let mut i = 0;
            while i < st.preds[k as usize].len() {
                let y = st.preds[k as usize][i];
                let first = st.id(y, k);
                if e == bottom {
                    st.add(Rule::RExistsBot, vec![first, cid], (y, bottom), SideData::None)?;
                }
                if let Some(k2) = target {
                    let side = st.role_side(k2);
                    st.add(Rule::RExists, vec![first, cid], (y, k2), side)?;
                }
                i += 1;
            }
        }
    }
    Ok(())
}

/// Conjunction introduction for every conjunction having `e` as a conjunct, when all of
/// its conjuncts are subsumers of `x`. Premises follow the conjunct order.
fn conj_intro(st: &mut Store, rule: Rule, x: ConceptId, e: ConceptId) -> Result<(), Error> {
    for k in st.universe.conj_with[e as usize].clone() {
        let Shape::Conj(parts) = &st.universe.shapes[k as usize] else { unreachable!() };
        if parts.iter().all(|&p| st.has(x, p)) {
            let premises = parts.iter().map(|&p| st.id(x, p)).collect();
            st.add(rule, premises, (x, k), SideData::None)?;
        }
    }
    Ok(())
}

/// Shortest path between two members of an equivalence component, as axiom indices.
fn equiv_path(adj: &HashMap<ConceptId, Vec<(usize, ConceptId)>>, from: ConceptId, to: ConceptId) -> Vec<usize> {
    let mut prev: HashMap<ConceptId, (usize, ConceptId)> = HashMap::new();
    let mut queue = VecDeque::from([from]);
    let mut visited = HashSet::from([from]);
    while let Some(c) = queue.pop_front() {
        if c == to {
            break;
        }
        for &(ax, d) in adj.get(&c).map(Vec::as_slice).unwrap_or(&[]) {
            if visited.insert(d) {
                prev.insert(d, (ax, c));
                queue.push_back(d);
            }
        }
    }
    let mut path = Vec::new();
    let mut cur = to;
    while cur != from {
        let (ax, p) = prev[&cur];
        path.push(ax);
        cur = p;
    }
    path.reverse();
    path
}

struct StepIndex {
    /// y -> z for every step conclusion y ⊑ z usable as the right link of `S_⊑`
    succ: Vec<Vec<ConceptId>>,
    marked: HashSet<(ConceptId, ConceptId)>,
}

fn mark_step(st: &mut Store, steps: &mut StepIndex, y: ConceptId, z: ConceptId) -> Result<(), Error> {
    if y == z || !steps.marked.insert((y, z)) {
        return Ok(());
    }
    steps.succ[y as usize].push(z);
    let right = st.id(y, z);
    let mut i = 0;
    while i < st.preds[y as usize].len() {
        let w = st.preds[y as usize][i];
        if w != y && w != z {
            let left = st.id(w, y);
            st.add(Rule::SChain, vec![left, right], (w, z), SideData::None)?;
        }
        i += 1;
    }
    Ok(())
}

/// `S_⊑` is applied in binary form: the left link is any conclusion, the right link a step
/// (a conclusion of `S_ax`, `S_≡`, `S_⊓-`, `S_∃⊥`, `S_⊥` or `S_∃`). Chains through a
/// reflexive link or back to their own start are not formed.
fn saturate_b(st: &mut Store, ax: &AxiomIndex) -> Result<(), Error> {
    let n = st.universe.len() as ConceptId;
    let (top, bottom) = (st.universe.top(), st.universe.bottom());
    let mut steps = StepIndex { succ: vec![Vec::new(); n as usize], marked: HashSet::new() };
    let mut pending_steps: Vec<(ConceptId, ConceptId)> = Vec::new();

    for c in 0..n {
        st.add(Rule::S0, vec![], (c, c), SideData::None)?;
        st.add(Rule::STop, vec![], (c, top), SideData::None)?;
        st.add(Rule::SBot, vec![], (bottom, c), SideData::None)?;
        pending_steps.push((bottom, c));
    }
    for &(i, l, r) in &ax.subs {
        st.add(Rule::SAx, vec![], (l, r), SideData::Axiom(i))?;
        pending_steps.push((l, r));
    }
    // S_≡ over connected components of the equivalence graph
    let mut adj: HashMap<ConceptId, Vec<(usize, ConceptId)>> = HashMap::new();
    for &(i, l, r) in &ax.equivs {
        adj.entry(l).or_default().push((i, r));
        adj.entry(r).or_default().push((i, l));
    }
    let mut done: HashSet<ConceptId> = HashSet::new();
    let mut starts: Vec<ConceptId> = adj.keys().copied().collect();
    starts.sort_unstable();
    for s in starts {
        if done.contains(&s) {
            continue;
        }
        let mut comp = vec![s];
        done.insert(s);
        let mut i = 0;
        while i < comp.len() {
            for &(_, d) in &adj[&comp[i]] {
                if done.insert(d) {
                    comp.push(d);
                }
            }
            i += 1;
        }
        comp.sort_unstable();
        for &j in &comp {
            for &k in &comp {
                if j != k {
                    st.add(Rule::SEquiv, vec![], (j, k), SideData::Chain(equiv_path(&adj, j, k)))?;
                    pending_steps.push((j, k));
                }
            }
        }
    }
    for k in 0..n {
        match st.universe.shapes[k as usize].clone() {
            Shape::Conj(parts) => {
                for p in parts {
                    st.add(Rule::SAndMinus, vec![], (k, p), SideData::None)?;
                    pending_steps.push((k, p));
                }
            }
            Shape::Exists(_, f) if f == bottom => {
                st.add(Rule::SExistsBot, vec![], (k, bottom), SideData::None)?;
                pending_steps.push((k, bottom));
            }
            _ => {}
        }
    }
    for (y, z) in pending_steps {
        mark_step(st, &mut steps, y, z)?;
    }

    while let Some(cid) = st.queue.pop_front() {
        let (x, y) = st.conclusions[cid as usize];
        // x ⊑ y as the left link of a chain
        if x != y {
            let mut i = 0;
            while i < steps.succ[y as usize].len() {
                let z = steps.succ[y as usize][i];
                if z != x {
                    let right = st.id(y, z);
                    st.add(Rule::SChain, vec![cid, right], (x, z), SideData::None)?;
                }
                i += 1;
            }
        }
        conj_intro(st, Rule::SAndPlus, x, y)?;
        for k in st.universe.exists_with_filler[x as usize].clone() {
            let Shape::Exists(r, _) = st.universe.shapes[k as usize] else { unreachable!() };
            if let Some(k2) = st.universe.exists(r, y) {
                let side = st.role_side(k);
                st.add(Rule::SExists, vec![cid], (k, k2), side)?;
                mark_step(st, &mut steps, k, k2)?;
            }
        }
    }
    Ok(())
}
