//! Label propagation over proof-tracing inference logs.
//!
//! Labels are kept in disjunctive normal form: a label is the set of its EL disjuncts, the
//! empty set is `ε`. Disjunction is union, conjunction is the pairwise product (annihilated
//! by `ε`) and `∃r` wraps every disjunct.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::error::Error;
use crate::model::{signature_of, Concept, DisjConcept, Signature};
use crate::reasoner::{ConclusionId, Inclusion, InferenceId, InferenceLog, Rule, SideData, System};

/// Caps on label growth. Exceeding any of them sets the truncation flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LabelLimits {
    /// Disjuncts kept per label.
    pub max_conjuncts: usize,
    /// Largest disjunct kept, by [`Concept::size`].
    pub max_concept_size: usize,
    /// Inferences visited with exact path tracking. Large cyclic regions of a log can have
    /// exponentially many acyclic paths; past this budget each conclusion's label is
    /// computed once and reused on every path.
    pub max_visits: usize,
}

impl Default for LabelLimits {
    fn default() -> Self {
        LabelLimits { max_conjuncts: 4096, max_concept_size: 512, max_visits: 50_000 }
    }
}

impl LabelLimits {
    pub fn unbounded() -> Self {
        LabelLimits { max_conjuncts: usize::MAX, max_concept_size: usize::MAX, max_visits: usize::MAX }
    }
}

/// The DNF label of a derived inclusion, with the truncation flag of its computation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Label {
    pub conjuncts: DisjConcept,
    pub truncated: bool,
    /// Inferences visited while computing the label.
    pub inferences_visited: usize,
}

impl Label {
    pub fn is_epsilon(&self) -> bool {
        self.conjuncts.is_epsilon()
    }
}

/// An EL⊔ label expression with the distinguished empty concept.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LabelExpr {
    Epsilon,
    Concept(Concept),
    Or(Vec<LabelExpr>),
    And(Vec<LabelExpr>),
    Exists(Arc<str>, Box<LabelExpr>),
}

/// Set algebra on DNF labels under a pair of caps.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Algebra {
    limits: LabelLimits,
}

impl Algebra {
    pub(crate) fn new(limits: LabelLimits) -> Self {
        Algebra { limits }
    }

    fn admit(&self, c: Concept, out: &mut BTreeSet<Concept>, truncated: &mut bool) {
        if c.size() > self.limits.max_concept_size {
            *truncated = true;
        } else {
            out.insert(c);
        }
    }

    fn cap(&self, mut set: BTreeSet<Concept>, truncated: &mut bool) -> BTreeSet<Concept> {
        if set.len() > self.limits.max_conjuncts {
            *truncated = true;
            let keep: Vec<Concept> = set.iter().take(self.limits.max_conjuncts).cloned().collect();
            set = keep.into_iter().collect();
        }
        set
    }

    pub(crate) fn single(&self, c: Concept, truncated: &mut bool) -> BTreeSet<Concept> {
        let mut out = BTreeSet::new();
        self.admit(c, &mut out, truncated);
        out
    }

    pub(crate) fn union(&self, mut a: BTreeSet<Concept>, b: BTreeSet<Concept>, truncated: &mut bool) -> BTreeSet<Concept> {
        a.extend(b);
        self.cap(a, truncated)
    }

    pub(crate) fn product(&self, a: &BTreeSet<Concept>, b: &BTreeSet<Concept>, truncated: &mut bool) -> BTreeSet<Concept> {
        let mut out = BTreeSet::new();
        for x in a {
            for y in b {
                self.admit(Concept::and([x.clone(), y.clone()]), &mut out, truncated);
                if out.len() > self.limits.max_conjuncts {
                    return self.cap(out, truncated);
                }
            }
        }
        out
    }

    pub(crate) fn exists(&self, r: &Arc<str>, a: &BTreeSet<Concept>, truncated: &mut bool) -> BTreeSet<Concept> {
        let mut out = BTreeSet::new();
        for x in a {
            self.admit(Concept::Exists(r.clone(), Box::new(x.clone())), &mut out, truncated);
        }
        out
    }
}

/// The disjunctive normal form of `expr`, as its set of EL disjuncts. Returns the set and
/// whether a cap was hit.
pub fn dnf(expr: &LabelExpr, limits: LabelLimits) -> (DisjConcept, bool) {
    fn go(e: &LabelExpr, alg: &Algebra, t: &mut bool) -> BTreeSet<Concept> {
        match e {
            LabelExpr::Epsilon => BTreeSet::new(),
            LabelExpr::Concept(c) => alg.single(crate::model::canonicalize(c), t),
            LabelExpr::Or(parts) => parts.iter().fold(BTreeSet::new(), |acc, p| {
                let next = go(p, alg, t);
                alg.union(acc, next, t)
            }),
            LabelExpr::And(parts) => {
                let mut acc = alg.single(Concept::Top, t);
                for p in parts {
                    let next = go(p, alg, t);
                    acc = alg.product(&acc, &next, t);
                }
                acc
            }
            LabelExpr::Exists(r, inner) => {
                let inner = go(inner, alg, t);
                alg.exists(r, &inner, t)
            }
        }
    }
    let mut truncated = false;
    let set = go(expr, &Algebra::new(limits), &mut truncated);
    (DisjConcept::from_disjuncts(set), truncated)
}

/// Rules whose conclusions may serve as the right link of an `S_⊑` chain.
fn is_step(rule: Rule) -> bool {
    matches!(rule, Rule::SAx | Rule::SEquiv | Rule::SAndMinus | Rule::SExistsBot | Rule::SBot | Rule::SExists)
}

/// A traversal node: a conclusion, either with all its producers or (as a chain's right
/// link) with its step producers only.
type Node = u32;

fn node(c: ConclusionId, step: bool) -> Node {
    c * 2 + step as u32
}

/// Premise nodes of one inference.
fn premise_nodes(log: &InferenceLog, inf: InferenceId) -> Vec<Node> {
    let rec = log.record(inf);
    match rec.rule {
        Rule::SChain => vec![node(rec.premises[0], false), node(rec.premises[1], true)],
        _ => rec.premises.iter().map(|&p| node(p, false)).collect(),
    }
}

fn producers_of(log: &InferenceLog, n: Node) -> impl Iterator<Item = InferenceId> + '_ {
    let step = n % 2 == 1;
    log.producers(n / 2).iter().copied().filter(move |&i| !step || is_step(log.record(i).rule))
}

/// Strongly connected components of the node graph (node -> premise nodes).
fn components(log: &InferenceLog) -> Vec<u32> {
    let n = log.conclusion_count() * 2;
    let succ: Vec<Vec<Node>> = (0..n as Node)
        .map(|v| {
            let mut out: Vec<Node> = producers_of(log, v).flat_map(|i| premise_nodes(log, i)).collect();
            out.sort_unstable();
            out.dedup();
            out
        })
        .collect();
    // iterative Tarjan
    const UNSEEN: u32 = u32::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0u32; n];
    let mut comp = vec![UNSEEN; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<Node> = Vec::new();
    let mut next = 0u32;
    let mut comps = 0u32;
    for root in 0..n as Node {
        if index[root as usize] != UNSEEN {
            continue;
        }
        let mut work: Vec<(Node, usize)> = vec![(root, 0)];
        index[root as usize] = next;
        low[root as usize] = next;
        next += 1;
        stack.push(root);
        on_stack[root as usize] = true;
        while let Some(top) = work.last_mut() {
            let v = top.0;
            if let Some(&w) = succ[v as usize].get(top.1) {
                top.1 += 1;
                if index[w as usize] == UNSEEN {
                    index[w as usize] = next;
                    low[w as usize] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w as usize] = true;
                    work.push((w, 0));
                } else if on_stack[w as usize] {
                    low[v as usize] = low[v as usize].min(index[w as usize]);
                }
                continue;
            }
            work.pop();
            if let Some(&(parent, _)) = work.last() {
                low[parent as usize] = low[parent as usize].min(low[v as usize]);
            }
            if low[v as usize] == index[v as usize] {
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w as usize] = false;
                    comp[w as usize] = comps;
                    if w == v {
                        break;
                    }
                }
                comps += 1;
            }
        }
    }
    comp
}

struct Propagation<'a> {
    log: &'a InferenceLog,
    sigma: &'a Signature,
    alg: Algebra,
    component: Vec<u32>,
    /// nodes on the current traversal path, grouped by component
    on_path: HashMap<u32, Vec<Node>>,
    /// a label depends on the path only through the path members of its own component
    memo: HashMap<(Node, Vec<Node>), BTreeSet<Concept>>,
    /// labels by node alone, used once the exact budget is spent
    reuse: HashMap<Node, BTreeSet<Concept>>,
    exhausted: bool,
    truncated: bool,
    visited: usize,
}

impl Propagation<'_> {
    fn in_sigma(&self, c: &Concept) -> bool {
        signature_of(c).is_subset(self.sigma)
    }

    fn visit(&mut self, v: Node) -> BTreeSet<Concept> {
        let comp = self.component[v as usize];
        let path = self.on_path.entry(comp).or_default();
        if path.contains(&v) {
            return BTreeSet::new();
        }
        let mut key = path.clone();
        key.sort_unstable();
        let key = (v, key);
        let cached = if self.exhausted { self.reuse.get(&v) } else { self.memo.get(&key) };
        if let Some(l) = cached {
            return l.clone();
        }
        path.push(v);
        let log = self.log;
        let mut acc = BTreeSet::new();
        for inf in producers_of(log, v) {
            self.visited += 1;
            if self.visited > self.alg.limits.max_visits && !self.exhausted {
                self.exhausted = true;
                self.truncated = true;
            }
            let rec = log.record(inf);
            let premises = premise_nodes(log, inf);
            let mut t = false;
            let contribution = match rec.rule {
                Rule::SBot => self.alg.single(Concept::Bottom, &mut t),
                Rule::S0 | Rule::STop | Rule::SAx | Rule::SEquiv | Rule::SAndMinus | Rule::SExistsBot => {
                    let rhs = log.inclusion(rec.conclusion).rhs;
                    if self.in_sigma(&rhs) {
                        self.alg.single(rhs, &mut t)
                    } else {
                        BTreeSet::new()
                    }
                }
                Rule::SChain => {
                    let mut out = BTreeSet::new();
                    for p in premises {
                        let l = self.visit(p);
                        out = self.alg.union(out, l, &mut t);
                    }
                    out
                }
                Rule::SAndPlus => {
                    let mut out = self.alg.single(Concept::Top, &mut t);
                    for p in premises {
                        if out.is_empty() {
                            break;
                        }
                        let l = self.visit(p);
                        out = self.alg.product(&out, &l, &mut t);
                    }
                    out
                }
                Rule::SExists => match &rec.side {
                    SideData::Role(r) if self.sigma.contains_role(r) => {
                        let l = self.visit(premises[0]);
                        self.alg.exists(r, &l, &mut t)
                    }
                    _ => BTreeSet::new(),
                },
                _ => BTreeSet::new(),
            };
            self.truncated |= t;
            let mut t = false;
            acc = self.alg.union(acc, contribution, &mut t);
            self.truncated |= t;
        }
        self.on_path.get_mut(&comp).expect("pushed above").pop();
        if !self.exhausted {
            self.memo.insert(key, acc.clone());
        }
        let mut t = false;
        let merged = match self.reuse.remove(&v) {
            Some(prev) => self.alg.union(prev, acc.clone(), &mut t),
            None => acc.clone(),
        };
        self.truncated |= t;
        self.reuse.insert(v, merged);
        acc
    }
}

/// The label of `goal` in a proof-tracing log: the union of the labels produced by every
/// acyclic derivation of it. A derivation path that revisits a conclusion contributes `ε`.
pub fn compute_labels(log: &InferenceLog, goal: &Inclusion, sigma: &Signature, limits: LabelLimits) -> Result<Label, Error> {
    if log.system() != System::B {
        return Err(Error::InternalSoundness("labels are defined on proof-tracing logs".into()));
    }
    let Some(id) = log.conclusion_id(goal) else {
        return Ok(Label::default());
    };
    let mut p = Propagation {
        log,
        sigma,
        alg: Algebra::new(limits),
        component: components(log),
        on_path: HashMap::new(),
        memo: HashMap::new(),
        reuse: HashMap::new(),
        exhausted: false,
        truncated: false,
        visited: 0,
    };
    let set = p.visit(node(id, false));
    Ok(Label { conjuncts: DisjConcept::from_disjuncts(set), truncated: p.truncated, inferences_visited: p.visited })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{canonicalize, Symbol};

    fn n(s: &str) -> Concept {
        Concept::name(s)
    }

    fn d1_or_d2() -> LabelExpr {
        LabelExpr::Or(vec![LabelExpr::Concept(n("D_1")), LabelExpr::Concept(n("D_2"))])
    }

    #[test]
    fn dnf_distributes() {
        let e =
            LabelExpr::And(vec![LabelExpr::Exists("r".into(), Box::new(d1_or_d2())), LabelExpr::Exists("s".into(), Box::new(d1_or_d2()))]);
        let (set, truncated) = dnf(&e, LabelLimits::default());
        assert!(!truncated);
        assert_eq!(set.len(), 4);
        for i in ["D_1", "D_2"] {
            for j in ["D_1", "D_2"] {
                let c = canonicalize(&Concept::and([Concept::exists("r", n(i)), Concept::exists("s", n(j))]));
                assert!(set.contains(&c));
            }
        }
    }

    #[test]
    fn epsilon_laws() {
        let lim = LabelLimits::default();
        let (set, _) = dnf(&LabelExpr::Or(vec![LabelExpr::Epsilon, LabelExpr::Concept(n("D"))]), lim);
        assert_eq!(set, DisjConcept::single(n("D")));
        let (set, _) = dnf(&LabelExpr::Exists("r".into(), Box::new(LabelExpr::Epsilon)), lim);
        assert!(set.is_epsilon());
        let (set, _) = dnf(&LabelExpr::And(vec![LabelExpr::Epsilon, LabelExpr::Concept(n("D"))]), lim);
        assert!(set.is_epsilon());
    }

    #[test]
    fn caps_flag_truncation() {
        let e =
            LabelExpr::And(vec![LabelExpr::Exists("r".into(), Box::new(d1_or_d2())), LabelExpr::Exists("s".into(), Box::new(d1_or_d2()))]);
        let (set, truncated) = dnf(&e, LabelLimits { max_conjuncts: 3, ..LabelLimits::default() });
        assert!(truncated);
        assert_eq!(set.len(), 3);
        let (set, truncated) = dnf(&e, LabelLimits { max_concept_size: 3, ..LabelLimits::default() });
        assert!(truncated && set.is_epsilon());
    }

    #[test]
    fn labels_need_a_tracing_log() {
        let log = crate::reasoner::saturate(&crate::model::Ontology::empty(), &[n("A")], System::A).unwrap();
        let sigma: Signature = [Symbol::concept("A")].into_iter().collect();
        assert!(compute_labels(&log, &Inclusion::new(n("A"), n("A")), &sigma, LabelLimits::default()).is_err());
    }
}
