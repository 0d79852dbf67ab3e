//! Acyclic proofs assembled from an inference log.

use std::collections::{HashMap, HashSet};
use std::fmt::Write;

use super::{ConclusionId, Inclusion, Inference, InferenceId, InferenceLog};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProofLimits {
    pub max_proofs: usize,
}

impl Default for ProofLimits {
    fn default() -> Self {
        ProofLimits { max_proofs: 100_000 }
    }
}

/// A proof: inferences in dependency order, each premise produced by exactly one earlier
/// inference, ending with the inference that concludes the goal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Proof {
    pub ids: Vec<InferenceId>,
    pub inferences: Vec<Inference>,
}

impl Proof {
    pub fn goal(&self) -> &Inclusion {
        &self.inferences.last().expect("proofs are nonempty").conclusion
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Index (into `inferences`) of the inference producing `inc`.
    pub fn producer_of(&self, inc: &Inclusion) -> Option<usize> {
        self.inferences.iter().position(|i| &i.conclusion == inc)
    }
}

struct Search<'a> {
    log: &'a InferenceLog,
    goal: ConclusionId,
    limit: usize,
    out: Vec<Proof>,
}

impl Search<'_> {
    /// Whether assigning `premises` as the dependencies of `c` closes a cycle.
    fn closes_cycle(&self, assign: &HashMap<ConclusionId, InferenceId>, c: ConclusionId, premises: &[ConclusionId]) -> bool {
        let mut stack: Vec<ConclusionId> = premises.to_vec();
        let mut seen = HashSet::new();
        while let Some(p) = stack.pop() {
            if p == c {
                return true;
            }
            if !seen.insert(p) {
                continue;
            }
            if let Some(&inf) = assign.get(&p) {
                stack.extend(self.log.record(inf).premises.iter().copied());
            }
        }
        false
    }

    fn go(&mut self, mut agenda: Vec<ConclusionId>, assign: &mut HashMap<ConclusionId, InferenceId>) {
        if self.out.len() >= self.limit {
            return;
        }
        let next = loop {
            match agenda.pop() {
                Some(c) if assign.contains_key(&c) => continue,
                other => break other,
            }
        };
        let Some(c) = next else {
            self.emit(assign);
            return;
        };
        for &inf in self.log.producers(c) {
            let premises = &self.log.record(inf).premises;
            if self.closes_cycle(assign, c, premises) {
                continue;
            }
            assign.insert(c, inf);
            let mut next_agenda = agenda.clone();
            next_agenda.extend(premises.iter().rev().copied());
            self.go(next_agenda, assign);
            assign.remove(&c);
            if self.out.len() >= self.limit {
                return;
            }
        }
    }

    fn emit(&mut self, assign: &HashMap<ConclusionId, InferenceId>) {
        fn visit(
            log: &InferenceLog,
            assign: &HashMap<ConclusionId, InferenceId>,
            c: ConclusionId,
            done: &mut HashSet<ConclusionId>,
            order: &mut Vec<InferenceId>,
        ) {
            if !done.insert(c) {
                return;
            }
            let inf = assign[&c];
            for &p in &log.record(inf).premises {
                visit(log, assign, p, done, order);
            }
            order.push(inf);
        }
        let mut order = Vec::new();
        visit(self.log, assign, self.goal, &mut HashSet::new(), &mut order);
        let inferences = order.iter().map(|&i| self.log.inference(i)).collect();
        self.out.push(Proof { ids: order, inferences });
    }
}

/// Enumerates acyclic proofs of `goal`, up to `limits.max_proofs`, in a deterministic order.
///
/// The first proof always follows the first-deriving inference of every conclusion.
pub fn proofs(log: &InferenceLog, goal: &Inclusion, limits: ProofLimits) -> Vec<Proof> {
    let Some(goal) = log.conclusion_id(goal) else {
        return Vec::new();
    };
    let mut search = Search { log, goal, limit: limits.max_proofs, out: Vec::new() };
    if limits.max_proofs > 0 {
        search.go(vec![goal], &mut HashMap::new());
    }
    search.out
}

/// Renders a proof as an indented inference tree, one inference per line:
/// `rule: conclusion  [side data]`, premises indented beneath their conclusion.
pub fn render_proof(proof: &Proof) -> String {
    fn line(proof: &Proof, idx: usize, depth: usize, out: &mut String) {
        let inf = &proof.inferences[idx];
        let _ = write!(out, "{}{}: {}", "  ".repeat(depth), inf.rule, inf.conclusion);
        if let Some(side) = &inf.side_data {
            let _ = write!(out, "  [{side}]");
        }
        out.push('\n');
        for p in &inf.premises {
            if let Some(j) = proof.producer_of(p) {
                line(proof, j, depth + 1, out);
            }
        }
    }
    let mut out = String::new();
    if !proof.is_empty() {
        line(proof, proof.len() - 1, 0, &mut out);
    }
    out
}
