//! Interpolants read off a single basic-calculus proof.

use std::collections::HashMap;

use crate::error::Error;
use crate::model::{signature_of, Concept, Signature};
use crate::reasoner::{Inference, Proof, Rule, SideValue};

struct Extractor<'a> {
    proof: &'a Proof,
    sigma: &'a Signature,
    first: &'a Signature,
    memo: HashMap<usize, Result<Concept, Error>>,
}

impl Extractor<'_> {
    fn in_sigma(&self, c: &Concept) -> bool {
        signature_of(c).is_subset(self.sigma)
    }

    fn premise(&mut self, inf: &Inference, k: usize) -> Result<Concept, Error> {
        let j = self
            .proof
            .producer_of(&inf.premises[k])
            .ok_or_else(|| Error::NotExtractable(format!("premise {} has no producer", inf.premises[k])))?;
        self.at(j)
    }

    fn rhs_if_sigma(&self, inf: &Inference) -> Result<Concept, Error> {
        if self.in_sigma(&inf.conclusion.rhs) {
            Ok(inf.conclusion.rhs.clone())
        } else {
            Err(self.fail(inf))
        }
    }

    fn fail(&self, inf: &Inference) -> Error {
        Error::NotExtractable(format!("{} by {} has no Σ-interpolant in this proof", inf.conclusion, inf.rule))
    }

    fn at(&mut self, idx: usize) -> Result<Concept, Error> {
        if let Some(r) = self.memo.get(&idx) {
            return r.clone();
        }
        let inf = self.proof.inferences[idx].clone();
        let result = match inf.rule {
            Rule::R0 | Rule::RTop => self.rhs_if_sigma(&inf),
            Rule::RBot | Rule::RExistsBot => Ok(Concept::Bottom),
            Rule::RAndPlus => {
                let mut parts = Vec::with_capacity(inf.premises.len());
                for k in 0..inf.premises.len() {
                    parts.push(self.premise(&inf, k)?);
                }
                Ok(Concept::and(parts))
            }
            Rule::RSub => {
                let from_first = match &inf.side_data {
                    Some(SideValue::Axiom(ax)) => signature_of(ax).is_subset(self.first),
                    _ => false,
                };
                let told = self.rhs_if_sigma(&inf);
                if from_first && told.is_ok() {
                    told
                } else {
                    self.premise(&inf, 0).or(told)
                }
            }
            Rule::RAndMinus => self.rhs_if_sigma(&inf).or_else(|_| self.premise(&inf, 0)),
            Rule::RExists => {
                let via_filler = |this: &mut Self| -> Result<Concept, Error> {
                    match &inf.premises[0].rhs {
                        Concept::Exists(r, _) if this.sigma.contains_role(r) => Ok(Concept::exists(r.clone(), this.premise(&inf, 1)?)),
                        _ => Err(this.fail(&inf)),
                    }
                };
                if signature_of(&inf.premises[0].rhs).is_subset(self.first) {
                    via_filler(self).or_else(|_| self.premise(&inf, 0))
                } else {
                    self.premise(&inf, 0).or_else(|_| via_filler(self))
                }
            }
            _ => Err(Error::NotExtractable(format!("{} is not a basic-calculus rule", inf.rule))),
        };
        self.memo.insert(idx, result.clone());
        result
    }
}

/// An interpolant for the goal `C₁ ⊑ C₂` of a basic-calculus proof from `O₁ ∪ O₂`: a concept
/// `D` over `sigma` with `C₁ ⊑ D` and `D ⊑ C₂` entailed.
///
/// `partition` holds `(sig(O₁), sig(O₂))`; it decides, per `R_⊑` and `R_∃` step, which of
/// the two candidate interpolants is tried first. Fails with [`Error::NotExtractable`] when
/// some step of this particular proof admits no Σ-interpolant.
pub fn interpolant_from_proof(proof: &Proof, sigma: &Signature, partition: (&Signature, &Signature)) -> Result<Concept, Error> {
    if proof.is_empty() {
        return Err(Error::NotExtractable("empty proof".into()));
    }
    let mut ex = Extractor { proof, sigma, first: partition.0, memo: HashMap::new() };
    ex.at(proof.len() - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Axiom, Ontology, Symbol};
    use crate::reasoner::{proofs, saturate, Inclusion, ProofLimits, System};

    fn n(s: &str) -> Concept {
        Concept::name(s)
    }

    fn sig(names: &[&str]) -> Signature {
        names.iter().map(|s| Symbol::concept(*s)).collect()
    }

    #[test]
    fn chain_through_shared_name() {
        let o1 = Ontology::new([Axiom::sub(n("A"), n("B"))]);
        let o2 = Ontology::new([Axiom::sub(n("B"), n("E"))]);
        let o = o1.union(&o2);
        let log = saturate(&o, &[n("A"), n("E")], System::A).unwrap();
        let all = proofs(&log, &Inclusion::new(n("A"), n("E")), ProofLimits::default());
        assert!(!all.is_empty());
        let (s1, s2) = (signature_of(&o1), signature_of(&o2));
        for p in &all {
            assert_eq!(interpolant_from_proof(p, &sig(&["B"]), (&s1, &s2)).unwrap(), n("B"));
        }
    }

    #[test]
    fn base_cases() {
        let o = Ontology::new([Axiom::sub(n("A"), Concept::Bottom)]);
        let log = saturate(&o, &[n("A"), n("X")], System::A).unwrap();
        let empty = Signature::new();
        let p = &proofs(&log, &Inclusion::new(n("A"), Concept::Top), ProofLimits::default())[0];
        assert_eq!(interpolant_from_proof(p, &empty, (&empty, &empty)).unwrap(), Concept::Top);
        let p = &proofs(&log, &Inclusion::new(Concept::Bottom, n("X")), ProofLimits::default())[0];
        assert_eq!(interpolant_from_proof(p, &empty, (&empty, &empty)).unwrap(), Concept::Bottom);
    }

    #[test]
    fn non_sigma_reflexivity_is_not_extractable() {
        let log = saturate(&Ontology::empty(), &[n("A")], System::A).unwrap();
        let p = &proofs(&log, &Inclusion::new(n("A"), n("A")), ProofLimits::default())[0];
        let empty = Signature::new();
        assert!(matches!(interpolant_from_proof(p, &empty, (&empty, &empty)), Err(Error::NotExtractable(_))));
    }
}
