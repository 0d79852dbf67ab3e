//! Consequence-based saturation for EL.
//!
//! Two rule systems are available and produce logs with the same entailments:
//!
//! * [`System::A`]: the basic calculus (`R_0 R_⊤ R_⊥ R_⊑ R_⊓- R_⊓+ R_∃⊥ R_∃`). Conclusions
//!   always keep the context concept on the left; `⊑` and `≡` axioms are applied directly.
//! * [`System::B`]: the proof-tracing calculus (`S_0 S_⊤ S_⊥ S_ax S_⊑ S_≡ S_⊓- S_⊓+ S_∃⊥ S_∃`).
//!   Told and structural inclusions are derived without premises and composed by `S_⊑`.
//!
//! Every rule instance over the final conclusion set is recorded in the [`InferenceLog`],
//! which is what proof enumeration and label propagation traverse.

mod engine;
mod proof;
mod universe;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

pub use proof::{proofs, render_proof, Proof, ProofLimits};
pub use universe::{ConceptId, Universe};

use crate::error::Error;
use crate::model::{canonicalize, Axiom, Concept, Ontology};
use crate::parser::Serialize;

/// Which calculus a saturation run uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum System {
    A,
    B,
}

impl System {
    pub const ALL: [System; 2] = [System::A, System::B];
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            System::A => f.write_str("A"),
            System::B => f.write_str("B"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    R0,
    RTop,
    RBot,
    RSub,
    RAndMinus,
    RAndPlus,
    RExistsBot,
    RExists,
    S0,
    STop,
    SBot,
    SAx,
    SChain,
    SEquiv,
    SAndMinus,
    SAndPlus,
    SExistsBot,
    SExists,
}

impl Rule {
    pub fn system(self) -> System {
        use Rule::*;
        match self {
            R0 | RTop | RBot | RSub | RAndMinus | RAndPlus | RExistsBot | RExists => System::A,
            _ => System::B,
        }
    }

    pub fn name(self) -> &'static str {
        use Rule::*;
        match self {
            R0 => "R_0",
            RTop => "R_⊤",
            RBot => "R_⊥",
            RSub => "R_⊑",
            RAndMinus => "R_⊓-",
            RAndPlus => "R_⊓+",
            RExistsBot => "R_∃⊥",
            RExists => "R_∃",
            S0 => "S_0",
            STop => "S_⊤",
            SBot => "S_⊥",
            SAx => "S_ax",
            SChain => "S_⊑",
            SEquiv => "S_≡",
            SAndMinus => "S_⊓-",
            SAndPlus => "S_⊓+",
            SExistsBot => "S_∃⊥",
            SExists => "S_∃",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Extra data attached to an inference: the axiom it used, the equivalence chain behind
/// an `S_≡` conclusion, or the role of an existential rule.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SideData {
    None,
    /// Index into the saturated ontology's axiom list.
    Axiom(usize),
    /// Axiom indices of the equivalences linking the two sides, in path order.
    Chain(Vec<usize>),
    Role(Arc<str>),
}

/// A concept inclusion `lhs ⊑ rhs` between canonical concepts.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Inclusion {
    pub lhs: Concept,
    pub rhs: Concept,
}

impl Inclusion {
    pub fn new(lhs: Concept, rhs: Concept) -> Self {
        Inclusion { lhs: canonicalize(&lhs), rhs: canonicalize(&rhs) }
    }
}

impl fmt::Display for Inclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubClassOf({} {})", self.lhs, self.rhs)
    }
}

/// An entailment query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Query {
    Inclusion(Inclusion),
    Equivalence(Concept, Concept),
}

impl Query {
    pub fn sub(lhs: Concept, rhs: Concept) -> Self {
        Query::Inclusion(Inclusion::new(lhs, rhs))
    }

    pub fn equiv(lhs: Concept, rhs: Concept) -> Self {
        Query::Equivalence(canonicalize(&lhs), canonicalize(&rhs))
    }
}

impl From<&Axiom> for Query {
    fn from(ax: &Axiom) -> Self {
        match ax {
            Axiom::SubClassOf(l, r) => Query::sub(l.clone(), r.clone()),
            Axiom::EquivalentClasses(l, r) => Query::equiv(l.clone(), r.clone()),
        }
    }
}

pub type ConclusionId = u32;
pub type InferenceId = u32;

/// A recorded rule application, by conclusion ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InferenceRecord {
    pub rule: Rule,
    pub premises: Vec<ConclusionId>,
    pub conclusion: ConclusionId,
    pub side: SideData,
}

/// A rule application with its inclusions materialized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inference {
    pub rule: Rule,
    pub premises: Vec<Inclusion>,
    pub conclusion: Inclusion,
    pub side_data: Option<SideValue>,
}

/// Materialized [`SideData`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SideValue {
    Axiom(Axiom),
    Chain(Vec<Axiom>),
    Role(Arc<str>),
}

impl fmt::Display for SideValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SideValue::Axiom(ax) => f.write_str(&ax.serialize()),
            SideValue::Chain(axs) => {
                for (i, ax) in axs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    f.write_str(&ax.serialize())?;
                }
                Ok(())
            }
            SideValue::Role(r) => write!(f, "role {r}"),
        }
    }
}

/// Caps on a saturation run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SaturationLimits {
    pub max_conclusions: usize,
    pub max_inferences: usize,
}

impl Default for SaturationLimits {
    fn default() -> Self {
        SaturationLimits { max_conclusions: 1_000_000, max_inferences: 10_000_000 }
    }
}

/// The saturated set of conclusions together with every inference producing them.
#[derive(Clone, Debug)]
pub struct InferenceLog {
    pub(crate) system: System,
    pub(crate) ontology: Ontology,
    pub(crate) universe: Universe,
    pub(crate) conclusions: Vec<(ConceptId, ConceptId)>,
    pub(crate) conclusion_index: HashMap<(ConceptId, ConceptId), ConclusionId>,
    pub(crate) inferences: Vec<InferenceRecord>,
    /// Producers of each conclusion; the first entry is the inference that first derived it.
    pub(crate) producers: Vec<Vec<InferenceId>>,
}

impl InferenceLog {
    pub fn system(&self) -> System {
        self.system
    }

    pub fn ontology(&self) -> &Ontology {
        &self.ontology
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn conclusion_count(&self) -> usize {
        self.conclusions.len()
    }

    pub fn inference_count(&self) -> usize {
        self.inferences.len()
    }

    pub fn conclusion_id(&self, inc: &Inclusion) -> Option<ConclusionId> {
        let l = self.universe.id_of(&inc.lhs)?;
        let r = self.universe.id_of(&inc.rhs)?;
        self.conclusion_index.get(&(l, r)).copied()
    }

    pub fn contains(&self, inc: &Inclusion) -> bool {
        self.conclusion_id(inc).is_some()
    }

    pub fn inclusion(&self, id: ConclusionId) -> Inclusion {
        let (l, r) = self.conclusions[id as usize];
        Inclusion { lhs: self.universe.concept(l).clone(), rhs: self.universe.concept(r).clone() }
    }

    pub fn conclusions(&self) -> impl Iterator<Item = Inclusion> + '_ {
        (0..self.conclusions.len() as ConclusionId).map(|i| self.inclusion(i))
    }

    pub fn records(&self) -> &[InferenceRecord] {
        &self.inferences
    }

    pub fn record(&self, id: InferenceId) -> &InferenceRecord {
        &self.inferences[id as usize]
    }

    pub fn producers(&self, id: ConclusionId) -> &[InferenceId] {
        &self.producers[id as usize]
    }

    pub fn side_value(&self, side: &SideData) -> Option<SideValue> {
        let axioms = self.ontology.axioms();
        match side {
            SideData::None => None,
            SideData::Axiom(i) => Some(SideValue::Axiom(axioms[*i].clone())),
            SideData::Chain(path) => Some(SideValue::Chain(path.iter().map(|&i| axioms[i].clone()).collect())),
            SideData::Role(r) => Some(SideValue::Role(r.clone())),
        }
    }

    pub fn inference(&self, id: InferenceId) -> Inference {
        let rec = &self.inferences[id as usize];
        Inference {
            rule: rec.rule,
            premises: rec.premises.iter().map(|&p| self.inclusion(p)).collect(),
            conclusion: self.inclusion(rec.conclusion),
            side_data: self.side_value(&rec.side),
        }
    }

    /// Inferences producing `inc`, first-deriving inference first.
    pub fn inferences_for(&self, inc: &Inclusion) -> Vec<Inference> {
        match self.conclusion_id(inc) {
            Some(id) => self.producers(id).iter().map(|&i| self.inference(i)).collect(),
            None => Vec::new(),
        }
    }

    /// Whether `lhs ⊑ rhs` follows, for universe members: derived directly, or `lhs` is
    /// derived unsatisfiable.
    pub fn entails(&self, lhs: &Concept, rhs: &Concept) -> bool {
        let (Some(l), Some(r)) = (self.universe.id_of(lhs), self.universe.id_of(rhs)) else {
            return false;
        };
        self.entails_ids(l, r)
    }

    pub(crate) fn entails_ids(&self, l: ConceptId, r: ConceptId) -> bool {
        self.conclusion_index.contains_key(&(l, r)) || self.conclusion_index.contains_key(&(l, self.universe.bottom()))
    }

    /// Derived subsumers of a universe member.
    pub fn subsumers(&self, c: &Concept) -> BTreeSet<Concept> {
        let Some(l) = self.universe.id_of(c) else { return BTreeSet::new() };
        self.conclusions.iter().filter(|(x, _)| *x == l).map(|&(_, r)| self.universe.concept(r).clone()).collect()
    }
}

/// Saturates `o` with `goals` registered in the term universe, under default limits.
pub fn saturate(o: &Ontology, goals: &[Concept], system: System) -> Result<InferenceLog, Error> {
    saturate_with(o, goals, system, &SaturationLimits::default())
}

pub fn saturate_with(o: &Ontology, goals: &[Concept], system: System, limits: &SaturationLimits) -> Result<InferenceLog, Error> {
    engine::run(o, goals, system, limits)
}

/// Basic-calculus saturation for entailment checks with lhs among `goals`: no inferences
/// are recorded and only concepts reachable from the goals are saturated.
pub(crate) fn saturate_goal_directed(o: &Ontology, goals: &[Concept]) -> Result<InferenceLog, Error> {
    engine::run_goal_directed(o, goals, &SaturationLimits::default())
}

/// Decides `o ⊨ query` by saturating with the query sides as goals.
pub fn entails(o: &Ontology, query: &Query, system: System) -> Result<bool, Error> {
    entails_with(o, query, system, &SaturationLimits::default())
}

pub fn entails_with(o: &Ontology, query: &Query, system: System, limits: &SaturationLimits) -> Result<bool, Error> {
    let (l, r) = match query {
        Query::Inclusion(inc) => (&inc.lhs, &inc.rhs),
        Query::Equivalence(l, r) => (l, r),
    };
    let log = saturate_with(o, &[l.clone(), r.clone()], system, limits)?;
    Ok(match query {
        Query::Inclusion(_) => log.entails(l, r),
        Query::Equivalence(..) => log.entails(l, r) && log.entails(r, l),
    })
}

/// All entailed inclusions between distinct concept names of `o`, sorted. An unsatisfiable
/// name is reported once, as `A ⊑ ⊥`.
pub fn classify(o: &Ontology, system: System) -> Result<Vec<Inclusion>, Error> {
    let log = saturate(o, &[], system)?;
    let names: Vec<ConceptId> =
        (0..log.universe.len() as ConceptId).filter(|&i| matches!(log.universe.concept(i), Concept::Name(_))).collect();
    let bottom = log.universe.bottom();
    let mut out = Vec::new();
    for &a in &names {
        if log.entails_ids(a, bottom) {
            out.push(Inclusion::new(log.universe.concept(a).clone(), Concept::Bottom));
            continue;
        }
        for &b in &names {
            if a != b && log.entails_ids(a, b) {
                out.push(Inclusion::new(log.universe.concept(a).clone(), log.universe.concept(b).clone()));
            }
        }
    }
    out.sort();
    Ok(out)
}
