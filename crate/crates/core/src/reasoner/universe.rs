use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::model::{canonicalize, Concept};

pub type ConceptId = u32;
pub type RoleId = u32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Shape {
    Top,
    Bottom,
    Name,
    Conj(Vec<ConceptId>),
    Exists(RoleId, ConceptId),
}

/// The finite set of canonical concepts a saturation run reasons over, interned to dense ids.
#[derive(Clone, Debug)]
pub struct Universe {
    concepts: Vec<Concept>,
    index: HashMap<Concept, ConceptId>,
    pub(crate) shapes: Vec<Shape>,
    roles: Vec<Arc<str>>,
    /// conjunct -> conjunctions having it as a direct conjunct
    pub(crate) conj_with: Vec<Vec<ConceptId>>,
    /// filler -> existential restrictions over it
    pub(crate) exists_with_filler: Vec<Vec<ConceptId>>,
    exists_index: HashMap<(RoleId, ConceptId), ConceptId>,
    top: ConceptId,
    bottom: ConceptId,
}

impl Universe {
    /// Interns a subterm-closed set of canonical concepts that contains `⊤` and `⊥`.
    pub(crate) fn new(members: BTreeSet<Concept>) -> Self {
        let concepts: Vec<Concept> = members.into_iter().collect();
        let index: HashMap<Concept, ConceptId> = concepts.iter().enumerate().map(|(i, c)| (c.clone(), i as ConceptId)).collect();
        let mut roles: Vec<Arc<str>> = Vec::new();
        let mut role_index: HashMap<Arc<str>, RoleId> = HashMap::new();
        let mut shapes = Vec::with_capacity(concepts.len());
        let mut conj_with = vec![Vec::new(); concepts.len()];
        let mut exists_with_filler = vec![Vec::new(); concepts.len()];
        let mut exists_index = HashMap::new();
        for (i, c) in concepts.iter().enumerate() {
            let id = i as ConceptId;
            let shape = match c {
                Concept::Top => Shape::Top,
                Concept::Bottom => Shape::Bottom,
                Concept::Name(_) => Shape::Name,
                Concept::Conj(parts) => {
                    let ids: Vec<ConceptId> = parts.iter().map(|p| index[p]).collect();
                    for &p in &ids {
                        conj_with[p as usize].push(id);
                    }
                    Shape::Conj(ids)
                }
                Concept::Exists(r, filler) => {
                    let rid = *role_index.entry(r.clone()).or_insert_with(|| {
                        roles.push(r.clone());
                        (roles.len() - 1) as RoleId
                    });
                    let f = index[filler.as_ref()];
                    exists_with_filler[f as usize].push(id);
                    exists_index.insert((rid, f), id);
                    Shape::Exists(rid, f)
                }
            };
            shapes.push(shape);
        }
        let top = index[&Concept::Top];
        let bottom = index[&Concept::Bottom];
        Universe { concepts, index, shapes, roles, conj_with, exists_with_filler, exists_index, top, bottom }
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn concept(&self, id: ConceptId) -> &Concept {
        &self.concepts[id as usize]
    }

    pub fn concepts(&self) -> &[Concept] {
        &self.concepts
    }

    /// Id of the canonical form of `c`, if it is a member.
    pub fn id_of(&self, c: &Concept) -> Option<ConceptId> {
        self.index.get(c).copied().or_else(|| self.index.get(&canonicalize(c)).copied())
    }

    pub fn contains(&self, c: &Concept) -> bool {
        self.id_of(c).is_some()
    }

    pub fn top(&self) -> ConceptId {
        self.top
    }

    pub fn bottom(&self) -> ConceptId {
        self.bottom
    }

    pub(crate) fn role_name(&self, r: RoleId) -> &Arc<str> {
        &self.roles[r as usize]
    }

    pub(crate) fn exists(&self, r: RoleId, filler: ConceptId) -> Option<ConceptId> {
        self.exists_index.get(&(r, filler)).copied()
    }
}
