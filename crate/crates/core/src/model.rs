//! Immutable term representations for EL concepts, axioms, ontologies and signatures.
//!
//! Conjunction is stored n-ary. Every consumer in this crate works on the canonical form
//! produced by [`canonicalize`]: conjunctions are flattened, sorted by the derived total
//! order on [`Concept`], deduplicated, and stripped of `⊤` units.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// Character reserved for fresh copies of symbols; input names may not contain it.
pub const RESERVED_CHAR: char = '@';

/// Suffix appended to a symbol name to form its fresh copy.
pub const COPY_SUFFIX: &str = "@c";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymbolKind {
    Concept,
    Role,
}

impl fmt::Display for SymbolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolKind::Concept => f.write_str("class"),
            SymbolKind::Role => f.write_str("role"),
        }
    }
}

/// A concept name or a role name. `⊤` and `⊥` are constructors, never symbols.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    pub kind: SymbolKind,
    pub name: Arc<str>,
}

impl Symbol {
    pub fn concept(name: impl Into<Arc<str>>) -> Self {
        Symbol { kind: SymbolKind::Concept, name: name.into() }
    }

    pub fn role(name: impl Into<Arc<str>>) -> Self {
        Symbol { kind: SymbolKind::Role, name: name.into() }
    }

    /// The fresh copy of this symbol (`name@c`), of the same kind.
    pub fn fresh_copy(&self) -> Self {
        Symbol { kind: self.kind, name: format!("{}{}", self.name, COPY_SUFFIX).into() }
    }

    /// Whether the name is a valid user-supplied name: nonempty and free of the reserved character.
    pub fn is_valid_name(name: &str) -> bool {
        !name.is_empty() && !name.contains(RESERVED_CHAR)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// An EL concept.
///
/// The variant order defines the constructor-tag part of the total order used for
/// canonical sorting: `Top < Bottom < Name < Conj < Exists`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Concept {
    Top,
    Bottom,
    Name(Arc<str>),
    Conj(Vec<Concept>),
    Exists(Arc<str>, Box<Concept>),
}

impl Concept {
    pub fn name(name: impl Into<Arc<str>>) -> Self {
        Concept::Name(name.into())
    }

    pub fn exists(role: impl Into<Arc<str>>, filler: Concept) -> Self {
        Concept::Exists(role.into(), Box::new(filler))
    }

    /// Canonical conjunction of the given concepts (`⊤` for an empty input).
    pub fn and<I: IntoIterator<Item = Concept>>(parts: I) -> Self {
        canonicalize(&Concept::Conj(parts.into_iter().collect()))
    }

    pub fn is_top(&self) -> bool {
        matches!(self, Concept::Top)
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, Concept::Bottom)
    }

    /// Conjuncts of a conjunction, or the concept itself as a one-element slice.
    pub fn conjuncts(&self) -> &[Concept] {
        match self {
            Concept::Conj(parts) => parts,
            other => std::slice::from_ref(other),
        }
    }

    /// Number of constructor nodes: names, `⊤`, `⊥` and existential restrictions each
    /// count one; conjunction itself is free, so `A ⊓ ∃r.A` has size 3.
    pub fn size(&self) -> usize {
        match self {
            Concept::Top | Concept::Bottom | Concept::Name(_) => 1,
            Concept::Conj(parts) => parts.iter().map(Concept::size).sum(),
            Concept::Exists(_, filler) => 1 + filler.size(),
        }
    }

    /// Nesting depth of existential restrictions.
    pub fn role_depth(&self) -> usize {
        match self {
            Concept::Top | Concept::Bottom | Concept::Name(_) => 0,
            Concept::Conj(parts) => parts.iter().map(Concept::role_depth).max().unwrap_or(0),
            Concept::Exists(_, filler) => 1 + filler.role_depth(),
        }
    }

    /// Applies `f` to every symbol, producing a renamed concept. Kinds are preserved.
    pub fn rename(&self, f: &impl Fn(&Symbol) -> Symbol) -> Concept {
        match self {
            Concept::Top => Concept::Top,
            Concept::Bottom => Concept::Bottom,
            Concept::Name(n) => Concept::Name(f(&Symbol::concept(n.clone())).name),
            Concept::Conj(parts) => Concept::Conj(parts.iter().map(|p| p.rename(f)).collect()),
            Concept::Exists(r, filler) => Concept::Exists(f(&Symbol::role(r.clone())).name, Box::new(filler.rename(f))),
        }
    }
}

impl fmt::Display for Concept {
    /// Functional-style syntax, written as the term is stored (no canonicalization).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Concept::Top => f.write_str("owl:Thing"),
            Concept::Bottom => f.write_str("owl:Nothing"),
            Concept::Name(n) => f.write_str(n),
            Concept::Conj(parts) => {
                f.write_str("ObjectIntersectionOf(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str(")")
            }
            Concept::Exists(r, filler) => write!(f, "ObjectSomeValuesFrom({r} {filler})"),
        }
    }
}

/// Returns the canonical form of `c`.
pub fn canonicalize(c: &Concept) -> Concept {
    match c {
        Concept::Top | Concept::Bottom | Concept::Name(_) => c.clone(),
        Concept::Exists(r, filler) => Concept::Exists(r.clone(), Box::new(canonicalize(filler))),
        Concept::Conj(parts) => {
            let mut flat = Vec::with_capacity(parts.len());
            for p in parts {
                match canonicalize(p) {
                    Concept::Top => {}
                    Concept::Conj(inner) => flat.extend(inner),
                    other => flat.push(other),
                }
            }
            flat.sort();
            flat.dedup();
            match flat.len() {
                0 => Concept::Top,
                1 => flat.pop().unwrap(),
                _ => Concept::Conj(flat),
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    SubClassOf(Concept, Concept),
    EquivalentClasses(Concept, Concept),
}

impl Axiom {
    pub fn sub(lhs: Concept, rhs: Concept) -> Self {
        Axiom::SubClassOf(lhs, rhs)
    }

    pub fn equiv(lhs: Concept, rhs: Concept) -> Self {
        Axiom::EquivalentClasses(lhs, rhs)
    }

    /// Canonical sides; the two sides of an equivalence are put in ascending order.
    pub fn canonical(&self) -> Axiom {
        match self {
            Axiom::SubClassOf(l, r) => Axiom::SubClassOf(canonicalize(l), canonicalize(r)),
            Axiom::EquivalentClasses(l, r) => {
                let (l, r) = (canonicalize(l), canonicalize(r));
                if l <= r {
                    Axiom::EquivalentClasses(l, r)
                } else {
                    Axiom::EquivalentClasses(r, l)
                }
            }
        }
    }

    pub fn sides(&self) -> (&Concept, &Concept) {
        match self {
            Axiom::SubClassOf(l, r) | Axiom::EquivalentClasses(l, r) => (l, r),
        }
    }

    pub fn rename(&self, f: &impl Fn(&Symbol) -> Symbol) -> Axiom {
        match self {
            Axiom::SubClassOf(l, r) => Axiom::SubClassOf(l.rename(f), r.rename(f)),
            Axiom::EquivalentClasses(l, r) => Axiom::EquivalentClasses(l.rename(f), r.rename(f)),
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axiom::SubClassOf(l, r) => write!(f, "SubClassOf({l} {r})"),
            Axiom::EquivalentClasses(l, r) => write!(f, "EquivalentClasses({l} {r})"),
        }
    }
}

/// A finite, ordered, duplicate-free list of canonical axioms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Ontology {
    axioms: Vec<Axiom>,
}

impl Ontology {
    /// Builds an ontology, canonicalizing each axiom and dropping later duplicates.
    pub fn new<I: IntoIterator<Item = Axiom>>(axioms: I) -> Self {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for ax in axioms {
            let ax = ax.canonical();
            if seen.insert(ax.clone()) {
                out.push(ax);
            }
        }
        Ontology { axioms: out }
    }

    pub fn empty() -> Self {
        Ontology::default()
    }

    pub fn axioms(&self) -> &[Axiom] {
        &self.axioms
    }

    pub fn len(&self) -> usize {
        self.axioms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axioms.is_empty()
    }

    /// Axioms of `self` followed by those of `other` not already present.
    pub fn union(&self, other: &Ontology) -> Ontology {
        Ontology::new(self.axioms.iter().chain(other.axioms.iter()).cloned())
    }

    pub fn with_axiom(&self, axiom: Axiom) -> Ontology {
        Ontology::new(self.axioms.iter().cloned().chain(std::iter::once(axiom)))
    }

    pub fn rename(&self, f: &impl Fn(&Symbol) -> Symbol) -> Ontology {
        Ontology::new(self.axioms.iter().map(|a| a.rename(f)))
    }
}

/// A finite set of symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Signature(BTreeSet<Symbol>);

impl Signature {
    pub fn new() -> Self {
        Signature::default()
    }

    pub fn insert(&mut self, s: Symbol) -> bool {
        self.0.insert(s)
    }

    pub fn contains(&self, s: &Symbol) -> bool {
        self.0.contains(s)
    }

    pub fn contains_concept(&self, name: &str) -> bool {
        self.0.contains(&Symbol::concept(name))
    }

    pub fn contains_role(&self, name: &str) -> bool {
        self.0.contains(&Symbol::role(name))
    }

    pub fn is_subset(&self, other: &Signature) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Symbol> {
        self.0.iter()
    }

    pub fn roles(&self) -> impl Iterator<Item = &Symbol> {
        self.0.iter().filter(|s| s.kind == SymbolKind::Role)
    }

    pub fn concepts(&self) -> impl Iterator<Item = &Symbol> {
        self.0.iter().filter(|s| s.kind == SymbolKind::Concept)
    }

    pub fn union(&self, other: &Signature) -> Signature {
        Signature(self.0.union(&other.0).cloned().collect())
    }

    pub fn intersection(&self, other: &Signature) -> Signature {
        Signature(self.0.intersection(&other.0).cloned().collect())
    }

    pub fn difference(&self, other: &Signature) -> Signature {
        Signature(self.0.difference(&other.0).cloned().collect())
    }
}

impl FromIterator<Symbol> for Signature {
    fn from_iter<T: IntoIterator<Item = Symbol>>(iter: T) -> Self {
        Signature(iter.into_iter().collect())
    }
}

impl IntoIterator for Signature {
    type Item = Symbol;
    type IntoIter = std::collections::btree_set::IntoIter<Symbol>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("}")
    }
}

/// Anything that has a signature.
pub trait Signed {
    fn collect_signature(&self, out: &mut Signature);
}

impl Signed for Concept {
    fn collect_signature(&self, out: &mut Signature) {
        match self {
            Concept::Top | Concept::Bottom => {}
            Concept::Name(n) => {
                out.insert(Symbol::concept(n.clone()));
            }
            Concept::Conj(parts) => parts.iter().for_each(|p| p.collect_signature(out)),
            Concept::Exists(r, filler) => {
                out.insert(Symbol::role(r.clone()));
                filler.collect_signature(out);
            }
        }
    }
}

impl Signed for Axiom {
    fn collect_signature(&self, out: &mut Signature) {
        let (l, r) = self.sides();
        l.collect_signature(out);
        r.collect_signature(out);
    }
}

impl Signed for Ontology {
    fn collect_signature(&self, out: &mut Signature) {
        self.axioms.iter().for_each(|a| a.collect_signature(out));
    }
}

impl<T: Signed> Signed for [T] {
    fn collect_signature(&self, out: &mut Signature) {
        self.iter().for_each(|x| x.collect_signature(out));
    }
}

/// The concept and role names occurring in `item`.
pub fn signature_of<T: Signed + ?Sized>(item: &T) -> Signature {
    let mut sig = Signature::new();
    item.collect_signature(&mut sig);
    sig
}

fn insert_subconcepts(c: &Concept, out: &mut BTreeSet<Concept>) {
    if !out.insert(c.clone()) {
        return;
    }
    match c {
        Concept::Conj(parts) => parts.iter().for_each(|p| insert_subconcepts(p, out)),
        Concept::Exists(_, filler) => insert_subconcepts(filler, out),
        _ => {}
    }
}

/// All canonical subconcepts of the axiom sides of `o` and of `extra`, plus `⊤` and `⊥`.
pub fn subconcept_closure(o: &Ontology, extra: &[Concept]) -> BTreeSet<Concept> {
    let mut out = BTreeSet::new();
    out.insert(Concept::Top);
    out.insert(Concept::Bottom);
    for ax in o.axioms() {
        let (l, r) = ax.sides();
        insert_subconcepts(&canonicalize(l), &mut out);
        insert_subconcepts(&canonicalize(r), &mut out);
    }
    for c in extra {
        insert_subconcepts(&canonicalize(c), &mut out);
    }
    out
}

/// An EL⊔ concept in disjunctive normal form: a set of EL disjuncts.
///
/// The empty set is the empty label `ε`: identity for `⊔`, annihilator for `⊓` and `∃r`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DisjConcept {
    disjuncts: BTreeSet<Concept>,
}

impl DisjConcept {
    pub fn epsilon() -> Self {
        DisjConcept::default()
    }

    pub fn single(c: Concept) -> Self {
        DisjConcept { disjuncts: BTreeSet::from([canonicalize(&c)]) }
    }

    pub fn from_disjuncts<I: IntoIterator<Item = Concept>>(it: I) -> Self {
        DisjConcept { disjuncts: it.into_iter().map(|c| canonicalize(&c)).collect() }
    }

    pub fn is_epsilon(&self) -> bool {
        self.disjuncts.is_empty()
    }

    pub fn len(&self) -> usize {
        self.disjuncts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.disjuncts.is_empty()
    }

    pub fn disjuncts(&self) -> &BTreeSet<Concept> {
        &self.disjuncts
    }

    pub fn into_disjuncts(self) -> BTreeSet<Concept> {
        self.disjuncts
    }

    pub fn contains(&self, c: &Concept) -> bool {
        self.disjuncts.contains(c)
    }
}
