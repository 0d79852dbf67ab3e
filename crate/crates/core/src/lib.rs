//! Deciding and computing definitions of EL concepts over a chosen signature.
//!
//! A concept `C` is Σ-definable with respect to an ontology `O` when some concept `D` built
//! only from symbols of Σ satisfies `O ⊨ C ≡ D`. This crate decides that question by
//! saturating `O` together with a renamed copy of itself, and synthesizes the definitions
//! from the recorded inferences.
//!
//! * [`model`]: concepts, axioms, ontologies, signatures and canonical forms.
//! * [`parser`]: the functional-style text format.
//! * [`reasoner`]: saturation under two rule systems with full inference logs.
//! * [`definability`]: signature copies, label propagation and interpolant extraction.
//! * [`oracle`]: finite-model semantics and brute-force ground truth.

pub mod definability;
pub mod error;
pub mod model;
pub mod oracle;
pub mod parser;
pub mod reasoner;

pub use error::Error;
pub use model::{canonicalize, signature_of, subconcept_closure, Axiom, Concept, DisjConcept, Ontology, Signature, Symbol, SymbolKind};
pub use parser::{parse_axiom, parse_concept, parse_ontology, serialize, ParseError, Serialize, SourceLocation};
pub use reasoner::{entails, saturate, Inclusion, InferenceLog, Query, Rule, System};
