//! Verification kernel for a quantified non-Fregean justification logic.
//!
//! The crate provides the two-sorted language (propositions and
//! justifications), the substitution calculus with forced bound-variable
//! renaming, the axiom system with its S4/S5-style extensions, a Hilbert
//! derivation checker plus proof transformers, finite table-driven models
//! with their validator and evaluator, and an S4 Kripke side with an
//! equivalence audit and small-frame countermodel search.

pub mod axioms;
pub mod gen;
pub mod kripke;
pub mod models;
pub mod proofs;
pub mod subst;
pub mod syntax;
