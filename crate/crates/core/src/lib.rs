//! Sieve-valued truth values for quantum propositions and histories over
//! finite-dimensional Hilbert spaces.
//!
//! Propositions are projectors. Each is approximated from above in every
//! classical context (outer daseinization), giving a subobject of the
//! spectral presheaf over a finite poset of contexts. States become
//! pseudo-states, and truth values are global elements of the presheaf of
//! sieves. Histories live over products of context posets.

pub mod algebra;
pub mod context;
pub mod dasein;
pub mod decoherence;
pub mod error;
pub mod hpo;
pub mod presheaf;
pub mod random;
pub mod settings;
pub mod temporal;

pub use error::{Error, Result};
