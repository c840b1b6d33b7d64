//! Boole's partial algebra of classes and the machinery around it.
//!
//! * [`terms`]: term syntax, parser and printer.
//! * [`polynomial`]: multilinear normal forms, constituent expansions and the
//!   0/1 vertex oracle.
//! * [`algebra`]: finite partial algebras, strict evaluation, Horn
//!   satisfaction, weak subalgebras, embeddings and diagrams.
//! * [`classes`]: the algebras `P_U` of subsets of a finite universe and the
//!   characteristic-function embedding into `Z^U`.
//! * [`horn`]: universal Horn sentences, relativization and bounded searches
//!   for total models and for embeddings into them.
//! * [`derivation`]: consequence certificates and rule-based derivation
//!   traces.
//! * [`cli`]: the `boolelab` command-line front end.

pub mod algebra;
pub mod catalog;
pub mod classes;
pub mod cli;
pub mod derivation;
pub mod horn;
pub mod par;
pub mod polynomial;
pub mod terms;

use thiserror::Error;

pub use algebra::{Assignment, FinitePartialAlgebra, HornVerdict};
pub use classes::{ClassAlgebra, IntVector};
pub use derivation::{Certificate, DerivationTrace, Mode};
pub use horn::{Consequent, Delta, HornSentence};
pub use polynomial::{ConstituentExpansion, MultilinearPoly, OracleVerdict, Vertex};
pub use terms::{Argument, Equation, Term};

/// A configured size bound was exceeded.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{what} cap exceeded: {requested} requested, limit is {cap}")]
pub struct CapExceeded {
    pub what: &'static str,
    pub requested: usize,
    pub cap: usize,
}
