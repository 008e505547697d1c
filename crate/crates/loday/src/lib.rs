//! Exact symbolic engine for derived products, derived brackets and the
//! strong homotopy structures they generate on finite truncated instances.
//!
//! Everything is computed over exact rationals; every identity the crate
//! verifies is checked to literal zero, never to a tolerance.  The main
//! ingredients:
//!
//! * graded words and formal sums over a finite graded basis ([`space`]),
//! * Koszul signs and unshuffle enumeration ([`perm`]),
//! * multilinear maps given by values on basis tuples ([`multimap`]),
//! * tensor-coalgebra machinery: coproducts, coderivation lifts,
//!   corestriction, commutators and the Gerstenhaber bracket ([`coalgebra`]),
//! * concrete algebras by structure constants, derivations and formal
//!   deformations ([`algebra`]),
//! * the derived higher products/brackets and their packaging as strong
//!   homotopy structures ([`derived`]),
//! * verification suites with counterexample witnesses ([`verify`]),
//! * gauge transformations and the induced coalgebra isomorphisms ([`gauge`]),
//! * a line-oriented input format for batch runs ([`specfile`]).

pub mod algebra;
pub mod coalgebra;
pub mod derived;
pub mod gauge;
pub mod multimap;
pub mod perm;
pub mod report;
pub mod sampling;
pub mod scalar;
pub mod space;
pub mod specfile;
pub mod verify;

pub use report::{Cutoffs, Status, VerificationReport, Witness};
pub use scalar::Scalar;
pub use space::{BasisSymbol, Component, Elem, Space, SymbolId, Word};

/// Errors produced while building or evaluating structures.
///
/// Verification *failures* are not errors: the verify functions return
/// reports with witnesses. `Error` covers malformed inputs and broken
/// preconditions.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("degree error: {0}")]
    Degree(String),
    #[error("coalgebra flavor mismatch: {0}")]
    Flavor(String),
    #[error("malformed word: {0}")]
    Word(String),
    #[error("unknown basis symbol `{0}`")]
    UnknownSymbol(String),
    #[error("duplicate symbol name `{0}`")]
    DuplicateSymbol(String),
    #[error("algebra axioms failed: {0}")]
    Axioms(Box<VerificationReport>),
    #[error("derivation fails the Leibniz rule: {0}")]
    Leibniz(Box<VerificationReport>),
    #[error("non-terminating series: {0}")]
    NonTerminating(String),
    #[error("skew-symmetry precondition failed for the arity-{arity} part on {witness}")]
    NotSkew { arity: usize, witness: String },
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
