//! Exact combinatorial linear algebra for trivalent-graph and chord-diagram spaces.
//!
//! This crate computes, in exact rational arithmetic, a web of interrelated
//! finite-dimensional spaces built from decorated combinatorial objects:
//!
//! * [`graphspace`] — the graded algebra of vertex-oriented trivalent graphs
//!   modulo antisymmetry (reversing one vertex orientation negates a graph)
//!   and the local IHX relation. Graphs are represented by dart triples with a
//!   canonical-form routine that detects graphs equal to minus themselves.
//! * [`chordspace`] — linear chord diagrams (fixed-point-free involutions of
//!   `{1..2m}`), optionally with oriented chords, and their signed quotients
//!   under within-triple permutations of the endpoint intervals.
//! * [`symplectic`] — tensors over a symplectic vector space `H` of genus `g`
//!   with basis `x_1..x_g, y_1..y_g`, contraction of tensors along chord
//!   diagrams, invariant tensor construction, the third wedge power and its
//!   distinguished summand `U`, and certified dimensions of Lie-invariant
//!   subspaces.
//! * [`groupring`] — the rational group ring of a finitely generated free
//!   group, Magnus expansions, augmentation-ideal filtration, bar-complex
//!   cochains with cup products, and an identity suite for commutator and
//!   power expansions.
//! * [`torelli`] — a degree-one cocycle pairing two elements of `U` into the
//!   one-dimensional degree-one graph space, commutator-tree expansions of
//!   its associated map, and edge-labeled chord diagrams with an ordering
//!   properness test and proper-commutator certification.
//! * [`exact`] — the shared exact linear algebra: arbitrary-precision
//!   rationals, sparse vectors and matrices, reduced row echelon form, kernel
//!   bases, and quotient dimensions.
//! * [`verify`] — named end-to-end verification suites shared by the test
//!   harness and the command-line `selfcheck` verb.
//!
//! All arithmetic is exact; no floating point is used anywhere. Every space
//! is spanned by explicitly enumerable combinatorial generators, so every
//! dimension this crate reports is a theorem about a finite matrix.

#![warn(missing_docs)]
#![warn(missing_debug_implementations)]
#![forbid(unsafe_code)]

pub mod chordspace;
pub mod exact;
pub mod graphspace;
pub mod groupring;
pub mod symplectic;
pub mod torelli;
pub mod verify;

/// Crate-wide error type for precondition violations and malformed input.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A structural precondition on an input object failed.
    #[error("invalid input: {0}")]
    Invalid(String),
    /// A size or degree exceeded the configured cap.
    #[error("degree cap exceeded: {0}")]
    CapExceeded(String),
    /// An identity or verification suite found a counterexample.
    #[error("verification failed: {0}")]
    Verification(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Convenience constructor for [`Error::Invalid`].
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    /// Convenience constructor for [`Error::Verification`].
    pub fn verification(msg: impl Into<String>) -> Self {
        Error::Verification(msg.into())
    }
}
