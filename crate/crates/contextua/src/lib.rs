//! Exact truth valuation for quantum propositions.
//!
//! The crate models propositions as closed subspaces of a small
//! finite-dimensional complex space, using exact arithmetic over the field
//! generated by sqrt(2) and the imaginary unit so every verdict is a theorem
//! rather than a rounding artifact. On top of the subspace lattice it builds
//! the three-valued truth rule for pure states, Bub-Clifton determinate
//! sublattices with their two-valued evaluators and contextual mixed states,
//! a Kochen-Specker colorability search over embedded ray sets, and a
//! classical phase-space baseline for contrast.

pub mod bubclifton;
pub mod classical;
pub mod cli;
pub mod datasets;
pub mod error;
pub mod exactlin;
pub mod kscheck;
pub mod lattice;
pub mod valuation;

pub use bubclifton::{
    bounded_closure, dvn_sublattice, Closure, Context, ContextFile, ContextualState,
    DeterminateSublattice, Homomorphism, Observable, ObservableFile,
};
pub use error::{Error, Result};
pub use exactlin::{inner, projector_onto, Mat, Scalar, Vect};
pub use kscheck::{
    build_problem, check_parity_certificate, enumerate_colorings, solve, verify_coloring,
    yu_oh_gap, Problem, RaySet, RaySetFile, SolveReport,
};
pub use lattice::{Ray, Subspace, SubspaceFile};
pub use valuation::{born_probability, classify, State, StateFile, TruthValue};
