//! Exact machinery for tropical pair-of-pants decompositions and their mirrors.
//!
//! The crate is organised around six subsystems:
//!
//! * [`tropical`] — lattice polytopes, integer lifts, regular unimodular
//!   triangulations and discrete Legendre duality (plain and Gram-twisted);
//! * [`toric`] — the graded semigroup ring of the induced toric degeneration,
//!   its fan model, chart/smoothness checks and central-fibre analysis;
//! * [`periodic`] — the quasi-periodic (abelian) variant: periodic lifts,
//!   quotient graded points, truncated ring presentations and the theta
//!   functional-equation exponent check;
//! * [`novikov`] — Novikov scalars with valuations, the sheaf-section
//!   finiteness criterion, and Floer chord enumeration for convex
//!   Hamiltonians;
//! * [`mf`] — matrix factorizations of `W = -z1*z2*z3`, the Z/2-graded
//!   endomorphism algebra, contractions and the signed-algebra
//!   quasi-isomorphisms;
//! * [`pants`] — signed trivalent metrized graphs, double covers, glued
//!   surface invariants and the chart/transition atlas.
//!
//! All core computations are exact over arbitrary-precision rationals; the
//! only floating point lives in the disc-Hamiltonian chord routines, which
//! are documented as such.

pub mod error;
pub mod linalg;
pub mod mf;
pub mod novikov;
pub mod pants;
pub mod periodic;
pub mod rat;
pub mod toric;
pub mod tropical;
pub mod vecops;

pub use error::Error;
pub use rat::Rat;

/// Integer lattice vector. Operations check dimensions at their boundaries.
pub type IVec = Vec<i64>;
/// Rational point or vector.
pub type QVec = Vec<Rat>;
