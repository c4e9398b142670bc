//! Numerical operator algebra for interval-valued joint quantum probability.
//!
//! Two non-commuting projectors admit no joint precise probability, but they
//! do admit a joint imprecise one: an operator interval [ω̲, ω̄] whose Born
//! expectations bound every admissible assignment. This crate implements the
//! projector lattice, the probability-operator pair, the joint block (CS)
//! decomposition of a projector pair, and the two-particle analysis showing
//! that the upper operator of tensor-product observables is not a tensor
//! product of single-particle upper operators.
//!
//! The `campaign` module runs randomized verification over all of it; with
//! the default `parallel` feature the samples fan out over rayon, and a
//! sequential fallback stays available both as a feature-off build and as
//! [`campaign::run_campaign_sequential`].

pub mod campaign;
pub mod cs;
pub mod eigen;
pub mod error;
pub mod imprecise;
pub mod lattice;
pub mod matrix;
pub mod nonlocality;
pub mod operators;
pub mod random;
pub mod report;
pub mod tolerance;

pub use error::{Error, Result};
pub use matrix::{Complex64, ComplexMatrix};
pub use operators::{DensityMatrix, HermitianOperator, Projector};
pub use random::Seed;
