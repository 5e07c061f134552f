//! Invariant generalised Killing spinors on metric Lie algebras.
//!
//! The pipeline is: a Lie algebra with an inner product ([`algebra`]), its
//! Levi-Civita connection and curvature ([`connection`]), the spin
//! representation ([`clifford`]), and finally the search for a symmetric
//! endomorphism `A` with `∇_X ψ = A(X)·ψ` ([`gks`]). [`catalog`] holds the
//! three-dimensional unimodular/non-unimodular families and the Heisenberg
//! algebras together with their closed-form answers.

pub mod algebra;
pub mod catalog;
pub mod cli;
pub mod clifford;
pub mod connection;
pub mod error;
pub mod gks;
pub mod report;
pub mod sampling;

pub use algebra::{LieAlgebra, Mat, MetricLieAlgebra};
pub use error::{Error, Result};
