//! Numerical verification kernel for Clifford-algebra exponential identities
//! and classical dynamical Yang-Baxter r-matrices.
//!
//! The crate is organized around six subsystems:
//!
//! * [`blade`] — sparse multivector arithmetic over a quadratic generator
//!   system (wedge, contraction, Clifford product, quantization/symbol,
//!   exponentials, star operator, dense operator oracles);
//! * [`matfun`] — analytic/meromorphic functions of skew-adjoint matrices
//!   (j, f, g, j^L/j^R, hyperbolic maps, Cayley transforms, determinant
//!   square roots, Pfaffians, directional derivatives);
//! * [`lie`] — quadratic Lie algebras: validation, adjoint maps, the cubic
//!   element, Schouten bracket, Lie/Clifford differentials, and a catalog of
//!   named algebras;
//! * [`rmatrix`] — the dynamical r-matrix families (full, split, twisted),
//!   the S function, CDYBE residuals, and transformation combinators;
//! * [`spinor`] — the doubled-space spinor representation and the Gauss
//!   factorization of Clifford exponentials;
//! * [`harness`] — config ingestion, seeded identity suites, and JSON
//!   reports backing the command-line verifier.

pub mod blade;
pub mod error;
pub mod harness;
pub mod lie;
pub mod matfun;
pub mod rmatrix;
pub mod spinor;

pub use blade::{
    gamma_of, lambda_inv, lambda_of, operator_of, GeneratorSystem, MultiVector, OperatorMatrix,
    System,
};
pub use error::{Error, Result};
pub use harness::report::ResidualReport;
pub use lie::{OrthogonalAutomorphism, QuadraticLieAlgebra, SubalgebraSplit};
pub use matfun::{AnalyticFunctionId, SkewAdjointMap};
