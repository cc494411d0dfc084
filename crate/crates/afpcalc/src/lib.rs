//! Exact calculator for tracial amalgamated free products M = A ∗_D B
//! over a finite-dimensional amalgam D.
//!
//! The engine rewrites a product of direct sums of matrix algebras,
//! diffuse abelian algebras, the hyperfinite II₁ factor and interpolated
//! free-group factors into its direct-sum structure with exact rational
//! trace weights and factor parameters, a free-dimension value, the
//! traces of distinguished projections in each output summand, and a
//! machine-checkable derivation certificate. A random-matrix Monte
//! Carlo oracle cross-checks scalar-amalgam atom predictions at desk
//! scale.

pub mod dsl;
pub mod engine;
pub mod mc;
pub mod model;
pub mod rat;
