//! Exact second-order cone representations of planar convex epigraphs.
//!
//! The pipeline takes a convex polynomial `f` with rational coefficients and
//! produces a lifted representation of the epigraph of `f` near a base point by
//! 2x2 PSD blocks, together with exactly checkable certificates:
//!
//! - [`exactpoly`]: rationals, dense univariate and sparse bivariate
//!   polynomials, Sturm-sequence nonnegativity certificates.
//! - [`tensorcalc`]: the tangent tensor `f(u) - f(v) - (u - v) f'(v)`, its
//!   Taylor remainder, S-polynomials and positive-residue decompositions.
//! - [`repforge`]: conic representations with 2x2 blocks, the support-cone
//!   representation, rank-one PSD factorizations and set combinators.
//! - [`certcheck`]: exact verification of everything the builder emits.
//! - [`obstruct`]: an exact LP check of the subset-separation condition
//!   that lower-bounds the block size of any lifted representation.
//! - [`registry`]: named decomposition strategies and LP kernels.

pub mod certcheck;
pub mod error;
pub mod exactpoly;
pub mod json;
pub mod obstruct;
pub mod registry;
pub mod repforge;
pub mod tensorcalc;

pub use error::{Error, Result};
