//! Exact rational arithmetic for univariate and bivariate polynomials.

mod bipoly;
mod rational;
mod sturm;
mod unipoly;

pub use bipoly::BiPoly;
pub use rational::{rat, ParseRationalError, Rational};
pub use sturm::{
    certified_radius, certify_all, count_roots_open, nonneg_on_interval, sturm_sequence,
    IntervalCert, Nonnegativity, RadiusRefutation,
};
pub(crate) use unipoly::{serde_u, serde_v};
pub use unipoly::{format_poly, NamedPoly, UniPoly};

/// k-th formal derivative.
pub fn differentiate(p: &UniPoly, k: usize) -> UniPoly {
    p.differentiate(k)
}
