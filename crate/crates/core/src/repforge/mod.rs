//! Explicit representations with PSD blocks of size at most two.

mod combinators;
mod conic;
mod factor;
mod support;

pub use combinators::{
    cone_hull, cone_hull_lift, intersect, intersect_lift, product, product_lift, union_hull,
    union_hull_lift,
};
pub use conic::{check_point, is_psd2, AffineForm, Block, ConicRep, Mat2, RepKind};
pub use factor::{psd_factorization, FactorTerm, PolyMat2, PsdFactorization};
pub use support::{
    build_support_rep, build_support_rep_with, check_convex_at_base, support_rep_from_decomposition,
    tangent_line, validity_polynomials, Functional, Generator, SupportCertificate, SupportConeRep,
};
