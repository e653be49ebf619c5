//! Tangent tensors of polynomial graphs `x = t, y = f(t)` in `Q[u, v]`.
//!
//! Identify `Q[t] (x) Q[t]` with `Q[u, v]` through `u = t (x) 1`, `v = 1 (x) t`.
//! The tangent tensor of `f` is `T = f(u) - f(v) - (u - v) f'(v)`; it is
//! divisible by `(u - v)^2` and the quotient is the second-order Taylor
//! remainder of `f(u)` around `v`. Decompositions of that remainder into
//! products `p(u) q(v)` with positive constant terms drive the conic
//! representation built in [`crate::repforge`].

mod decompose;
mod spoly;

pub use decompose::{
    flat_decompose, positive_residue_decompose, strict_decompose, DecompTerm,
    TensorDecomposition,
};
pub use spoly::{s_polynomial, SPoly};

use crate::exactpoly::{BiPoly, Rational, UniPoly};

/// `u - v`
pub fn delta() -> BiPoly {
    &BiPoly::u() - &BiPoly::v()
}

/// `f(u) - f(v) - (u - v) f'(v)`
pub fn tangent_tensor(f: &UniPoly) -> BiPoly {
    let fu = BiPoly::from_u(f);
    let fv = BiPoly::from_v(f);
    let dfv = BiPoly::from_v(&f.derivative());
    &(&fu - &fv) - &(&delta() * &dfv)
}

/// `sum_{k >= 2} f^(k)(v) / k! * (u - v)^(k - 2)`; zero when `deg f < 2`.
pub fn taylor_remainder(f: &UniPoly) -> BiPoly {
    let Some(deg) = f.degree() else {
        return BiPoly::zero();
    };
    let d = delta();
    let mut out = BiPoly::zero();
    let mut deriv = f.differentiate(2);
    let mut factorial = Rational::from_int(2);
    let mut d_pow = BiPoly::constant(Rational::one());
    for k in 2..=deg {
        let coeff = deriv.scale(&factorial.recip());
        out = &out + &(&BiPoly::from_v(&coeff) * &d_pow);
        deriv = deriv.derivative();
        factorial = factorial * Rational::from_int(k as i64 + 1);
        d_pow = &d_pow * &d;
    }
    out
}

/// `f(0)`, `f'(0)` as the affine polynomial `f(0) + f'(0) t`.
pub fn affine_part(f: &UniPoly) -> UniPoly {
    UniPoly::new(vec![f.coeff(0), f.coeff(1)])
}

/// `f''(0)`
pub fn second_derivative_at_zero(f: &UniPoly) -> Rational {
    f.coeff(2) * Rational::from_int(2)
}
