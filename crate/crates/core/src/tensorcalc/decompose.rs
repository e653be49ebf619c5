use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{second_derivative_at_zero, taylor_remainder};
use crate::error::{Error, Result};
use crate::exactpoly::{serde_u, serde_v, BiPoly, Rational, UniPoly};

/// One summand `u^mu * v^mv * p(u) * q(v)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompTerm {
    pub mu: u32,
    pub mv: u32,
    #[serde(with = "serde_u")]
    pub p: UniPoly,
    #[serde(with = "serde_v")]
    pub q: UniPoly,
}

impl DecompTerm {
    pub fn new(mu: u32, mv: u32, p: UniPoly, q: UniPoly) -> Self {
        DecompTerm { mu, mv, p, q }
    }

    pub fn expand(&self) -> BiPoly {
        BiPoly::tensor(&self.p, &self.q).shift(self.mu, self.mv)
    }
}

/// `base = sum_i u^mu_i v^mv_i p_i(u) q_i(v)` with `p_i(0), q_i(0) > 0` and
/// `mu_i + mv_i = flat_order` for every term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorDecomposition {
    pub flat_order: u32,
    pub terms: Vec<DecompTerm>,
    pub base: BiPoly,
}

impl TensorDecomposition {
    pub fn expand(&self) -> BiPoly {
        self.terms
            .iter()
            .fold(BiPoly::zero(), |acc, t| &acc + &t.expand())
    }

    /// Lists every violated invariant; empty when the decomposition is valid.
    pub fn invariant_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.expand() != self.base {
            out.push("sum of terms does not re-expand to the base tensor".to_string());
        }
        for (i, t) in self.terms.iter().enumerate() {
            if !t.p.coeff(0).is_positive() {
                out.push(format!("term {i}: p(0) = {} is not positive", t.p.coeff(0)));
            }
            if !t.q.coeff(0).is_positive() {
                out.push(format!("term {i}: q(0) = {} is not positive", t.q.coeff(0)));
            }
            if t.mu + t.mv != self.flat_order {
                out.push(format!(
                    "term {i}: monomial prefactor degree {} differs from flat order {}",
                    t.mu + t.mv,
                    self.flat_order
                ));
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.invariant_violations().is_empty()
    }
}

/// Rewrites `sum_i a_i(u) b_i(v)` with `sum_i a_i(0) b_i(0) > 0` as a sum of
/// products whose factors are all positive at 0.
///
/// With `c_i = a_i(0)`, `d_i = b_i(0)`, `alpha_i = a_i - c_i`,
/// `beta_i = b_i - d_i`, residue `theta = sum c_i d_i`, `r = s = theta / 4`
/// and `s_i = theta / (2N)`, the output pairs are `(1 + alpha_i, s_i + beta_i)`,
/// `(r + sum (d_i - s_i) alpha_i, 1)` and `(1, s + sum (c_i - 1) beta_i)`.
/// Pairs with a zero factor are dropped and all constant-by-constant pairs
/// are merged into one.
pub fn positive_residue_decompose(pairs: &[(UniPoly, UniPoly)]) -> Result<TensorDecomposition> {
    let base = pairs
        .iter()
        .fold(BiPoly::zero(), |acc, (a, b)| &acc + &BiPoly::tensor(a, b));
    let theta: Rational = pairs.iter().map(|(a, b)| a.coeff(0) * b.coeff(0)).sum();
    if !theta.is_positive() {
        return Err(Error::ResidueNotPositive(theta));
    }
    let n = Rational::from_int(pairs.len() as i64);
    let quarter = &theta / Rational::from_int(4);
    let s_i = &theta / (Rational::from_int(2) * n);
    let r_i = Rational::one();

    let mut out: Vec<(UniPoly, UniPoly)> = Vec::with_capacity(pairs.len() + 2);
    let mut first_extra = UniPoly::constant(quarter.clone());
    let mut second_extra = UniPoly::constant(quarter);
    for (a, b) in pairs {
        let c = a.coeff(0);
        let d = b.coeff(0);
        let alpha = a - &UniPoly::constant(c.clone());
        let beta = b - &UniPoly::constant(d.clone());
        out.push((
            &UniPoly::constant(r_i.clone()) + &alpha,
            &UniPoly::constant(s_i.clone()) + &beta,
        ));
        first_extra = &first_extra + &alpha.scale(&(&d - &s_i));
        second_extra = &second_extra + &beta.scale(&(&c - &r_i));
    }
    out.push((first_extra, UniPoly::one()));
    out.push((UniPoly::one(), second_extra));

    let mut constant = Rational::zero();
    let mut terms = Vec::new();
    for (p, q) in out {
        if p.is_zero() || q.is_zero() {
            continue;
        }
        if p.is_constant() && q.is_constant() {
            constant += p.coeff(0) * q.coeff(0);
        } else {
            terms.push(DecompTerm::new(0, 0, p, q));
        }
    }
    if constant.is_positive() {
        terms.insert(0, DecompTerm::new(0, 0, UniPoly::constant(constant), UniPoly::one()));
    }
    Ok(TensorDecomposition {
        flat_order: 0,
        terms,
        base,
    })
}

/// One elementary pair `(u^j, g_j(v))` per occurring u-degree `j`.
fn elementary_pairs(t: &BiPoly) -> Vec<(UniPoly, UniPoly)> {
    t.group_by_u()
        .into_iter()
        .map(|(j, g)| (UniPoly::monomial(Rational::one(), j as usize), g))
        .collect()
}

/// Decomposition of the Taylor remainder of `f` when `f''(0) > 0`.
pub fn strict_decompose(f: &UniPoly) -> Result<TensorDecomposition> {
    let f2 = second_derivative_at_zero(f);
    if !f2.is_positive() {
        return Err(Error::NotStrictlyConvex(f2));
    }
    let remainder = taylor_remainder(f);
    positive_residue_decompose(&elementary_pairs(&remainder))
}

/// Decomposition at a flat point: `f = c_m t^m + ...` with `c_m > 0`, `m >= 2`
/// and zero affine part. The remainder `R` is written as
/// `sum_{i=0}^{m-2} u^(m-2-i) v^i G_i(u, v)` and each `G_i` is decomposed by
/// [`positive_residue_decompose`]; `m = 2` coincides with [`strict_decompose`].
pub fn flat_decompose(f: &UniPoly) -> Result<TensorDecomposition> {
    if !f.coeff(0).is_zero() || !f.coeff(1).is_zero() {
        return Err(Error::InvalidArgument(format!(
            "flat decomposition needs zero affine part, got f(0) = {}, f'(0) = {}",
            f.coeff(0),
            f.coeff(1)
        )));
    }
    let Some(m) = f.lowest_degree() else {
        return Err(Error::InvalidArgument(
            "flat decomposition of the zero polynomial".to_string(),
        ));
    };
    let c_m = f.coeff(m);
    if !c_m.is_positive() {
        return Err(Error::InvalidArgument(format!(
            "leading flat coefficient c_{m} = {c_m} is not positive"
        )));
    }
    if m == 2 {
        return strict_decompose(f);
    }
    let k = (m - 2) as u32;
    let remainder = taylor_remainder(f);

    // cofactor i multiplies the generator u^(k-i) v^i
    let mut cofactors: BTreeMap<u32, BiPoly> = BTreeMap::new();
    for (&(a, b), c) in remainder.terms() {
        let i = (0..=b.min(k))
            .rev()
            .find(|&i| a >= k - i)
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "monomial u^{a} v^{b} lies outside the ideal generated in degree {k}"
                ))
            })?;
        cofactors
            .entry(i)
            .or_default()
            .add_term(a - (k - i), b - i, c.clone());
    }

    let mut terms = Vec::new();
    for (i, g) in cofactors {
        let sub = positive_residue_decompose(&elementary_pairs(&g))?;
        terms.extend(sub.terms.into_iter().map(|t| DecompTerm {
            mu: k - i,
            mv: i,
            ..t
        }));
    }
    Ok(TensorDecomposition {
        flat_order: k,
        terms,
        base: remainder,
    })
}
