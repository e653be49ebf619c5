//! Rank-one PSD factorization of the tangent slack.
//!
//! For a strict decomposition `R(u, v) = sum_i p_i(u) q_i(v)` of the Taylor
//! remainder, the matrices `A_i(u) = p_i(u) [[1, u], [u, u^2]]` and
//! `B_i(v) = q_i(v) [[v^2, -v], [-v, 1]]` are PSD of rank at most one on
//! `[-a, a]` and `tau_v(u, f(u)) = sum_i <A_i(u), B_i(v)>`.

use serde::de::Deserializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactpoly::{certify_all, serde_u, serde_v, BiPoly, NamedPoly, Rational, UniPoly};
use crate::tensorcalc::{taylor_remainder, TensorDecomposition};

/// `[[m00, m01], [m10, m11]]` with polynomial entries.
pub type PolyMat2 = [[UniPoly; 2]; 2];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorTerm {
    pub p: UniPoly,
    pub q: UniPoly,
}

impl FactorTerm {
    /// `p(u) [[1, u], [u, u^2]]`
    pub fn a_form(&self) -> PolyMat2 {
        let pu = self.p.shift(1);
        [[self.p.clone(), pu.clone()], [pu, self.p.shift(2)]]
    }

    /// `q(v) [[v^2, -v], [-v, 1]]`
    pub fn b_form(&self) -> PolyMat2 {
        let qv = -&self.q.shift(1);
        [[self.q.shift(2), qv.clone()], [qv, self.q.clone()]]
    }

    /// `<A(u), B(v)>` as a polynomial in `(u, v)`.
    pub fn inner_product(&self) -> BiPoly {
        let a = self.a_form();
        let b = self.b_form();
        let mut out = BiPoly::zero();
        for i in 0..2 {
            for j in 0..2 {
                out = &out + &BiPoly::tensor(&a[i][j], &b[i][j]);
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsdFactorization {
    pub a: Rational,
    pub terms: Vec<FactorTerm>,
}

impl PsdFactorization {
    pub fn total(&self) -> BiPoly {
        self.terms
            .iter()
            .fold(BiPoly::zero(), |acc, t| &acc + &t.inner_product())
    }
}

/// Reads off the factorization from a strict decomposition whose factors are
/// certified nonnegative on `[-a, a]`.
pub fn psd_factorization(
    f: &UniPoly,
    decomp: &TensorDecomposition,
    a: &Rational,
) -> Result<PsdFactorization> {
    if decomp.flat_order > 0 {
        return Err(Error::Unsupported(format!(
            "PSD factorization at a flat point (flat order {})",
            decomp.flat_order
        )));
    }
    if a.is_negative() {
        return Err(Error::InvalidArgument(format!("negative radius {a}")));
    }
    if decomp.expand() != taylor_remainder(f) {
        return Err(Error::InvalidArgument(
            "decomposition does not re-expand to the Taylor remainder of f".to_string(),
        ));
    }
    let factors: Vec<UniPoly> = decomp
        .terms
        .iter()
        .flat_map(|t| [t.p.clone(), t.q.clone()])
        .collect();
    if let Err(refutation) = certify_all(&factors, a)? {
        let which = if refutation.index % 2 == 0 { "p" } else { "q" };
        return Err(Error::RadiusRefuted(format!(
            "{which}_{} is negative on [-{a}, {a}]: value {} at {}",
            refutation.index / 2,
            refutation.value,
            refutation.witness
        )));
    }
    Ok(PsdFactorization {
        a: a.clone(),
        terms: decomp
            .terms
            .iter()
            .map(|t| FactorTerm {
                p: t.p.clone(),
                q: t.q.clone(),
            })
            .collect(),
    })
}

struct NamedMat<'a>(&'a PolyMat2, &'a str);

impl Serialize for NamedMat<'_> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let NamedMat(m, var) = *self;
        let cell = |i: usize, j: usize| NamedPoly { var, poly: &m[i][j] };
        [[cell(0, 0), cell(0, 1)], [cell(1, 0), cell(1, 1)]].serialize(s)
    }
}

#[derive(Serialize)]
struct FactorTermOut<'a> {
    #[serde(with = "serde_u")]
    p: UniPoly,
    #[serde(with = "serde_v")]
    q: UniPoly,
    #[serde(rename = "A_form")]
    a_form: NamedMat<'a>,
    #[serde(rename = "B_form")]
    b_form: NamedMat<'a>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FactorTermIn {
    p: UniPoly,
    q: UniPoly,
    #[serde(rename = "A_form")]
    a_form: Option<[[UniPoly; 2]; 2]>,
    #[serde(rename = "B_form")]
    b_form: Option<[[UniPoly; 2]; 2]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FactorizationIn {
    a: Rational,
    terms: Vec<FactorTermIn>,
}

impl Serialize for PsdFactorization {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let forms: Vec<(PolyMat2, PolyMat2)> =
            self.terms.iter().map(|t| (t.a_form(), t.b_form())).collect();
        let terms: Vec<FactorTermOut> = self
            .terms
            .iter()
            .zip(&forms)
            .map(|(t, (af, bf))| FactorTermOut {
                p: t.p.clone(),
                q: t.q.clone(),
                a_form: NamedMat(af, "u"),
                b_form: NamedMat(bf, "v"),
            })
            .collect();
        let mut st = s.serialize_struct("PsdFactorization", 2)?;
        st.serialize_field("a", &self.a)?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for PsdFactorization {
    /// Matrix forms are optional on input; when present they must agree with `p`, `q`.
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = FactorizationIn::deserialize(d)?;
        let mut terms = Vec::with_capacity(raw.terms.len());
        for (i, t) in raw.terms.into_iter().enumerate() {
            let term = FactorTerm { p: t.p, q: t.q };
            if t.a_form.is_some_and(|m| m != term.a_form()) {
                return Err(serde::de::Error::custom(format!("term {i}: A_form disagrees with p")));
            }
            if t.b_form.is_some_and(|m| m != term.b_form()) {
                return Err(serde::de::Error::custom(format!("term {i}: B_form disagrees with q")));
            }
            terms.push(term);
        }
        Ok(PsdFactorization { a: raw.a, terms })
    }
}
