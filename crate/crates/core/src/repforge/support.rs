//! The support-cone representation of `K_a = { (x, y) : y >= f(x), |x| <= a }`.
//!
//! A functional `A x + B y + C` is certified nonnegative on `K_a` by an identity
//!
//! ```text
//! A t + B f(t) + C = c (a^2 - t^2) + sum_i g_i(t) P_i(t),   c >= 0,
//! g_i(t) = a_i t^2 + 2 b_i t + c_i,  [[a_i, b_i], [b_i, c_i]] PSD,
//! ```
//!
//! where `P_0 = 1` and `P_i = t^k p_i(t)` for the decomposition terms
//! (`k` the flat order). Matching coefficients turns the identity into linear
//! equalities, so the whole thing is a representation with 2x2 blocks.

use serde::{Deserialize, Serialize};

use super::conic::{AffineForm, Block, ConicRep, Mat2, RepKind};
use crate::error::{Error, Result};
use crate::exactpoly::{certified_radius, Rational, UniPoly};
use crate::registry::{AutoStrategy, DecompositionStrategy};
use crate::tensorcalc::{affine_part, TensorDecomposition};

/// Coefficients `(A, B, C)` of the affine functional `A x + B y + C`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Functional {
    #[serde(rename = "A")]
    pub a: Rational,
    #[serde(rename = "B")]
    pub b: Rational,
    #[serde(rename = "C")]
    pub c: Rational,
}

impl Functional {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Self {
        Functional { a, b, c }
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        &self.a * x + &self.b * y + &self.c
    }

    /// `A t + B f(t) + C`
    pub fn on_graph(&self, f: &UniPoly) -> UniPoly {
        &f.scale(&self.b) + &UniPoly::new(vec![self.c.clone(), self.a.clone()])
    }

    pub fn as_vec(&self) -> Vec<Rational> {
        vec![self.a.clone(), self.b.clone(), self.c.clone()]
    }
}

/// Tangent `tau_v = y - f(v) - (x - v) f'(v)` at `(v, f(v))`.
pub fn tangent_line(f: &UniPoly, v: &Rational) -> Functional {
    let df = f.derivative().eval(v);
    let fv = f.eval(v);
    Functional::new(-&df, Rational::one(), v * &df - fv)
}

/// Extreme rays of the support cone that the builder certifies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Generator {
    Tangent { v: Rational },
    /// `a + x` (`sign = 1`) or `a - x` (`sign = -1`).
    Vertical { sign: i8 },
}

impl Generator {
    pub fn functional(&self, f: &UniPoly, a: &Rational) -> Functional {
        match self {
            Generator::Tangent { v } => tangent_line(f, v),
            Generator::Vertical { sign } => {
                Functional::new(Rational::from_int(*sign as i64), Rational::zero(), a.clone())
            }
        }
    }
}

/// `(c, G_0, G_1, ...)` for the identity in the module docs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SupportCertificate {
    pub c: Rational,
    pub g: Vec<Mat2>,
}

impl SupportCertificate {
    /// Lift vector in the layout of [`SupportConeRep::rep`].
    pub fn to_lift(&self) -> Vec<Rational> {
        let mut y = vec![self.c.clone()];
        for m in &self.g {
            y.extend([m.a.clone(), m.b.clone(), m.c.clone()]);
        }
        y
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportConeRep {
    pub f: UniPoly,
    pub a: Rational,
    pub decomp: TensorDecomposition,
    /// Cone over `(A, B, C)`; lifts `[c, a_0, b_0, c_0, a_1, b_1, c_1, ...]`.
    pub rep: ConicRep,
}

impl SupportConeRep {
    /// Assembles the representation for a fixed radius; no certification is done here.
    pub fn assemble(f: &UniPoly, a: &Rational, decomp: &TensorDecomposition) -> Self {
        let multipliers = multipliers(decomp);
        let n_lifts = 1 + 3 * multipliers.len();
        let mut rep = ConicRep::new(RepKind::Cone, 3, n_lifts);
        rep.push_nonneg(rep.y_var(0), "c >= 0");
        for (i, _) in multipliers.iter().enumerate() {
            let base = 1 + 3 * i;
            let label = if i == 0 {
                "G_0 (multiplier 1)".to_string()
            } else {
                format!("G_{i} (term {})", i - 1)
            };
            rep.push(
                Block::Sym2 {
                    a: rep.y_var(base),
                    b: rep.y_var(base + 1),
                    c: rep.y_var(base + 2),
                },
                label,
            );
        }

        // coefficient of t^k in  A t + B f + C - c (a^2 - t^2) - sum g_i P_i
        let max_mult = multipliers.iter().filter_map(UniPoly::degree).max().unwrap_or(0);
        let top = f.degree().unwrap_or(0).max(2 + max_mult);
        let a_sq = a * a;
        for k in 0..=top {
            let mut e = rep.zero_form();
            e.x[0] = if k == 1 { Rational::one() } else { Rational::zero() };
            e.x[1] = f.coeff(k);
            e.x[2] = if k == 0 { Rational::one() } else { Rational::zero() };
            e.y[0] = match k {
                0 => -&a_sq,
                2 => Rational::one(),
                _ => Rational::zero(),
            };
            for (i, p) in multipliers.iter().enumerate() {
                let base = 1 + 3 * i;
                let below = |d: usize| if k >= d { p.coeff(k - d) } else { Rational::zero() };
                e.y[base] -= below(2);
                e.y[base + 1] -= below(1) * Rational::from_int(2);
                e.y[base + 2] -= below(0);
            }
            rep.push_zero(e, &format!("coefficient of t^{k}"));
        }
        SupportConeRep {
            f: f.clone(),
            a: a.clone(),
            decomp: decomp.clone(),
            rep,
        }
    }

    /// `P_0 = 1` followed by `t^k p_i(t)` for every decomposition term.
    pub fn multipliers(&self) -> Vec<UniPoly> {
        multipliers(&self.decomp)
    }

    /// Right-hand side `c (a^2 - t^2) + sum g_i(t) P_i(t)` of a certificate.
    pub fn certificate_polynomial(&self, cert: &SupportCertificate) -> Option<UniPoly> {
        let ps = self.multipliers();
        if cert.g.len() != ps.len() {
            return None;
        }
        let mut out = UniPoly::new(vec![&self.a * &self.a, Rational::zero(), Rational::from_int(-1)])
            .scale(&cert.c);
        for (g, p) in cert.g.iter().zip(&ps) {
            let quad = UniPoly::new(vec![g.c.clone(), &g.b * Rational::from_int(2), g.a.clone()]);
            out = &out + &(&quad * p);
        }
        Some(out)
    }

    /// Certificate for a tangent, `G_i = w_i(v) [[1, -v], [-v, v^2]]` with
    /// `w_i(v) = q_i(v)`, so that `g_i(t) = w_i (t - v)^2`. At a flat point
    /// the multipliers only reproduce the tangent at `v = 0`; `None` elsewhere,
    /// and whenever some weight is negative.
    pub fn tangent_certificate(&self, v: &Rational) -> Option<SupportCertificate> {
        if self.decomp.flat_order > 0 && !v.is_zero() {
            return None;
        }
        let unit = Mat2::new(Rational::one(), -v, v * v);
        let mut g = vec![Mat2::zero()];
        for term in &self.decomp.terms {
            let w = if term.mv == 0 {
                term.q.eval(v)
            } else {
                // v = 0 here
                Rational::zero()
            };
            if w.is_negative() {
                return None;
            }
            g.push(unit.scale(&w));
        }
        Some(SupportCertificate {
            c: Rational::zero(),
            g,
        })
    }

    /// `a +- t = (a^2 - t^2) / (2a) + (t +- a)^2 / (2a)`.
    pub fn vertical_certificate(&self, sign: i8) -> SupportCertificate {
        let inv = (Rational::from_int(2) * &self.a).recip();
        let s = Rational::from_int(sign as i64);
        let g0 = Mat2::new(Rational::one(), &s * &self.a, &self.a * &self.a).scale(&inv);
        let mut g = vec![g0];
        g.extend(self.decomp.terms.iter().map(|_| Mat2::zero()));
        SupportCertificate { c: inv, g }
    }

    /// Certificates for the generators the builder can always produce:
    /// tangents at `samples` equally spaced points of `[-a, a]` (only `v = 0`
    /// at a flat point) plus both verticals.
    pub fn generator_certificates(&self, samples: usize) -> Vec<(Generator, SupportCertificate)> {
        let mut out = Vec::new();
        let points: Vec<Rational> = if self.decomp.flat_order > 0 || samples < 2 {
            vec![Rational::zero()]
        } else {
            let step = Rational::from_int(2) * &self.a / Rational::from_int(samples as i64 - 1);
            (0..samples)
                .map(|k| -&self.a + &step * Rational::from_int(k as i64))
                .collect()
        };
        for v in points {
            if let Some(cert) = self.tangent_certificate(&v) {
                out.push((Generator::Tangent { v }, cert));
            }
        }
        for sign in [1, -1] {
            out.push((Generator::Vertical { sign }, self.vertical_certificate(sign)));
        }
        out
    }

    /// Certificate for `functional` when it is a positive multiple of a
    /// vertical or of a tangent at one of `candidates`. General members of the
    /// support cone need a conic solver; those are reported as
    /// `needs-external-solver`.
    pub fn certify_member(
        &self,
        functional: &Functional,
        candidates: &[Rational],
    ) -> Result<SupportCertificate> {
        let scaled = |cert: SupportCertificate, k: &Rational| SupportCertificate {
            c: &cert.c * k,
            g: cert.g.iter().map(|m| m.scale(k)).collect(),
        };
        if functional.b.is_zero() && !functional.a.is_zero() {
            let k = functional.a.abs();
            if functional.c == &k * &self.a {
                return Ok(scaled(self.vertical_certificate(functional.a.signum()), &k));
            }
        }
        if functional.b.is_positive() {
            for v in candidates {
                let tau = tangent_line(&self.f, v);
                let k = functional.b.clone();
                if tau.a.clone() * &k == functional.a && tau.c.clone() * &k == functional.c {
                    if let Some(cert) = self.tangent_certificate(v) {
                        return Ok(scaled(cert, &k));
                    }
                }
            }
        }
        Err(Error::Unsupported(format!(
            "needs-external-solver: no generator certificate for ({}, {}, {})",
            functional.a, functional.b, functional.c
        )))
    }

    /// Highest moment index used by [`Self::moment_rep`].
    pub fn moment_degree(&self) -> usize {
        let max_mult = self.multipliers().iter().filter_map(UniPoly::degree).max().unwrap_or(0);
        self.f.degree().unwrap_or(0).max(2 + max_mult)
    }

    /// Dual (moment) side: `(x, y)` with lifts `m_0..m_D` subject to
    /// `[[<m,P>, <m,tP>], [<m,tP>, <m,t^2 P>]]` PSD for every multiplier,
    /// `<m, a^2 - t^2> >= 0`, `m_0 = 1`, `m_1 = x` and `y - <m, f> >= 0`.
    pub fn moment_rep(&self) -> ConicRep {
        let d = self.moment_degree();
        let mut rep = ConicRep::new(RepKind::Set, 2, d + 1);
        let pair = |rep: &ConicRep, p: &UniPoly| -> AffineForm {
            let mut e = rep.zero_form();
            for (k, c) in p.coeffs().iter().enumerate() {
                e.y[k] = c.clone();
            }
            e
        };
        for (i, p) in self.multipliers().iter().enumerate() {
            rep.push(
                Block::Sym2 {
                    a: pair(&rep, p),
                    b: pair(&rep, &p.shift(1)),
                    c: pair(&rep, &p.shift(2)),
                },
                format!("localizing block {i}"),
            );
        }
        let interval = UniPoly::new(vec![&self.a * &self.a, Rational::zero(), Rational::from_int(-1)]);
        let loc = pair(&rep, &interval);
        rep.push_nonneg(loc, "<m, a^2 - t^2> >= 0");
        let m0 = rep.y_var(0).add(&rep.constant(Rational::from_int(-1)));
        rep.push_zero(m0, "m_0 = 1");
        let m1 = rep.y_var(1).add(&rep.x_var(0).neg());
        rep.push_zero(m1, "m_1 = x");
        let slack = rep.x_var(1).add(&pair(&rep, &self.f).neg());
        rep.push_nonneg(slack, "y - <m, f> >= 0");
        rep
    }

    /// Moment lift `m_k = x^k` for a point of `K_a`.
    pub fn moment_lift(&self, x: &Rational) -> Vec<Rational> {
        (0..=self.moment_degree()).map(|k| x.pow(k as u32)).collect()
    }

    /// Weak-duality refutation of a point outside `K_a`: a certified generator
    /// that is negative at `(x, y)`.
    pub fn refute_point(&self, x: &Rational, y: &Rational) -> Option<(Generator, SupportCertificate)> {
        if x > &self.a {
            return Some((Generator::Vertical { sign: -1 }, self.vertical_certificate(-1)));
        }
        if x < &-&self.a {
            return Some((Generator::Vertical { sign: 1 }, self.vertical_certificate(1)));
        }
        if y < &self.f.eval(x) {
            let cert = self.tangent_certificate(x)?;
            return Some((Generator::Tangent { v: x.clone() }, cert));
        }
        None
    }
}

fn multipliers(decomp: &TensorDecomposition) -> Vec<UniPoly> {
    let k = decomp.flat_order as usize;
    let mut out = vec![UniPoly::one()];
    out.extend(decomp.terms.iter().map(|t| t.p.shift(k)));
    out
}

/// Every `p_i` and `q_i` of a decomposition, without repeats.
pub fn validity_polynomials(decomp: &TensorDecomposition) -> Vec<UniPoly> {
    let mut out: Vec<UniPoly> = Vec::new();
    for t in &decomp.terms {
        for p in [&t.p, &t.q] {
            if !out.contains(p) {
                out.push(p.clone());
            }
        }
    }
    out
}

/// Rejects `f` unless its lowest non-affine term `c_m t^m` has even `m` and `c_m > 0`.
pub fn check_convex_at_base(f: &UniPoly) -> Result<usize> {
    let g = f - &affine_part(f);
    let Some(m) = g.lowest_degree() else {
        return Err(Error::NotConvex(
            "f is affine; its epigraph is a half-plane".to_string(),
        ));
    };
    let c_m = g.coeff(m);
    if m % 2 == 1 {
        return Err(Error::NotConvex(format!(
            "lowest non-affine term has odd degree {m}"
        )));
    }
    if !c_m.is_positive() {
        return Err(Error::NotConvex(format!(
            "lowest non-affine coefficient c_{m} = {c_m} is negative"
        )));
    }
    Ok(m)
}

/// Builds the support-cone representation with the automatic strategy.
pub fn build_support_rep(f: &UniPoly, cap: &Rational, precision: &Rational) -> Result<SupportConeRep> {
    build_support_rep_with(f, &AutoStrategy, cap, precision)
}

pub fn build_support_rep_with(
    f: &UniPoly,
    strategy: &dyn DecompositionStrategy,
    cap: &Rational,
    precision: &Rational,
) -> Result<SupportConeRep> {
    check_convex_at_base(f)?;
    let decomp = strategy.decompose(f)?;
    support_rep_from_decomposition(f, decomp, cap, precision)
}

/// Uses a caller-supplied decomposition of the Taylor remainder of `f`.
pub fn support_rep_from_decomposition(
    f: &UniPoly,
    decomp: TensorDecomposition,
    cap: &Rational,
    precision: &Rational,
) -> Result<SupportConeRep> {
    check_convex_at_base(f)?;
    let violations = decomp.invariant_violations();
    if !violations.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "decomposition invalid: {}",
            violations.join("; ")
        )));
    }
    if decomp.base != crate::tensorcalc::taylor_remainder(f) {
        return Err(Error::InvalidArgument(
            "decomposition does not decompose the Taylor remainder of f".to_string(),
        ));
    }
    if decomp.flat_order % 2 == 1 {
        return Err(Error::NotConvex(format!(
            "odd flat order {}",
            decomp.flat_order
        )));
    }
    let a = certified_radius(&validity_polynomials(&decomp), cap, precision)?;
    Ok(SupportConeRep::assemble(f, &a, &decomp))
}
