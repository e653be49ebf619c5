//! Exact verification of everything the pipeline emits, and the pipeline
//! itself ([`build_bundle`]).
//!
//! Identity checks compare canonical polynomials. [`sample_soundness`] is the
//! one exception: it evaluates at grid points, as an independent kind of evidence.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactpoly::{certify_all, IntervalCert, Rational, UniPoly};
use crate::registry::DecompositionStrategy;
use crate::repforge::{
    check_convex_at_base, psd_factorization, support_rep_from_decomposition, validity_polynomials,
    ConicRep, Functional, Generator, Mat2, PsdFactorization, SupportCertificate, SupportConeRep,
};
use crate::tensorcalc::{taylor_remainder, tangent_tensor, TensorDecomposition};

/// Every reason `d` fails to decompose the Taylor remainder of `f`.
pub fn decomposition_failures(f: &UniPoly, d: &TensorDecomposition) -> Vec<String> {
    let mut out = d.invariant_violations();
    let remainder = taylor_remainder(f);
    if d.expand() != remainder {
        out.push("terms do not re-expand to the Taylor remainder of f".to_string());
    }
    if d.base != remainder {
        out.push("stored base is not the Taylor remainder of f".to_string());
    }
    out
}

pub fn check_decomposition(f: &UniPoly, d: &TensorDecomposition) -> bool {
    decomposition_failures(f, d).is_empty()
}

pub fn factorization_failures(f: &UniPoly, fac: &PsdFactorization) -> Vec<String> {
    let mut out = Vec::new();
    if fac.total() != tangent_tensor(f) {
        out.push("sum of <A_i(u), B_i(v)> differs from the tangent tensor".to_string());
    }
    if fac.a.is_negative() {
        out.push(format!("negative radius {}", fac.a));
        return out;
    }
    let polys: Vec<UniPoly> = fac
        .terms
        .iter()
        .flat_map(|t| [t.p.clone(), t.q.clone()])
        .collect();
    match certify_all(&polys, &fac.a) {
        Ok(Ok(_)) => {}
        Ok(Err(r)) => out.push(format!(
            "{}_{} takes value {} < 0 at {} in [-{a}, {a}]",
            if r.index % 2 == 0 { "p" } else { "q" },
            r.index / 2,
            r.value,
            r.witness,
            a = fac.a
        )),
        Err(e) => out.push(e.to_string()),
    }
    out
}

pub fn check_factorization(f: &UniPoly, fac: &PsdFactorization) -> bool {
    factorization_failures(f, fac).is_empty()
}

pub fn support_certificate_failures(
    s: &SupportConeRep,
    functional: &Functional,
    c: &Rational,
    g: &[Mat2],
) -> Vec<String> {
    let mut out = Vec::new();
    if c.is_negative() {
        out.push(format!("c = {c} is negative"));
    }
    for (i, m) in g.iter().enumerate() {
        if !m.is_psd() {
            out.push(format!("G_{i} is not PSD"));
        }
    }
    let cert = SupportCertificate {
        c: c.clone(),
        g: g.to_vec(),
    };
    match s.certificate_polynomial(&cert) {
        None => out.push(format!(
            "{} matrices supplied, {} multipliers expected",
            g.len(),
            s.multipliers().len()
        )),
        Some(rhs) => {
            if rhs != functional.on_graph(&s.f) {
                out.push("coefficient identity fails".to_string());
            }
        }
    }
    out
}

pub fn check_support_certificate(
    s: &SupportConeRep,
    functional: &Functional,
    c: &Rational,
    g: &[Mat2],
) -> bool {
    support_certificate_failures(s, functional, c, g).is_empty()
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SampleViolation {
    pub v: Rational,
    pub t: Rational,
    /// `f(t) - f(v) - (t - v) f'(v)`
    pub tangent_slack: Rational,
    /// `(t - v)^2 sum_i t^mu_i v^mv_i p_i(t) q_i(v)`
    pub decomposed: Rational,
}

impl std::fmt::Display for SampleViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "(v, t) = ({}, {}): slack {} vs decomposition {}",
            self.v, self.t, self.tangent_slack, self.decomposed
        )
    }
}

/// Evaluates the tangent slack and its decomposed form on a `grid x grid`
/// lattice of `[-a, a]^2`; lists points where they differ or are negative,
/// sorted by `(v, t)`.
pub fn sample_soundness(s: &SupportConeRep, grid: usize) -> Result<Vec<SampleViolation>> {
    if grid < 2 {
        return Err(Error::InvalidArgument(format!("grid must be at least 2, got {grid}")));
    }
    let step = Rational::from_int(2) * &s.a / Rational::from_int(grid as i64 - 1);
    let ticks: Vec<Rational> = (0..grid)
        .map(|k| -&s.a + &step * Rational::from_int(k as i64))
        .collect();
    let df = s.f.derivative();
    let pairs: Vec<(&Rational, &Rational)> = ticks
        .iter()
        .flat_map(|v| ticks.iter().map(move |t| (v, t)))
        .collect();
    let mut out: Vec<SampleViolation> = pairs
        .par_iter()
        .filter_map(|&(v, t)| {
            let d = t - v;
            let slack = s.f.eval(t) - s.f.eval(v) - &d * df.eval(v);
            let sum: Rational = s
                .decomp
                .terms
                .iter()
                .map(|term| {
                    t.pow(term.mu) * v.pow(term.mv) * term.p.eval(t) * term.q.eval(v)
                })
                .sum();
            let decomposed = &d * &d * sum;
            if slack != decomposed || slack.is_negative() {
                Some(SampleViolation {
                    v: v.clone(),
                    t: t.clone(),
                    tangent_slack: slack,
                    decomposed,
                })
            } else {
                None
            }
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Which side of the graph the set lies on. Hypographs are stored reflected,
/// so `f` in a bundle always has a convex epigraph near 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Epigraph,
    Hypograph,
}

/// `f` itself if its epigraph is convex near 0, `-f` if its hypograph is.
pub fn normalize_orientation(f: &UniPoly) -> Result<(UniPoly, Orientation)> {
    match check_convex_at_base(f) {
        Ok(_) => Ok((f.clone(), Orientation::Epigraph)),
        Err(first) => {
            let g = -f;
            match check_convex_at_base(&g) {
                Ok(_) => Ok((g, Orientation::Hypograph)),
                Err(_) => Err(first),
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorCert {
    pub generator: Generator,
    pub c: Rational,
    pub g: Vec<Mat2>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateBundle {
    pub f: UniPoly,
    pub orientation: Orientation,
    pub a: Rational,
    pub decomp: TensorDecomposition,
    pub radius_certs: Vec<IntervalCert>,
    #[serde(default)]
    pub factorization: Option<PsdFactorization>,
    #[serde(default)]
    pub generator_certs: Vec<GeneratorCert>,
    /// Support-cone representation; when present it must be the one
    /// assembled from `f`, `a` and `decomp`.
    #[serde(default)]
    pub representation: Option<ConicRep>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationResult {
    pub ok: bool,
    pub failures: Vec<String>,
}

pub fn verify_bundle(b: &CertificateBundle) -> VerificationResult {
    let mut failures = Vec::new();
    if !b.a.is_positive() {
        failures.push(format!("radius a = {} is not positive", b.a));
    }
    for msg in decomposition_failures(&b.f, &b.decomp) {
        failures.push(format!("decomposition: {msg}"));
    }
    if b.decomp.flat_order % 2 == 1 {
        failures.push(format!("decomposition: odd flat order {}", b.decomp.flat_order));
    }

    let lo = -&b.a;
    for (i, cert) in b.radius_certs.iter().enumerate() {
        if cert.lo != lo || cert.hi != b.a {
            failures.push(format!("radius cert {i}: interval is not [-a, a]"));
        } else if !cert.recheck() {
            failures.push(format!("radius cert {i}: does not recheck"));
        }
    }
    for p in validity_polynomials(&b.decomp) {
        if !b.radius_certs.iter().any(|c| c.poly == p) {
            failures.push(format!("radius certs: no certificate for {p}"));
        }
    }

    if let Some(fac) = &b.factorization {
        if fac.a != b.a {
            failures.push(format!("factorization: radius {} differs from a", fac.a));
        }
        for msg in factorization_failures(&b.f, fac) {
            failures.push(format!("factorization: {msg}"));
        }
    }

    let s = SupportConeRep::assemble(&b.f, &b.a, &b.decomp);
    for (i, gc) in b.generator_certs.iter().enumerate() {
        let functional = gc.generator.functional(&b.f, &b.a);
        for msg in support_certificate_failures(&s, &functional, &gc.c, &gc.g) {
            failures.push(format!("generator cert {i}: {msg}"));
        }
    }
    if let Some(rep) = &b.representation {
        if *rep != s.rep {
            failures.push("representation differs from the one assembled from f, a, decomp".into());
        }
    }
    VerificationResult {
        ok: failures.is_empty(),
        failures,
    }
}

pub struct BuildOptions<'a> {
    pub cap: Rational,
    pub precision: Rational,
    /// Replaces the strategy's decomposition when given.
    pub decomp: Option<TensorDecomposition>,
    pub strategy: &'a dyn DecompositionStrategy,
    /// Number of equally spaced tangents to certify (strict case).
    pub samples: usize,
}

/// Normalizes orientation, decomposes, certifies the radius and emits every
/// certificate the representation supports.
pub fn build_bundle(f: &UniPoly, opts: &BuildOptions) -> Result<(SupportConeRep, CertificateBundle)> {
    let (g, orientation) = normalize_orientation(f)?;
    let decomp = match &opts.decomp {
        Some(d) => d.clone(),
        None => opts.strategy.decompose(&g)?,
    };
    let s = support_rep_from_decomposition(&g, decomp, &opts.cap, &opts.precision)?;
    let radius_certs = match certify_all(&validity_polynomials(&s.decomp), &s.a)? {
        Ok(certs) => certs,
        Err(r) => return Err(Error::RadiusRefuted(r.to_string())),
    };
    let factorization = if s.decomp.flat_order == 0 {
        Some(psd_factorization(&g, &s.decomp, &s.a)?)
    } else {
        None
    };
    let generator_certs = s
        .generator_certificates(opts.samples)
        .into_iter()
        .map(|(generator, cert)| GeneratorCert {
            generator,
            c: cert.c,
            g: cert.g,
        })
        .collect();
    let bundle = CertificateBundle {
        f: g,
        orientation,
        a: s.a.clone(),
        decomp: s.decomp.clone(),
        radius_certs,
        factorization,
        generator_certs,
        representation: Some(s.rep.clone()),
    };
    Ok((s, bundle))
}
